/**
 * Base class for every error thrown by the driftwatch client.
 *
 * Catching `DriftwatchClientError` covers both API rejections and
 * transport problems; anything else escaping the SDK is a bug in it.
 */
export class DriftwatchClientError extends Error {
  override name = 'DriftwatchClientError';
}

/**
 * The server answered with a non-2xx status.
 *
 * Carries the HTTP status code and the server's own `error` message when
 * the response body provided one. The client never retries these: the
 * server is the single source of semantic errors, and repeating the call
 * would not change the answer.
 */
export class ApiError extends DriftwatchClientError {
  override name = 'ApiError';

  constructor(
    /** HTTP status code of the rejected response. */
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

/**
 * The request never produced an HTTP response: connection refused, DNS
 * failure, or the per-request timeout elapsed. Idempotent GETs are
 * retried on these before the error is surfaced; writes never are.
 */
export class ConnectionError extends DriftwatchClientError {
  override name = 'ConnectionError';

  constructor(message: string, options?: { cause?: unknown }) {
    super(message, options);
  }
}
