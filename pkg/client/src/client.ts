import { ApiError, ConnectionError } from './errors.js';
import type {
  Direction,
  DriftReport,
  ExperimentComparison,
  LineageGraph,
  ModelVersion,
  VersionDraft,
} from './types.js';

export interface ClientOptions {
  /** Server origin, e.g. `http://127.0.0.1:8080`. */
  baseUrl: string;
  /** Per-request timeout in seconds. @default 10 */
  timeoutSeconds?: number;
  /** Transport-failure retries for idempotent GETs. @default 2 */
  getRetries?: number;
}

interface RequestSpec {
  method: 'GET' | 'POST';
  path: string;
  query?: Record<string, string>;
  body?: Uint8Array | string;
  contentType?: string;
}

/**
 * Thin client for the driftwatch HTTP API.
 *
 * Each method maps to exactly one route and returns the server's JSON
 * document as parsed — the client computes nothing itself, so every
 * number comes straight from the service. Non-2xx responses surface as
 * {@link ApiError} with the server's message; transport problems as
 * {@link ConnectionError}, retried only for GETs.
 */
export class DriftwatchClient {
  private readonly baseUrl: string;
  private readonly timeoutMs: number;
  private readonly getRetries: number;

  constructor(options: ClientOptions) {
    if (!options.baseUrl) {
      throw new ConnectionError('baseUrl must be a non-empty origin');
    }
    const timeoutSeconds = options.timeoutSeconds ?? 10;
    if (!(timeoutSeconds > 0)) {
      throw new ConnectionError('timeoutSeconds must be positive');
    }
    this.baseUrl = options.baseUrl.replace(/\/+$/, '');
    this.timeoutMs = timeoutSeconds * 1000;
    this.getRetries = options.getRetries ?? 2;
  }

  /** Upload a CSV dataset as a named baseline; resolves to its id. */
  async createBaseline(name: string, csv: Uint8Array | string): Promise<string> {
    const doc = await this.request<{ baseline_id: string }>({
      method: 'POST',
      path: '/v1/baselines',
      query: name ? { name } : undefined,
      body: csv,
      contentType: 'text/csv',
    });
    return doc.baseline_id;
  }

  /** Validate a CSV batch against a stored baseline; resolves to the drift report. */
  async validate(baselineId: string, csv: Uint8Array | string): Promise<DriftReport> {
    return this.request<DriftReport>({
      method: 'POST',
      path: '/v1/validate',
      query: { baseline_id: baselineId },
      body: csv,
      contentType: 'text/csv',
    });
  }

  /** Record a new model version; the server assigns the number. */
  async logVersion(model: string, draft: VersionDraft): Promise<ModelVersion> {
    return this.request<ModelVersion>({
      method: 'POST',
      path: `/v1/models/${encodeURIComponent(model)}/versions`,
      body: JSON.stringify(draft),
      contentType: 'application/json',
    });
  }

  /** A/B/n comparison of the given versions on one metric. */
  async compare(
    model: string,
    metric: string,
    versions: number[],
    direction: Direction = 'max',
  ): Promise<ExperimentComparison> {
    return this.request<ExperimentComparison>({
      method: 'POST',
      path: `/v1/models/${encodeURIComponent(model)}/compare`,
      body: JSON.stringify({ metric, versions, direction }),
      contentType: 'application/json',
    });
  }

  /** Version with the best mean for the metric. */
  async best(model: string, metric: string, direction: Direction = 'max'): Promise<number> {
    const doc = await this.request<{ best_version: number }>({
      method: 'GET',
      path: `/v1/models/${encodeURIComponent(model)}/best`,
      query: { metric, direction },
    });
    return doc.best_version;
  }

  /** Version nodes plus parent->child edges for one model. */
  async lineage(model: string): Promise<LineageGraph> {
    return this.request<LineageGraph>({
      method: 'GET',
      path: `/v1/models/${encodeURIComponent(model)}/lineage`,
    });
  }

  private url(spec: RequestSpec): string {
    const query = spec.query ? `?${new URLSearchParams(spec.query)}` : '';
    return `${this.baseUrl}${spec.path}${query}`;
  }

  private async request<T>(spec: RequestSpec): Promise<T> {
    const attempts = spec.method === 'GET' ? this.getRetries + 1 : 1;
    let lastFailure: ConnectionError | undefined;
    for (let attempt = 1; attempt <= attempts; attempt += 1) {
      try {
        return await this.attempt<T>(spec);
      } catch (err) {
        if (!(err instanceof ConnectionError)) {
          throw err; // ApiError: the server answered, retrying cannot help
        }
        lastFailure = err;
      }
    }
    throw lastFailure ?? new ConnectionError('request failed without a cause');
  }

  private async attempt<T>(spec: RequestSpec): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.url(spec), {
        method: spec.method,
        body: spec.body,
        headers: spec.contentType ? { 'Content-Type': spec.contentType } : undefined,
        signal: AbortSignal.timeout(this.timeoutMs),
      });
    } catch (err) {
      const reason =
        err instanceof Error && err.name === 'TimeoutError'
          ? `request timed out after ${this.timeoutMs} ms`
          : `request failed: ${err instanceof Error ? err.message : String(err)}`;
      throw new ConnectionError(reason, { cause: err });
    }

    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, extractErrorMessage(text, response.status));
    }
    try {
      return JSON.parse(text) as T;
    } catch (err) {
      throw new ApiError(
        response.status,
        `server returned unparseable JSON: ${err instanceof Error ? err.message : String(err)}`,
      );
    }
  }
}

function extractErrorMessage(body: string, status: number): string {
  try {
    const parsed: unknown = JSON.parse(body);
    if (
      typeof parsed === 'object' &&
      parsed !== null &&
      'error' in parsed &&
      typeof (parsed as { error: unknown }).error === 'string'
    ) {
      return (parsed as { error: string }).error;
    }
  } catch {
    // not JSON; fall through to the generic message
  }
  return `request rejected with status ${status}`;
}
