import { type ChildProcess, spawn } from 'node:child_process';
import { once } from 'node:events';
import http from 'node:http';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

export const REPO_ROOT = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  '..', '..', '..',
);

export interface RecordedRequest {
  method: string;
  url: string;
  contentType: string | undefined;
  body: string;
}

type ScriptStep =
  | { kind: 'json'; status: number; document: unknown }
  | { kind: 'raw'; status: number; body: string }
  | { kind: 'destroy' }
  | { kind: 'stall' };

/** Scripted HTTP endpoint: each request consumes the next scripted step. */
export class MockServer {
  readonly requests: RecordedRequest[] = [];
  private readonly script: ScriptStep[] = [];
  private readonly server: http.Server;
  private port = 0;

  constructor() {
    this.server = http.createServer((req, res) => {
      const chunks: Buffer[] = [];
      req.on('data', (chunk) => chunks.push(chunk));
      req.on('end', () => {
        this.requests.push({
          method: req.method ?? '',
          url: req.url ?? '',
          contentType: req.headers['content-type'],
          body: Buffer.concat(chunks).toString('utf-8'),
        });
        const step = this.script.shift() ?? {
          kind: 'json' as const,
          status: 200,
          document: {},
        };
        if (step.kind === 'destroy') {
          res.destroy();
          return;
        }
        if (step.kind === 'stall') {
          return; // hold the request open; the client must time out
        }
        const body = step.kind === 'json' ? JSON.stringify(step.document) : step.body;
        res.writeHead(step.status, { 'Content-Type': 'application/json' });
        res.end(body);
      });
    });
  }

  async start(): Promise<string> {
    this.server.listen(0, '127.0.0.1');
    await once(this.server, 'listening');
    const address = this.server.address();
    if (address === null || typeof address === 'string') {
      throw new Error('mock server has no port');
    }
    this.port = address.port;
    return this.url;
  }

  get url(): string {
    return `http://127.0.0.1:${this.port}`;
  }

  replyJson(document: unknown, status = 200): this {
    this.script.push({ kind: 'json', status, document });
    return this;
  }

  replyRaw(status: number, body: string): this {
    this.script.push({ kind: 'raw', status, body });
    return this;
  }

  dropConnection(): this {
    this.script.push({ kind: 'destroy' });
    return this;
  }

  stall(): this {
    this.script.push({ kind: 'stall' });
    return this;
  }

  async close(): Promise<void> {
    this.server.close();
    this.server.closeAllConnections();
    await once(this.server, 'close');
  }
}

export interface LiveServer {
  baseUrl: string;
  child: ChildProcess;
  stop(): Promise<void>;
}

/** Spawn the real Python service on an ephemeral port and wait for it. */
export async function startDriftwatchServer(): Promise<LiveServer> {
  const storeDir = mkdtempSync(path.join(tmpdir(), 'driftwatch-client-test-'));
  const child = spawn(
    'python3',
    ['-m', 'driftwatch.cli', 'serve', '--store', storeDir, '--addr', '127.0.0.1:0'],
    {
      env: {
        ...process.env,
        PYTHONPATH: path.join(REPO_ROOT, 'src'),
        PYTHONUNBUFFERED: '1',
      },
      stdio: ['ignore', 'pipe', 'pipe'],
    },
  );

  const baseUrl = await new Promise<string>((resolve, reject) => {
    let stderr = '';
    const timer = setTimeout(
      () => reject(new Error(`server did not start; stderr so far:\n${stderr}`)),
      15_000,
    );
    child.stderr?.on('data', (chunk: Buffer) => {
      stderr += chunk.toString('utf-8');
      const match = stderr.match(/serving on ([\d.]+):(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(`http://${match[1]}:${match[2]}`);
      }
    });
    child.on('exit', (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early with code ${code}:\n${stderr}`));
    });
  });

  return {
    baseUrl,
    child,
    async stop() {
      child.kill('SIGTERM');
      await Promise.race([once(child, 'exit'), sleep(2000)]);
      if (child.exitCode === null) child.kill('SIGKILL');
    },
  };
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Plain GET/POST used to double-check client responses field for field. */
export async function direct(
  method: 'GET' | 'POST',
  url: string,
  body?: Uint8Array | string,
  contentType?: string,
): Promise<{ status: number; document: unknown }> {
  const response = await fetch(url, {
    method,
    body,
    headers: contentType ? { 'Content-Type': contentType } : undefined,
  });
  return { status: response.status, document: await response.json() };
}
