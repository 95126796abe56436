/**
 * Test support: fixture loading and a scripted fake server.
 *
 * Fixtures are verbatim API responses captured from the real server, so
 * the tests replay the exact wire protocol. The FakeServer checks each
 * request against the script in order (method, path, body) and fails on
 * anything unexpected.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { expect } from "vitest";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), "utf-8")) as T;
}

export function fixtureText(name: string): string {
  return readFileSync(join(fixturesDir, name), "utf-8");
}

export interface Exchange {
  method: string;
  path: string;
  /** expected request body: object for JSON, string for raw text */
  body?: unknown;
  status?: number;
  /** response payload: object becomes JSON, string is served verbatim */
  response: unknown;
  headers?: Record<string, string>;
}

class FakeResponse {
  private readonly headerMap: Record<string, string>;

  constructor(
    private readonly payload: string,
    public readonly status: number,
    headers: Record<string, string> = {},
  ) {
    this.headerMap = {};
    for (const [key, value] of Object.entries(headers)) {
      this.headerMap[key.toLowerCase()] = value;
    }
  }

  get ok(): boolean {
    return this.status >= 200 && this.status < 300;
  }

  get statusText(): string {
    return String(this.status);
  }

  readonly headers = {
    get: (name: string): string | null => this.headerMap[name.toLowerCase()] ?? null,
  };

  json(): Promise<unknown> {
    return Promise.resolve(JSON.parse(this.payload));
  }

  text(): Promise<string> {
    return Promise.resolve(this.payload);
  }
}

export class FakeServer {
  private cursor = 0;

  constructor(private readonly script: Exchange[]) {}

  install(): void {
    (globalThis as { fetch: unknown }).fetch = (input: unknown, init?: RequestInit) =>
      this.handle(String(input), init);
  }

  private handle(url: string, init?: RequestInit): Promise<FakeResponse> {
    const method = init?.method ?? "GET";
    const next = this.script[this.cursor];
    if (!next) {
      throw new Error(`unexpected request ${method} ${url} after the script ended`);
    }
    this.cursor += 1;
    expect(`${method} ${url}`).toBe(`${next.method} /api/v1${next.path}`);
    if (next.body !== undefined) {
      const raw = init?.body;
      if (typeof next.body === "string") {
        expect(raw).toBe(next.body);
      } else {
        expect(JSON.parse(String(raw))).toEqual(next.body);
      }
    }
    const payload =
      typeof next.response === "string" ? next.response : JSON.stringify(next.response);
    return Promise.resolve(new FakeResponse(payload, next.status ?? 200, next.headers));
  }

  assertDone(): void {
    expect(this.cursor).toBe(this.script.length);
  }
}

/** Let every pending promise chain settle (fetches resolve in microtasks). */
export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}
