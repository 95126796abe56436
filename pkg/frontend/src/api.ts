/**
 * Typed client for the configurator API.
 *
 * Error payloads are {"error": message}; they surface as ApiError with
 * the HTTP status attached. A 409 on apply means the fixes were computed
 * for an older generation and becomes StaleGenerationError. A 504 from
 * the fixes endpoint still carries a valid (partial) payload with
 * timedOut set, so it resolves normally and the caller reads the flag.
 */

import type {
  ApplyResponse,
  ConfigPutResponse,
  ConfigText,
  DesiredEntry,
  DesiredResponse,
  FixesResponse,
  TreeResponse,
} from "./types.js";

const BASE = "/api/v1";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class StaleGenerationError extends ApiError {}

async function requestJson<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(BASE + path, init);
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    // non-JSON body; handled below
  }
  if (res.ok) {
    return body as T;
  }
  // timed-out fix computation: the payload is still the real response
  if (res.status === 504 && body !== null && typeof body === "object" && "timedOut" in body) {
    return body as T;
  }
  const message =
    body !== null && typeof body === "object" && "error" in body
      ? String((body as { error: unknown }).error)
      : `${res.status} ${res.statusText}`;
  if (res.status === 409) {
    throw new StaleGenerationError(res.status, message);
  }
  throw new ApiError(res.status, message);
}

function postJson<T>(path: string, payload: unknown): Promise<T> {
  return requestJson<T>(path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export function fetchTree(): Promise<TreeResponse> {
  return requestJson<TreeResponse>("/tree");
}

export function fetchDesired(): Promise<DesiredResponse> {
  return requestJson<DesiredResponse>("/desired");
}

export function stageDesired(symbol: string, target: string): Promise<DesiredResponse> {
  return postJson<DesiredResponse>("/desired", { set: { symbol, target } });
}

export function removeDesired(symbol: string): Promise<DesiredResponse> {
  return postJson<DesiredResponse>("/desired", { remove: symbol });
}

export function replaceDesired(entries: DesiredEntry[]): Promise<DesiredResponse> {
  return postJson<DesiredResponse>("/desired", { replace: entries });
}

export function calculateFixes(): Promise<FixesResponse> {
  return requestJson<FixesResponse>("/fixes", { method: "POST" });
}

export function applyFix(index: number, generation: number): Promise<ApplyResponse> {
  return postJson<ApplyResponse>("/apply", { fix: index, generation });
}

export async function fetchConfig(): Promise<ConfigText> {
  const res = await fetch(BASE + "/config");
  if (!res.ok) {
    throw new ApiError(res.status, `${res.status} ${res.statusText}`);
  }
  const generation = Number(res.headers.get("X-Generation") ?? "0");
  return { generation, text: await res.text() };
}

export function putConfig(text: string): Promise<ConfigPutResponse> {
  return requestJson<ConfigPutResponse>("/config", {
    method: "PUT",
    headers: { "content-type": "text/plain" },
    body: text,
  });
}
