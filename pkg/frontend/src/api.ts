import type { EvidencePayload, HealthPayload, RunRecord, SubmitResponse, TablePayload } from "./types.js";

/** Error envelope raised for any non-2xx response. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function requestJson<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const data = await response.json().catch(() => null);
  if (!response.ok) {
    const envelope = data as { error?: { code?: string; message?: string } } | null;
    const code = envelope?.error?.code ?? "UNKNOWN";
    const message = envelope?.error?.message ?? `request failed with status ${response.status}`;
    throw new ApiError(response.status, code, message);
  }
  return data as T;
}

export function getHealth(base: string): Promise<HealthPayload> {
  return requestJson(`${base}/api/health`);
}

export function submitQuery(base: string, text: string, fos: string[] = [], k?: number): Promise<SubmitResponse> {
  const payload: Record<string, unknown> = { text };
  if (fos.length > 0) {
    payload.fos = fos;
  }
  if (k !== undefined) {
    payload.k = k;
  }
  return requestJson(`${base}/api/queries`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export function getRun(base: string, runId: string): Promise<RunRecord> {
  return requestJson(`${base}/api/runs/${encodeURIComponent(runId)}`);
}

export function getTable(base: string, runId: string): Promise<TablePayload> {
  return requestJson(`${base}/api/runs/${encodeURIComponent(runId)}/table`);
}

export function getEvidence(base: string, runId: string, canonicalKey: string): Promise<EvidencePayload> {
  const run = encodeURIComponent(runId);
  const key = encodeURIComponent(canonicalKey);
  return requestJson(`${base}/api/runs/${run}/entities/${key}/evidence`);
}
