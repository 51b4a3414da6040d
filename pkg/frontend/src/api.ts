// Thin typed client over the contextminer HTTP API. All console I/O goes
// through here; nothing in the views talks to fetch directly.

import type {
  CandidateRecord,
  CommunitiesRecord,
  ContextRecord,
  DecisionBody,
  DecisionResult,
  IterationReport,
  NetworkRecord,
  ProfileRecord,
  RankingResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
    this.name = "ApiError";
  }
}

/** Pull the human-readable message out of an error response body. */
export function errorMessage(body: unknown, fallback: string): string {
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (detail && typeof detail === "object" && "message" in detail) {
      const msg = (detail as { message: unknown }).message;
      if (typeof msg === "string") return msg;
    }
    if (typeof detail === "string") return detail;
  }
  return fallback;
}

export class ApiClient {
  readonly base: string;

  constructor(base: string) {
    this.base = base.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let body: unknown = null;
      try {
        body = await resp.json();
      } catch {
        // non-JSON error body; fall through to the status line
      }
      throw new ApiError(resp.status, errorMessage(body, `HTTP ${resp.status}`));
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  contexts(): Promise<ContextRecord[]> {
    return this.request("/contexts");
  }

  report(contextId: string): Promise<IterationReport> {
    return this.request(`/contexts/${encodeURIComponent(contextId)}/report`);
  }

  network(contextId: string): Promise<NetworkRecord> {
    return this.request(`/contexts/${encodeURIComponent(contextId)}/network`);
  }

  communities(contextId: string): Promise<CommunitiesRecord> {
    return this.request(`/communities/${encodeURIComponent(contextId)}`);
  }

  profile(userId: string): Promise<ProfileRecord> {
    return this.request(`/profiles/${encodeURIComponent(userId)}`);
  }

  rankings(fn: string, top: number): Promise<RankingResponse> {
    const q = new URLSearchParams({ fn, top: String(top), format: "json" });
    return this.request(`/rankings?${q}`);
  }

  async rankingsCsv(fn: string, top: number): Promise<string> {
    const q = new URLSearchParams({ fn, top: String(top), format: "csv" });
    const resp = await fetch(`${this.base}/rankings?${q}`);
    if (!resp.ok) {
      let body: unknown = null;
      try {
        body = await resp.json();
      } catch {
        // keep fallback
      }
      throw new ApiError(resp.status, errorMessage(body, `HTTP ${resp.status}`));
    }
    return resp.text();
  }

  candidates(): Promise<CandidateRecord[]> {
    return this.request("/candidates");
  }

  decide(hashtag: string, body: DecisionBody): Promise<DecisionResult> {
    return this.post(`/candidates/${encodeURIComponent(hashtag)}/decision`, body);
  }

  runIteration(contextId: string): Promise<IterationReport> {
    return this.post("/iterations", { context_id: contextId });
  }

  setLabels(userId: string, labels: string[]): Promise<ProfileRecord> {
    return this.post(`/profiles/${encodeURIComponent(userId)}/labels`, { labels });
  }
}
