/** Thin typed client for the /v1 workflow service. The UI never computes
 * risk; everything it shows comes back from these calls. */

import type {
  ClustersOutput,
  CollectionDoc,
  DisclosuresOutput,
  ErrorBody,
  JoinOutput,
  PairsOutput,
  ParallelSetsOutput,
  ProfilesDoc,
  SessionDoc,
  SuggestOutput,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class WorkbenchApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const text = await this.requestText(path, init);
    return JSON.parse(text) as T;
  }

  /** Raw body text, preserved byte-for-byte for report comparison. */
  async requestText(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = "HttpError";
      let message = text;
      try {
        const body = JSON.parse(text) as ErrorBody;
        code = body.error.code;
        message = body.error.message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(code, message, resp.status);
    }
    return text;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(): Promise<string> {
    const body = await this.post<{ session_id: string }>("/v1/sessions", {});
    return body.session_id;
  }

  setQis(sessionId: string, qis: string | string[]): Promise<{ selected_qis: string[] }> {
    return this.post(`/v1/sessions/${sessionId}/qis`, { qis });
  }

  runStep<T>(sessionId: string, step: string, params: Record<string, unknown> = {}): Promise<T> {
    return this.post<T>(`/v1/sessions/${sessionId}/steps/${step}`, params);
  }

  runCluster(sessionId: string, cut?: number): Promise<ClustersOutput> {
    return this.runStep(sessionId, "cluster", cut === undefined ? {} : { cut });
  }

  runPairs(sessionId: string, cluster?: string): Promise<PairsOutput> {
    return this.runStep(sessionId, "pairs", cluster === undefined ? {} : { cluster });
  }

  runJoin(sessionId: string, left: string, right: string, key?: string[]): Promise<JoinOutput> {
    const params: Record<string, unknown> = { left, right };
    if (key) params.key = key;
    return this.runStep(sessionId, "join", params);
  }

  runSuggest(sessionId: string): Promise<SuggestOutput> {
    return this.runStep(sessionId, "suggest");
  }

  runParallelSets(sessionId: string, axes: string[]): Promise<ParallelSetsOutput> {
    return this.runStep(sessionId, "parallel_sets", { axes });
  }

  runDisclosures(sessionId: string): Promise<DisclosuresOutput> {
    return this.runStep(sessionId, "disclosures");
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return this.request(`/v1/sessions/${sessionId}`);
  }

  /** Report as raw text so callers can compare bytes with a CLI replay. */
  getReportText(sessionId: string, redact = true, ack = false): Promise<string> {
    const params = new URLSearchParams({ redact: String(redact) });
    if (ack) params.set("ack", "true");
    return this.requestText(`/v1/sessions/${sessionId}/report?${params}`);
  }

  getCollection(): Promise<CollectionDoc> {
    return this.request("/v1/collection");
  }

  getProfiles(): Promise<ProfilesDoc> {
    return this.request("/v1/profiles");
  }
}
