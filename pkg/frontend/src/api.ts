// Gateway client. The fetch function is injectable so tests can run against
// a mock gateway; the browser entry point passes window.fetch.

import type { ApiError, QueryOutput, Skill, TestReport, TestSummary } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class GatewayError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, error: ApiError) {
    super(error.message);
    this.code = error.code;
    this.status = status;
  }
}

export interface QueryBody {
  query: string;
  context?: string;
  options?: string[];
  topk?: number;
  skill_args?: Record<string, unknown>;
}

export class GatewayClient {
  private baseUrl: string;
  private fetchFn: FetchLike;
  token: string | null;

  constructor(baseUrl: string, fetchFn: FetchLike, token: string | null = null) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn;
    this.token = token;
  }

  private headers(hasBody: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (hasBody) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let error: ApiError = { code: "internal", message: `HTTP ${response.status}` };
      try {
        const payload = await response.json();
        if (payload && payload.error) error = payload.error as ApiError;
      } catch {
        // non-JSON failure body; keep the fallback error
      }
      throw new GatewayError(response.status, error);
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    return (await this.request(method, path, body)).json() as Promise<T>;
  }

  async listSkills(): Promise<Skill[]> {
    return (await this.json<{ skills: Skill[] }>("GET", "/api/skills")).skills;
  }

  async getSkill(id: string): Promise<Skill> {
    return this.json<Skill>("GET", `/api/skills/${id}`);
  }

  async registerSkill(skill: Partial<Skill>): Promise<Skill> {
    return this.json<Skill>("POST", "/api/skills", skill);
  }

  async updateSkill(id: string, skill: Partial<Skill>): Promise<Skill> {
    return this.json<Skill>("PUT", `/api/skills/${id}`, skill);
  }

  async removeSkill(id: string): Promise<void> {
    await this.request("DELETE", `/api/skills/${id}`);
  }

  async querySkill(id: string, body: QueryBody): Promise<QueryOutput> {
    return this.json<QueryOutput>("POST", `/api/skills/${id}/query`, body);
  }

  async testSummary(id: string): Promise<TestSummary> {
    return this.json<TestSummary>("GET", `/api/skills/${id}/tests`);
  }

  async runSuite(id: string, suiteName: string): Promise<TestReport> {
    return this.json<TestReport>("POST", `/api/skills/${id}/tests/run`, { suite_name: suiteName });
  }

  /** Canonical report bytes, exactly as served; used by the download control. */
  async downloadReport(id: string, suiteName: string): Promise<Uint8Array> {
    const response = await this.request(
      "GET",
      `/api/skills/${id}/tests/report?suite=${encodeURIComponent(suiteName)}`,
    );
    return new Uint8Array(await response.arrayBuffer());
  }
}
