/**
 * Thin client for the claimgraph HTTP API. No semantics live here: the
 * server parses, validates, evaluates, and renders every answer.
 */
import { canonicalizeId, EmptyNameError } from "./scl.js";

export interface IngestReportJson {
  accepted: boolean;
  articles: number;
  concepts: number;
  external_concepts: number;
  relation_claims: number;
  describes_claims: number;
  standalone_claims: number;
  errors: string[];
  skipped: string[];
}

export interface ResultSetJson {
  query: string;
  rows: Record<string, unknown>[];
  impact: Record<string, unknown> | null;
}

export interface ApiError {
  error: string;
  detail: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async schemaDocument(): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/schema`);
    if (!resp.ok) throw new Error(`schema unreachable: ${resp.status}`);
    return resp.text();
  }

  async submit(sclText: string, lax = false): Promise<{ status: number; report: IngestReportJson }> {
    const url = `${this.baseUrl}/submissions${lax ? "?lax=true" : ""}`;
    const resp = await this.fetchImpl(url, {
      method: "POST",
      headers: { "Content-Type": "text/plain; charset=utf-8" },
      body: sclText,
    });
    return { status: resp.status, report: (await resp.json()) as IngestReportJson };
  }

  async query(q: string, direct = false): Promise<ResultSetJson> {
    const params = new URLSearchParams({ q });
    if (direct) params.set("direct", "true");
    const resp = await this.fetchImpl(`${this.baseUrl}/query?${params}`);
    const body = await resp.json();
    if (!resp.ok) throw Object.assign(new Error((body as ApiError).detail), body);
    return body as ResultSetJson;
  }

  async conceptMap(
    id: string,
    depth = 1,
    format: "json" | "dot" = "json",
    inferred = false
  ): Promise<string> {
    const params = new URLSearchParams({ depth: String(depth), format });
    if (inferred) params.set("inferred", "true");
    const resp = await this.fetchImpl(`${this.baseUrl}/maps/${id}?${params}`);
    if (!resp.ok) {
      const body = (await resp.json()) as ApiError;
      throw Object.assign(new Error(body.detail), body);
    }
    return resp.text();
  }

  async registerProfile(sclText: string): Promise<{ status: number; body: unknown }> {
    const resp = await this.fetchImpl(`${this.baseUrl}/profiles`, {
      method: "POST",
      headers: { "Content-Type": "text/plain; charset=utf-8" },
      body: sclText,
    });
    return { status: resp.status, body: await resp.json() };
  }

  async alerts(): Promise<unknown[]> {
    const resp = await this.fetchImpl(`${this.baseUrl}/alerts`);
    return (await resp.json()) as unknown[];
  }

  async claim(id: string): Promise<Record<string, unknown>> {
    const resp = await this.fetchImpl(`${this.baseUrl}/claims/${id}`);
    const body = await resp.json();
    if (!resp.ok) throw Object.assign(new Error((body as ApiError).detail), body);
    return body as Record<string, unknown>;
  }

  /**
   * Look up a concept a user typed into the form, for reuse: resolves the
   * name to its canonical id and asks the query endpoint about it. Null
   * when the store has never heard of it.
   */
  async conceptLookup(
    name: string
  ): Promise<{ id: string; claims: Record<string, unknown>[] } | null> {
    let id: string;
    try {
      id = canonicalizeId(name);
    } catch (err) {
      if (err instanceof EmptyNameError) return null;
      throw err;
    }
    try {
      const rs = await this.query(`claims about ${id}`);
      return { id, claims: rs.rows };
    } catch (err) {
      if ((err as ApiError).error === "unknown-id") return null;
      throw err;
    }
  }
}
