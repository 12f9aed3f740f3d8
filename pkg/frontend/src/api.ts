// Thin fetch layer with per-view request sequencing. Responses that were
// overtaken by a newer request for the same view report "superseded" so the
// caller drops them: last write wins, regardless of network ordering.

export interface MinimalResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<MinimalResponse>;

export type FetchResult<T> =
  | { kind: "ok"; data: T }
  | { kind: "error"; message: string }
  | { kind: "superseded" };

export class ApiClient {
  private seq = new Map<string, number>();

  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  async get<T>(view: string, path: string): Promise<FetchResult<T>> {
    const ticket = (this.seq.get(view) ?? 0) + 1;
    this.seq.set(view, ticket);
    let body: unknown;
    let ok: boolean;
    let status: number;
    try {
      const resp = await this.fetchFn(this.baseUrl + path);
      ok = resp.ok;
      status = resp.status;
      body = await resp.json();
    } catch (err) {
      if (this.seq.get(view) !== ticket) {
        return { kind: "superseded" };
      }
      return {
        kind: "error",
        message: err instanceof Error ? err.message : String(err),
      };
    }
    if (this.seq.get(view) !== ticket) {
      return { kind: "superseded" };
    }
    if (!ok) {
      const detail =
        body && typeof body === "object" && "error" in body
          ? String((body as { error: unknown }).error)
          : `http ${status}`;
      return { kind: "error", message: detail };
    }
    return { kind: "ok", data: body as T };
  }
}
