import type { DocDetail, Mode, SearchParams, SearchResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseBody(resp: Response): Promise<unknown> {
  try {
    return await resp.json();
  } catch {
    return null;
  }
}

function errorMessage(body: unknown, status: number): string {
  if (body && typeof body === "object" && "error" in body) {
    return String((body as { error: unknown }).error);
  }
  return `request failed (${status})`;
}

/** Thin typed client for the documented endpoints; nothing else. */
export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  async search(
    q: string,
    mode: Mode,
    params: SearchParams,
    signal?: AbortSignal,
  ): Promise<SearchResponse> {
    const query = new URLSearchParams({
      q,
      mode,
      by: params.by,
      model: params.model,
      n: String(params.n),
      j: String(params.j),
      corpus: params.corpus,
    });
    if (params.lambda !== undefined) query.set("lambda", String(params.lambda));
    if (params.mu !== undefined) query.set("mu", String(params.mu));
    const resp = await fetch(`${this.baseUrl}/api/search?${query.toString()}`, { signal });
    const body = await parseBody(resp);
    if (!resp.ok) throw new ApiError(resp.status, errorMessage(body, resp.status));
    return body as SearchResponse;
  }

  async getDoc(docId: string): Promise<DocDetail> {
    const resp = await fetch(`${this.baseUrl}/api/doc/${encodeURIComponent(docId)}`);
    const body = await parseBody(resp);
    if (!resp.ok) throw new ApiError(resp.status, errorMessage(body, resp.status));
    return body as DocDetail;
  }
}
