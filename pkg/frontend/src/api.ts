/** Thin typed client over the ideafacets JSON API.
 *
 * The UI performs no ranking, mining, or scoring of its own; every
 * number it shows comes out of these calls.  Product lookups are cached
 * so clicking a result card issues at most one GET per document.
 */

import type {
  ApiErrorBody,
  EdgeResponse,
  InspireResponse,
  MarksBody,
  NeighborsResponse,
  ProductResponse,
  SearchRequestBody,
  SearchResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: number;
  readonly stage: string;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.stage = body.stage;
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;
  private readonly productCache = new Map<string, ProductResponse>();

  constructor(base = "", fetchFn?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const payload = await response.json();
    if (!response.ok) {
      const body = (payload.detail ?? payload) as ApiErrorBody;
      throw new ApiError({
        code: body.code ?? response.status,
        stage: body.stage ?? "api",
        message: body.message ?? response.statusText,
      });
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string; build_id: string }> {
    return this.request("/api/health");
  }

  search(body: SearchRequestBody): Promise<SearchResponse> {
    return this.post("/api/search", body);
  }

  async product(docId: string): Promise<ProductResponse> {
    const cached = this.productCache.get(docId);
    if (cached) {
      return cached;
    }
    const payload = await this.request<ProductResponse>(
      `/api/products/${encodeURIComponent(docId)}`,
    );
    this.productCache.set(docId, payload);
    return payload;
  }

  neighbors(conceptId: string, direction = "out", top = 3): Promise<NeighborsResponse> {
    const query = `direction=${encodeURIComponent(direction)}&top=${top}`;
    return this.request(`/api/graph/neighbors/${encodeURIComponent(conceptId)}?${query}`);
  }

  edge(source: string, target: string): Promise<EdgeResponse> {
    return this.request(
      `/api/graph/edge/${encodeURIComponent(source)}/${encodeURIComponent(target)}`,
    );
  }

  inspire(seed: string, boxes?: number, rngSeed?: number): Promise<InspireResponse> {
    return this.post("/api/inspire", {
      seed,
      boxes: boxes ?? null,
      rng_seed: rngSeed ?? null,
    });
  }

  postMarks(body: MarksBody): Promise<{ build_id: string; stored: number }> {
    return this.post("/api/marks", body);
  }
}
