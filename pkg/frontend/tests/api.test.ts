import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import productFixture from "./fixtures/product_uv.json";
import inspireFixture from "./fixtures/inspire_session.json";

describe("api client", () => {
  it("caches product lookups so a card click fetches once", async () => {
    const calls: string[] = [];
    const api = new ApiClient("", async (url) => {
      calls.push(url);
      return new Response(JSON.stringify(productFixture), { status: 200 });
    });
    await api.product("uv-sanitizer");
    await api.product("uv-sanitizer");
    const third = await api.product("uv-sanitizer");
    expect(calls).toEqual(["/api/products/uv-sanitizer"]);
    expect(third.product.title).toBe("UV Barbell Sanitizer Box");
  });

  it("surfaces stage-tagged errors", async () => {
    const api = new ApiClient("", async () =>
      new Response(JSON.stringify({ code: 400, stage: "query", message: "bad chunk" }), {
        status: 400,
      }),
    );
    await expect(api.search({
      purpose: [], not_purpose: [], mechanism: [], not_mechanism: [],
      method: "avg", neg_percentile: 90, limit: 20, combine: "mean",
    })).rejects.toMatchObject({ stage: "query", message: "bad chunk" });
  });

  it("unwraps FastAPI detail envelopes", async () => {
    const api = new ApiClient("", async () =>
      new Response(
        JSON.stringify({ detail: { code: 404, stage: "lookup", message: "no product" } }),
        { status: 404 },
      ),
    );
    try {
      await api.product("ghost");
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).stage).toBe("lookup");
    }
  });

  it("requests inspiration sessions with seed and box count", async () => {
    const calls: Array<{ url: string; body: unknown }> = [];
    const api = new ApiClient("http://mock", async (url, init) => {
      calls.push({ url, body: JSON.parse(String(init?.body)) });
      return new Response(JSON.stringify(inspireFixture), { status: 200 });
    });
    const payload = await api.inspire("morning medicine reminder", 8);
    expect(calls[0]!.url).toBe("http://mock/api/inspire");
    expect(calls[0]!.body).toEqual({
      seed: "morning medicine reminder",
      boxes: 8,
      rng_seed: null,
    });
    expect(payload.session.boxes).toHaveLength(8);
  });
});
