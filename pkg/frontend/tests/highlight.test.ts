// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import {
  MATCHED_CLASS,
  MECHANISM_CLASS,
  PURPOSE_CLASS,
  segmentProduct,
  segmentText,
} from "../src/highlight.js";
import { renderResultCard, renderSegments } from "../src/dom.js";
import type { Product, SearchResult } from "../src/types.js";
import productFixture from "./fixtures/product_uv.json";
import searchFixture from "./fixtures/search_light.json";

describe("segmentation", () => {
  const text = "heats water fast using a coil";

  it("preserves the full text in order", () => {
    const segments = segmentText(text, [
      { start: 0, end: 11, label: "purpose" },
      { start: 25, end: 29, label: "mechanism" },
    ]);
    expect(segments.map((s) => s.text).join("")).toBe(text);
  });

  it("labels purpose and mechanism segments with distinct classes", () => {
    const segments = segmentText(text, [
      { start: 0, end: 11, label: "purpose" },
      { start: 25, end: 29, label: "mechanism" },
    ]);
    const classesOf = (needle: string) =>
      segments.find((s) => s.text.includes(needle))?.classes ?? [];
    expect(classesOf("heats")).toContain(PURPOSE_CLASS);
    expect(classesOf("coil")).toContain(MECHANISM_CLASS);
    expect(PURPOSE_CLASS).not.toBe(MECHANISM_CLASS);
    expect(classesOf("fast")).toEqual([]);
  });

  it("layers overlapping spans without losing text", () => {
    const segments = segmentText(text, [
      { start: 0, end: 11, label: "purpose" },
      { start: 6, end: 16, label: "mechanism" },
    ]);
    expect(segments.map((s) => s.text).join("")).toBe(text);
    const overlap = segments.find((s) => s.text === "water");
    expect(overlap?.classes).toContain(PURPOSE_CLASS);
    expect(overlap?.classes).toContain(MECHANISM_CLASS);
  });

  it("emphasizes spans matched by the query", () => {
    const product = productFixture.product as Product;
    const matched = new Set([`${product.id}:0`]);
    const segments = segmentProduct(product, matched);
    const emphasized = segments.filter((s) => s.classes.includes(MATCHED_CLASS));
    expect(emphasized.length).toBeGreaterThan(0);
    expect(segments.map((s) => s.text).join("")).toBe(product.text);
  });
});

describe("result card rendering", () => {
  it("renders both highlight styles into the card DOM", () => {
    const product = productFixture.product as Product;
    const result = (searchFixture.results as SearchResult[]).find(
      (r) => r.doc_id === product.id,
    )!;
    const card = renderResultCard(result, product, () => undefined);
    expect(card.querySelectorAll(`.${PURPOSE_CLASS}`).length).toBeGreaterThan(0);
    expect(card.querySelectorAll(`.${MECHANISM_CLASS}`).length).toBeGreaterThan(0);
    expect(card.textContent).toContain(product.title);
    expect(card.textContent).toContain("sanitize your barbells");
  });

  it("renders a placeholder card when the document is missing", () => {
    const result = (searchFixture.results as SearchResult[])[0]!;
    const card = renderResultCard(result, null, () => undefined);
    expect(card.textContent).toContain(result.doc_id);
    expect(card.textContent).toContain("unavailable");
  });

  it("renderSegments emits plain text nodes for unlabeled segments", () => {
    const host = document.createElement("p");
    renderSegments(host, segmentText("plain then marked", [
      { start: 11, end: 17, label: "purpose" },
    ]));
    expect(host.textContent).toBe("plain then marked");
    expect(host.querySelectorAll("span")).toHaveLength(1);
  });
});
