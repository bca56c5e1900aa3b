/** Span highlighting as a pure segmentation step.
 *
 * The document text is cut at every span boundary; each segment carries
 * the classes of all spans covering it, so overlapping spans layer
 * their styles without losing any text.  Purposes and mechanisms get
 * visually distinct classes; spans the current query matched get an
 * extra emphasis class.
 */

import type { Product, ProductSpan } from "./types.js";

export const PURPOSE_CLASS = "hl-purpose";
export const MECHANISM_CLASS = "hl-mechanism";
export const MATCHED_CLASS = "hl-matched";

export interface Segment {
  text: string;
  classes: string[];
}

export function spanId(docId: string, index: number): string {
  return `${docId}:${index}`;
}

export function segmentText(
  text: string,
  spans: ProductSpan[],
  matchedIndices: ReadonlySet<number> = new Set(),
): Segment[] {
  const cuts = new Set<number>([0, text.length]);
  for (const span of spans) {
    cuts.add(span.start);
    cuts.add(span.end);
  }
  const bounds = [...cuts].filter((c) => c >= 0 && c <= text.length).sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < bounds.length; i += 1) {
    const start = bounds[i]!;
    const end = bounds[i + 1]!;
    if (start === end) {
      continue;
    }
    const classes: string[] = [];
    spans.forEach((span, index) => {
      if (span.start <= start && end <= span.end) {
        classes.push(span.label === "purpose" ? PURPOSE_CLASS : MECHANISM_CLASS);
        if (matchedIndices.has(index)) {
          classes.push(MATCHED_CLASS);
        }
      }
    });
    segments.push({ text: text.slice(start, end), classes: [...new Set(classes)] });
  }
  return segments;
}

/** Segment a product, emphasizing the spans named by matched span ids. */
export function segmentProduct(product: Product, matchedSpanIds: ReadonlySet<string>): Segment[] {
  const matchedIndices = new Set<number>();
  product.spans.forEach((_, index) => {
    if (matchedSpanIds.has(spanId(product.id, index))) {
      matchedIndices.add(index);
    }
  });
  return segmentText(product.text, product.spans, matchedIndices);
}
