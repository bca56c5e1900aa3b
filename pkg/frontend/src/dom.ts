/** Thin DOM shell: renders logic-module state into containers and wires
 * events back to the handlers.  No scoring or ranking happens here.
 */

import type { ApiClient } from "./api.js";
import { MATCHED_CLASS, segmentProduct } from "./highlight.js";
import type { Segment } from "./highlight.js";
import { chipLabel } from "./queryBuilder.js";
import type { QueryBuilderState } from "./queryBuilder.js";
import { edgeKey, nodeTitle } from "./graphView.js";
import type { GraphViewState } from "./graphView.js";
import { isMarked } from "./session.js";
import type { SessionViewState } from "./session.js";
import type { EdgeResponse, Product, SearchResponse, SearchResult } from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

export function renderChips(
  container: HTMLElement,
  state: QueryBuilderState,
  onRemove: (index: number) => void,
): void {
  clear(container);
  state.chips.forEach((chip, index) => {
    const node = el("span", chip.negated ? "chip chip-negated" : "chip");
    node.appendChild(el("span", "chip-label", chipLabel(chip)));
    const remove = el("button", "chip-remove", "×");
    remove.title = "Remove facet";
    remove.addEventListener("click", () => onRemove(index));
    node.appendChild(remove);
    container.appendChild(node);
  });
}

export function renderSegments(container: HTMLElement, segments: Segment[]): void {
  for (const segment of segments) {
    if (segment.classes.length === 0) {
      container.appendChild(document.createTextNode(segment.text));
    } else {
      container.appendChild(el("span", segment.classes.join(" "), segment.text));
    }
  }
}

export function renderResultCard(
  result: SearchResult,
  product: Product | null,
  onOpen: (docId: string) => void,
): HTMLElement {
  const card = el("article", "result-card");
  if (product === null) {
    card.appendChild(el("h3", "result-title", result.doc_id));
    card.appendChild(el("p", "result-missing", "document unavailable"));
    return card;
  }
  const header = el("h3", "result-title", product.title || product.id);
  header.addEventListener("click", () => onOpen(product.id), { once: false });
  card.appendChild(header);
  card.appendChild(el("div", "result-score", `score ${result.score.toFixed(4)}`));
  const body = el("p", "result-text");
  const matched = new Set(result.matched_spans.map((m) => m.span_id));
  renderSegments(body, segmentProduct(product, matched));
  card.appendChild(body);
  return card;
}

export function renderSearchResponse(
  container: HTMLElement,
  response: SearchResponse,
  products: Map<string, Product>,
  onOpen: (docId: string) => void,
): void {
  clear(container);
  if (response.over_constrained) {
    container.appendChild(
      el("p", "notice", "Query over-constrained: the negations excluded every candidate."),
    );
    return;
  }
  if (response.excluded_doc_ids.length) {
    container.appendChild(
      el("p", "notice", `Excluded by negation: ${response.excluded_doc_ids.join(", ")}`),
    );
  }
  for (const result of response.results) {
    container.appendChild(renderResultCard(result, products.get(result.doc_id) ?? null, onOpen));
  }
}

export function renderGraph(
  container: HTMLElement,
  state: GraphViewState,
  onExpand: (conceptId: string) => void,
  onEdge: (source: string, target: string) => void,
): void {
  clear(container);
  if (state.nodes.size === 0) {
    container.appendChild(el("p", "notice", "Search for a concept or run a session to begin."));
    return;
  }
  for (const concept of state.nodes.values()) {
    const node = el("div", concept.id === state.focused ? "node node-focused" : "node");
    node.appendChild(el("div", `node-kind node-${concept.kind}`, concept.kind));
    node.appendChild(el("div", "node-title", nodeTitle(concept)));
    const expand = el("button", "node-expand",
      state.expanded.has(concept.id) ? "expanded" : "expand neighbors");
    expand.disabled = state.expanded.has(concept.id);
    expand.addEventListener("click", () => onExpand(concept.id));
    node.appendChild(expand);
    if (state.expanded.has(concept.id)) {
      const hasNeighbors = [...state.edges.values()].some(
        (e) => e.source === concept.id || e.target === concept.id,
      );
      if (!hasNeighbors) {
        node.appendChild(el("div", "notice", "no neighbors"));
      }
    }
    container.appendChild(node);
  }
  const edgeList = el("ul", "edge-list");
  for (const edge of state.edges.values()) {
    const item = el("li", edgeKey(edge) === state.selectedEdge ? "edge edge-selected" : "edge");
    const button = el(
      "button",
      "edge-open",
      `${edge.source} → ${edge.target} [${edge.relation} ${edge.confidence.toFixed(2)}]`,
    );
    button.addEventListener("click", () => onEdge(edge.source, edge.target));
    item.appendChild(button);
    edgeList.appendChild(item);
  }
  container.appendChild(edgeList);
}

export function renderProvenance(container: HTMLElement, payload: EdgeResponse): void {
  clear(container);
  container.appendChild(
    el("h3", "", `${payload.edge.source} → ${payload.edge.target} (${payload.edge.relation})`),
  );
  const list = el("ul", "provenance-list");
  for (const pair of payload.provenance) {
    list.appendChild(el("li", "", `${pair.doc_id}: ${pair.source_span} + ${pair.target_span}`));
  }
  container.appendChild(list);
}

export function renderRetry(container: HTMLElement, message: string, retry: () => void): void {
  clear(container);
  const notice = el("p", "notice notice-error", message + " ");
  const button = el("button", "retry", "Retry");
  button.addEventListener("click", retry);
  notice.appendChild(button);
  container.appendChild(notice);
}

export function renderSession(
  container: HTMLElement,
  state: SessionViewState,
  onToggle: (box: number, span: number) => void,
  onComment: (box: number, text: string) => void,
  onExport: () => void,
): void {
  clear(container);
  if (state.session.boxes.length === 0) {
    container.appendChild(el("p", "notice", "Session is empty."));
    return;
  }
  state.session.boxes.forEach((box, boxIndex) => {
    const panel = el("section", "box");
    panel.appendChild(el("h3", "box-title", `Box ${box.display_order + 1}`));
    if (box.failed) {
      panel.appendChild(el("p", "notice notice-error", "this condition failed"));
    }
    const list = el("ul", "box-spans");
    box.spans.forEach((span, spanIndex) => {
      const item = el("li", "box-span");
      const checkbox = el("input") as HTMLInputElement;
      checkbox.type = "checkbox";
      checkbox.checked = isMarked(state, boxIndex, spanIndex);
      checkbox.addEventListener("change", () => onToggle(boxIndex, spanIndex));
      item.appendChild(checkbox);
      item.appendChild(el("span", "", span));
      list.appendChild(item);
    });
    panel.appendChild(list);
    const comment = el("textarea", "box-comment") as HTMLTextAreaElement;
    comment.placeholder = "What did this inspire?";
    comment.value = state.comments.get(boxIndex) ?? "";
    comment.addEventListener("change", () => onComment(boxIndex, comment.value));
    panel.appendChild(comment);
    container.appendChild(panel);
  });
  const footer = el("div", "box-footer");
  const exportButton = el("button", "export-marks", "Export marks");
  exportButton.addEventListener("click", onExport);
  footer.appendChild(exportButton);
  container.appendChild(footer);
}

export function bindApiHealth(api: ApiClient, badge: HTMLElement): void {
  api
    .health()
    .then((h) => {
      badge.textContent = `build ${h.build_id}`;
    })
    .catch(() => {
      badge.textContent = "api unreachable";
    });
}
