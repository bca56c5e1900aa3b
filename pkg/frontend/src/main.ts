/** Explorer bootstrap: wires the query builder, graph view, and
 * inspiration session panels to the API client.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  bindApiHealth,
  clear,
  el,
  renderChips,
  renderGraph,
  renderProvenance,
  renderRetry,
  renderSearchResponse,
  renderSession,
} from "./dom.js";
import {
  addChip,
  emptyState,
  hasPositiveChip,
  removeChip,
  toRequestBody,
} from "./queryBuilder.js";
import type { QueryBuilderState } from "./queryBuilder.js";
import {
  applyExpansion,
  edgeKey,
  emptyGraphState,
  focusConcept,
  selectEdge,
} from "./graphView.js";
import type { GraphViewState } from "./graphView.js";
import { exportMarks, setComment, startSession, toggleMark } from "./session.js";
import type { SessionViewState } from "./session.js";
import type { Product, Side } from "./types.js";

const api = new ApiClient("");

function grab(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node;
}

// ------------------------------------------------------------- search panel

let query: QueryBuilderState = emptyState();

function refreshChips(): void {
  renderChips(grab("chips"), query, (index) => {
    query = removeChip(query, index);
    refreshChips();
  });
}

async function runSearch(): Promise<void> {
  const container = grab("results");
  if (!hasPositiveChip(query)) {
    clear(container);
    container.appendChild(el("p", "notice", "Add at least one positive facet."));
    return;
  }
  query = { ...query, method: (grab("method") as HTMLSelectElement).value as "avg" | "maxmin" };
  try {
    const response = await api.search(toRequestBody(query));
    const products = new Map<string, Product>();
    await Promise.all(
      response.results.map(async (result) => {
        const payload = await api.product(result.doc_id);
        products.set(result.doc_id, payload.product);
      }),
    );
    renderSearchResponse(container, response, products, (docId) => {
      void api.product(docId); // cache warm; detail panel reuses it
    });
  } catch (error) {
    const message = error instanceof ApiError ? `[${error.stage}] ${error.message}` : String(error);
    renderRetry(container, message, () => void runSearch());
  }
}

function wireSearchPanel(): void {
  const input = grab("facet-text") as HTMLInputElement;
  grab("facet-add").addEventListener("click", () => {
    const side = (grab("facet-side") as HTMLSelectElement).value as Side;
    const negated = (grab("facet-negated") as HTMLInputElement).checked;
    query = addChip(query, { text: input.value, side, negated });
    input.value = "";
    refreshChips();
  });
  grab("search-run").addEventListener("click", () => void runSearch());
}

// -------------------------------------------------------------- graph panel

let graph: GraphViewState = emptyGraphState();

function refreshGraph(): void {
  renderGraph(grab("graph"), graph, (conceptId) => void expand(conceptId), (source, target) => {
    graph = selectEdge(graph, edgeKey({ source, target }));
    refreshGraph();
    void openEdge(source, target);
  });
}

async function expand(conceptId: string): Promise<void> {
  try {
    const response = await api.neighbors(conceptId, "out", 3);
    graph = applyExpansion(graph, response);
    refreshGraph();
  } catch (error) {
    const message = error instanceof ApiError ? `[${error.stage}] ${error.message}` : String(error);
    renderRetry(grab("graph"), message, () => void expand(conceptId));
  }
}

async function openEdge(source: string, target: string): Promise<void> {
  try {
    renderProvenance(grab("provenance"), await api.edge(source, target));
  } catch (error) {
    const message = error instanceof ApiError ? `[${error.stage}] ${error.message}` : String(error);
    renderRetry(grab("provenance"), message, () => void openEdge(source, target));
  }
}

// ------------------------------------------------------------ session panel

let session: SessionViewState | null = null;

function refreshSession(): void {
  if (!session) {
    return;
  }
  renderSession(
    grab("session"),
    session,
    (box, span) => {
      session = toggleMark(session!, box, span);
      refreshSession();
    },
    (box, text) => {
      session = setComment(session!, box, text);
    },
    () => void submitMarks(),
  );
}

async function runInspire(): Promise<void> {
  const seed = (grab("seed-text") as HTMLInputElement).value.trim();
  if (!seed) {
    return;
  }
  const rater = (grab("rater-id") as HTMLInputElement).value.trim() || "anonymous";
  try {
    const payload = await api.inspire(seed, 8);
    session = startSession(payload.session, rater);
    if (payload.session.boxes.length === 0) {
      clear(grab("session"));
      grab("session").appendChild(el("p", "notice", "Session came back empty."));
      return;
    }
    // seed the graph view with the mapped concept for exploration
    graph = focusConcept(graph, {
      id: payload.session.mapped_concept,
      kind: "purpose",
      size: 0,
      title_spans: [seed],
    });
    refreshGraph();
    refreshSession();
  } catch (error) {
    const message = error instanceof ApiError ? `[${error.stage}] ${error.message}` : String(error);
    renderRetry(grab("session"), message, () => void runInspire());
  }
}

async function submitMarks(): Promise<void> {
  if (!session) {
    return;
  }
  const body = exportMarks(session);
  try {
    await api.postMarks(body);
    const blob = new Blob([JSON.stringify(body) + "\n"], { type: "application/json" });
    const link = el("a") as HTMLAnchorElement;
    link.href = URL.createObjectURL(blob);
    link.download = `${body.session_id}-${body.rater_id}.marks.jsonl`;
    link.click();
    URL.revokeObjectURL(link.href);
  } catch (error) {
    const message = error instanceof ApiError ? `[${error.stage}] ${error.message}` : String(error);
    renderRetry(grab("session"), message, () => void submitMarks());
  }
}

function wireSessionPanel(): void {
  grab("inspire-run").addEventListener("click", () => void runInspire());
}

// ------------------------------------------------------------------- boot

document.addEventListener("DOMContentLoaded", () => {
  bindApiHealth(api, grab("health"));
  wireSearchPanel();
  wireSessionPanel();
  refreshChips();
  refreshGraph();
});
