/** Incremental concept-graph exploration state.
 *
 * The graph is explored neighborhood by neighborhood (expand on click);
 * nothing is laid out wholesale.  Expansion is idempotent: nodes and
 * edges are keyed, so replaying a response never duplicates them.
 * Every displayed edge came from a neighbors response, satisfying the
 * thin-client contract.
 */

import type { ConceptSummary, Edge, NeighborsResponse } from "./types.js";

export interface GraphViewState {
  focused: string | null;
  nodes: Map<string, ConceptSummary>;
  edges: Map<string, Edge>;
  expanded: Set<string>;
  selectedEdge: string | null;
}

export function emptyGraphState(): GraphViewState {
  return {
    focused: null,
    nodes: new Map(),
    edges: new Map(),
    expanded: new Set(),
    selectedEdge: null,
  };
}

export function edgeKey(edge: Pick<Edge, "source" | "target">): string {
  return `${edge.source}->${edge.target}`;
}

export function focusConcept(state: GraphViewState, concept: ConceptSummary): GraphViewState {
  const nodes = new Map(state.nodes);
  nodes.set(concept.id, concept);
  return { ...state, focused: concept.id, nodes };
}

/** Merge a neighbors response into the view; replay-safe. */
export function applyExpansion(
  state: GraphViewState,
  response: NeighborsResponse,
): GraphViewState {
  const nodes = new Map(state.nodes);
  const edges = new Map(state.edges);
  for (const neighbor of response.neighbors) {
    nodes.set(neighbor.concept.id, neighbor.concept);
    edges.set(edgeKey(neighbor.edge), neighbor.edge);
  }
  const expanded = new Set(state.expanded);
  expanded.add(response.concept_id);
  return { ...state, nodes, edges, expanded };
}

export function selectEdge(state: GraphViewState, key: string | null): GraphViewState {
  if (key !== null && !state.edges.has(key)) {
    throw new Error(`edge ${key} is not displayed`);
  }
  return { ...state, selectedEdge: key };
}

export function neighborIds(state: GraphViewState, conceptId: string): string[] {
  const out: string[] = [];
  for (const edge of state.edges.values()) {
    if (edge.source === conceptId) {
      out.push(edge.target);
    } else if (edge.target === conceptId) {
      out.push(edge.source);
    }
  }
  return [...new Set(out)];
}

export function nodeTitle(concept: ConceptSummary): string {
  return concept.title_spans.length ? concept.title_spans.join("; ") : concept.id;
}
