/** Payload types mirroring the ideafacets HTTP API schemas. */

export type Side = "purpose" | "mechanism";

export interface SearchRequestBody {
  purpose: string[];
  not_purpose: string[];
  mechanism: string[];
  not_mechanism: string[];
  method: "avg" | "maxmin";
  neg_percentile: number;
  limit: number;
  combine: "mean" | "sum" | "purpose-only";
}

export interface MatchedSpan {
  chunk: string;
  side: Side;
  span_id: string;
  similarity: number;
}

export interface SearchResult {
  doc_id: string;
  score: number;
  purpose_distance: number | null;
  mechanism_distance: number | null;
  matched_spans: MatchedSpan[];
}

export interface SearchResponse {
  build_id: string;
  over_constrained: boolean;
  excluded_doc_ids: string[];
  results: SearchResult[];
}

export interface ProductSpan {
  start: number;
  end: number;
  label: Side;
  confidence?: number;
}

export interface Product {
  id: string;
  title: string;
  text: string;
  spans: ProductSpan[];
  source: string;
}

export interface ProductResponse {
  build_id: string;
  product: Product;
}

export interface ConceptSummary {
  id: string;
  kind: Side;
  size: number;
  title_spans: string[];
}

export interface ConceptDetail extends ConceptSummary {
  member_span_ids: string[];
  centroid: number[];
}

export interface Edge {
  source: string;
  target: string;
  confidence: number;
  support_count: number;
  relation: string;
  provenance: string[];
}

export interface Neighbor {
  edge: Edge;
  concept: ConceptSummary;
}

export interface NeighborsResponse {
  build_id: string;
  concept_id: string;
  neighbors: Neighbor[];
}

export interface ProvenancePair {
  doc_id: string;
  source_span: string;
  target_span: string;
}

export interface EdgeResponse {
  build_id: string;
  edge: Edge;
  provenance: ProvenancePair[];
}

export interface InspirationBox {
  condition: string;
  concept_id: string | null;
  spans: string[];
  display_order: number;
  shortfall: boolean;
  failed: boolean;
}

export interface Session {
  session_id: string;
  seed: string;
  mapped_concept: string;
  boxes: InspirationBox[];
  flags: string[];
}

export interface InspireResponse {
  build_id: string;
  session: Session;
}

export interface MarkedSpanRef {
  box_index: number;
  span_index: number;
}

export interface MarksBody {
  session_id: string;
  rater_id: string;
  marked: MarkedSpanRef[];
  comments: Record<string, string>;
}

export interface ApiErrorBody {
  code: number;
  stage: string;
  message: string;
}
