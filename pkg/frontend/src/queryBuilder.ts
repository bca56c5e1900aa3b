/** Facet-chip query builder state.
 *
 * The state is kept canonical: chips are grouped positive-purpose,
 * negated-purpose, positive-mechanism, negated-mechanism, preserving
 * insertion order within each group.  In canonical form the mapping to
 * the /api/search request body is a bijection, so state -> body ->
 * state is lossless.
 */

import type { SearchRequestBody, Side } from "./types.js";

export interface FacetChip {
  text: string;
  side: Side;
  negated: boolean;
}

export interface QueryBuilderState {
  chips: FacetChip[];
  method: "avg" | "maxmin";
  negPercentile: number;
  limit: number;
  combine: "mean" | "sum" | "purpose-only";
}

export function emptyState(): QueryBuilderState {
  return { chips: [], method: "avg", negPercentile: 90, limit: 20, combine: "mean" };
}

const GROUP_ORDER: ReadonlyArray<[Side, boolean]> = [
  ["purpose", false],
  ["purpose", true],
  ["mechanism", false],
  ["mechanism", true],
];

function groupRank(chip: FacetChip): number {
  return GROUP_ORDER.findIndex(([side, negated]) => chip.side === side && chip.negated === negated);
}

/** Stable-sort chips into group order (within-group order preserved). */
export function canonicalize(state: QueryBuilderState): QueryBuilderState {
  const chips = state.chips
    .map((chip, index) => ({ chip, index }))
    .sort((a, b) => groupRank(a.chip) - groupRank(b.chip) || a.index - b.index)
    .map(({ chip }) => ({ ...chip }));
  return { ...state, chips };
}

export function addChip(state: QueryBuilderState, chip: FacetChip): QueryBuilderState {
  const text = chip.text.trim();
  if (!text) {
    return state;
  }
  return canonicalize({ ...state, chips: [...state.chips, { ...chip, text }] });
}

export function removeChip(state: QueryBuilderState, index: number): QueryBuilderState {
  return { ...state, chips: state.chips.filter((_, i) => i !== index) };
}

export function hasPositiveChip(state: QueryBuilderState): boolean {
  return state.chips.some((chip) => !chip.negated);
}

export function toRequestBody(state: QueryBuilderState): SearchRequestBody {
  const pick = (side: Side, negated: boolean) =>
    state.chips.filter((c) => c.side === side && c.negated === negated).map((c) => c.text);
  return {
    purpose: pick("purpose", false),
    not_purpose: pick("purpose", true),
    mechanism: pick("mechanism", false),
    not_mechanism: pick("mechanism", true),
    method: state.method,
    neg_percentile: state.negPercentile,
    limit: state.limit,
    combine: state.combine,
  };
}

export function fromRequestBody(body: SearchRequestBody): QueryBuilderState {
  const chips: FacetChip[] = [
    ...body.purpose.map((text) => ({ text, side: "purpose" as Side, negated: false })),
    ...body.not_purpose.map((text) => ({ text, side: "purpose" as Side, negated: true })),
    ...body.mechanism.map((text) => ({ text, side: "mechanism" as Side, negated: false })),
    ...body.not_mechanism.map((text) => ({ text, side: "mechanism" as Side, negated: true })),
  ];
  return {
    chips,
    method: body.method,
    negPercentile: body.neg_percentile,
    limit: body.limit,
    combine: body.combine,
  };
}

export function chipLabel(chip: FacetChip): string {
  return `${chip.negated ? "NOT " : ""}${chip.side}: ${chip.text}`;
}
