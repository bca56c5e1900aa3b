/** Inspiration-session marking state and marks-file export.
 *
 * Boxes render in the server-given display order; the rater toggles a
 * checkbox per span and may leave one free-text comment per box.  The
 * export is exactly the marks-file schema the evaluation harness
 * consumes, comments verbatim.
 */

import type { MarksBody, Session } from "./types.js";

export interface SessionViewState {
  session: Session;
  raterId: string;
  marked: Set<string>; // "boxIndex:spanIndex"
  comments: Map<number, string>;
}

export function startSession(session: Session, raterId: string): SessionViewState {
  const boxes = [...session.boxes].sort((a, b) => a.display_order - b.display_order);
  return {
    session: { ...session, boxes },
    raterId,
    marked: new Set(),
    comments: new Map(),
  };
}

function markKey(boxIndex: number, spanIndex: number): string {
  return `${boxIndex}:${spanIndex}`;
}

export function isMarked(state: SessionViewState, boxIndex: number, spanIndex: number): boolean {
  return state.marked.has(markKey(boxIndex, spanIndex));
}

export function toggleMark(
  state: SessionViewState,
  boxIndex: number,
  spanIndex: number,
): SessionViewState {
  const box = state.session.boxes[boxIndex];
  if (!box || spanIndex >= box.spans.length) {
    throw new Error(`mark (${boxIndex}, ${spanIndex}) is out of session bounds`);
  }
  const marked = new Set(state.marked);
  const key = markKey(boxIndex, spanIndex);
  if (marked.has(key)) {
    marked.delete(key);
  } else {
    marked.add(key);
  }
  return { ...state, marked };
}

export function setComment(
  state: SessionViewState,
  boxIndex: number,
  text: string,
): SessionViewState {
  const comments = new Map(state.comments);
  if (text) {
    comments.set(boxIndex, text);
  } else {
    comments.delete(boxIndex);
  }
  return { ...state, comments };
}

/** Serialize to the marks-file record consumed by the eval harness. */
export function exportMarks(state: SessionViewState): MarksBody {
  const marked = [...state.marked]
    .map((key) => {
      const [box, span] = key.split(":");
      return { box_index: Number(box), span_index: Number(span) };
    })
    .sort((a, b) => a.box_index - b.box_index || a.span_index - b.span_index);
  const comments: Record<string, string> = {};
  for (const [boxIndex, text] of [...state.comments.entries()].sort((a, b) => a[0] - b[0])) {
    comments[String(boxIndex)] = text;
  }
  return {
    session_id: state.session.session_id,
    rater_id: state.raterId,
    marked,
    comments,
  };
}

export function marksFileLine(state: SessionViewState): string {
  return JSON.stringify(exportMarks(state));
}
