// @vitest-environment happy-dom
import { execFileSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderSession } from "../src/dom.js";
import {
  exportMarks,
  isMarked,
  marksFileLine,
  setComment,
  startSession,
  toggleMark,
} from "../src/session.js";
import type { Session } from "../src/types.js";
import sessionFixture from "./fixtures/session.json";

const session = sessionFixture as Session;
// vitest runs with the package root as cwd
const FIXTURES = join(process.cwd(), "tests", "fixtures");

describe("session marking", () => {
  it("orders boxes by display_order", () => {
    const state = startSession(session, "r1");
    expect(state.session.boxes.map((b) => b.display_order)).toEqual([0, 1, 2, 3, 4, 5, 6, 7]);
  });

  it("toggle marks on and off", () => {
    let state = startSession(session, "r1");
    state = toggleMark(state, 0, 1);
    expect(isMarked(state, 0, 1)).toBe(true);
    state = toggleMark(state, 0, 1);
    expect(isMarked(state, 0, 1)).toBe(false);
  });

  it("rejects out-of-bounds marks", () => {
    const state = startSession(session, "r1");
    expect(() => toggleMark(state, 99, 0)).toThrow();
  });

  it("exports the marks-file schema with comments verbatim", () => {
    let state = startSession(session, "rater-7");
    state = toggleMark(state, 2, 0);
    state = toggleMark(state, 0, 3);
    state = setComment(state, 2, 'Alarm clock with coffee AND medicine reminders! "why not"');
    const body = exportMarks(state);
    expect(body).toEqual({
      session_id: session.session_id,
      rater_id: "rater-7",
      marked: [
        { box_index: 0, span_index: 3 },
        { box_index: 2, span_index: 0 },
      ],
      comments: { "2": 'Alarm clock with coffee AND medicine reminders! "why not"' },
    });
  });

  it("renders checkboxes per span and a comment field per box", () => {
    let state = startSession(session, "r1");
    const host = document.createElement("div");
    const rerender = () =>
      renderSession(
        host,
        state,
        (b, s) => {
          state = toggleMark(state, b, s);
          rerender();
        },
        (b, t) => {
          state = setComment(state, b, t);
        },
        () => undefined,
      );
    rerender();
    const spanCount = session.boxes.reduce((n, b) => n + b.spans.length, 0);
    expect(host.querySelectorAll("input[type=checkbox]").length).toBe(spanCount);
    expect(host.querySelectorAll("textarea").length).toBe(session.boxes.length);

    const first = host.querySelector("input[type=checkbox]") as HTMLInputElement;
    first.dispatchEvent(new Event("change"));
    expect(isMarked(state, 0, 0)).toBe(true);
  });

  it("posts exported marks to /api/marks unchanged", async () => {
    const calls: Array<{ url: string; body: unknown }> = [];
    const api = new ApiClient("", async (url, init) => {
      calls.push({ url, body: JSON.parse(String(init?.body)) });
      return new Response(JSON.stringify({ build_id: "x", stored: 1 }), { status: 200 });
    });
    let state = startSession(session, "r1");
    state = toggleMark(state, 1, 0);
    const body = exportMarks(state);
    await api.postMarks(body);
    expect(calls).toEqual([{ url: "/api/marks", body }]);
  });

  it("exported marks file is accepted unchanged by the eval harness", () => {
    // two raters mark the same two spans of box 2; the evaluation CLI
    // from the primary component must consume the export as-is
    const lines: string[] = [];
    for (const rater of ["r1", "r2"]) {
      let state = startSession(session, rater);
      state = toggleMark(state, 2, 0);
      state = toggleMark(state, 2, 1);
      state = setComment(state, 2, "inspired a combined gadget");
      lines.push(marksFileLine(state));
    }
    const dir = mkdtempSync(join(tmpdir(), "marks-"));
    const marksPath = join(dir, "marks.jsonl");
    writeFileSync(marksPath, lines.join("\n") + "\n");

    const stdout = execFileSync(
      "python3",
      [
        "-m", "ideafacets.cli", "eval", "inspiration",
        "--session", join(FIXTURES, "session.json"),
        "--marks", marksPath,
        "--format", "records",
      ],
      { encoding: "utf-8" },
    );
    const rows = stdout.trim().split("\n").map((line) => JSON.parse(line));
    const markedCondition = session.boxes.find((b) => b.display_order === 2)!.condition;
    const row = rows.find((r) => r.condition === markedCondition);
    expect(row.box_agreement).toBeGreaterThan(0);
    expect(row.span_agreement).toBeGreaterThan(0);
  });
});
