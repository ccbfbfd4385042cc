import { describe, expect, it } from "vitest";

import { ComparisonState, TEST_VIEW_MAX_SKILLS, TestViewSelection } from "../src/compare.js";
import type { SkillResult } from "../src/types.js";

function output(id: string, text: string): SkillResult {
  return { kind: "output", output: { skill_id: id, answers: [{ text, score: 1 }] } };
}

describe("ComparisonState", () => {
  it("panels follow selection order, not response order", () => {
    const state = new ComparisonState();
    state.select("sk-2");
    state.select("sk-1");
    state.select("sk-3");
    const seq = state.beginRequest();
    // responses arrive out of order
    state.recordResult(seq, "sk-3", output("sk-3", "charlie"));
    state.recordResult(seq, "sk-1", output("sk-1", "alpha"));
    state.recordResult(seq, "sk-2", output("sk-2", "bravo"));
    expect(state.panels().map((p) => p.skillId)).toEqual(["sk-2", "sk-1", "sk-3"]);
  });

  it("duplicate selections are rejected and deselect removes the panel", () => {
    const state = new ComparisonState();
    expect(state.select("sk-1")).toBe(true);
    expect(state.select("sk-1")).toBe(false);
    state.select("sk-2");
    state.deselect("sk-1");
    expect(state.selectedSkills).toEqual(["sk-2"]);
  });

  it("stale responses from a superseded question are dropped", () => {
    const state = new ComparisonState();
    state.select("sk-1");
    const firstAsk = state.beginRequest();
    const secondAsk = state.beginRequest(); // user asked again before the reply landed
    expect(state.recordResult(firstAsk, "sk-1", output("sk-1", "old answer"))).toBe(false);
    expect(state.panels()[0].result).toBeNull();
    expect(state.recordResult(secondAsk, "sk-1", output("sk-1", "new answer"))).toBe(true);
    const result = state.panels()[0].result;
    expect(result && result.kind === "output" && result.output.answers[0].text).toBe("new answer");
  });

  it("one skill's error does not disturb the other panels", () => {
    const state = new ComparisonState();
    state.select("sk-1");
    state.select("sk-2");
    const seq = state.beginRequest();
    state.recordResult(seq, "sk-1", output("sk-1", "fine"));
    state.recordResult(seq, "sk-2", {
      kind: "error",
      error: { code: "remote_skill_error", message: "down" },
    });
    const [first, second] = state.panels();
    expect(first.result?.kind).toBe("output");
    expect(second.result?.kind).toBe("error");
  });
});

describe("TestViewSelection", () => {
  it("allows at most three skills and rejects the fourth", () => {
    const selection = new TestViewSelection();
    expect(selection.select("sk-1")).toBe(true);
    expect(selection.select("sk-2")).toBe(true);
    expect(selection.select("sk-3")).toBe(true);
    expect(selection.select("sk-4")).toBe(false); // cap enforced
    expect(selection.selectedSkills).toEqual(["sk-1", "sk-2", "sk-3"]);
    expect(TEST_VIEW_MAX_SKILLS).toBe(3);
  });

  it("deselecting frees a slot", () => {
    const selection = new TestViewSelection();
    ["a", "b", "c"].forEach((id) => selection.select(id));
    selection.deselect("b");
    expect(selection.select("d")).toBe(true);
    expect(selection.selectedSkills).toEqual(["a", "c", "d"]);
  });
});
