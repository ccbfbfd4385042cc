import { describe, expect, it } from "vitest";

import { renderAnswers, spanSegments } from "../src/answers.js";
import type { QueryOutput } from "../src/types.js";

// deterministic PRNG so the 100 random spans are reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ALPHABET = "abcdefghij ABCDEFé.,!?\n\t—日本語 0123456789";

function randomString(rand: () => number, maxLen: number): string {
  const length = Math.floor(rand() * maxLen);
  let out = "";
  for (let i = 0; i < length; i++) {
    out += ALPHABET[Math.floor(rand() * ALPHABET.length)];
  }
  return out;
}

describe("spanSegments", () => {
  it("reassembles the context byte-exactly for 100 random spans", () => {
    const rand = mulberry32(20240811);
    for (let trial = 0; trial < 100; trial++) {
      const context = randomString(rand, 200);
      const a = Math.floor(rand() * (context.length + 1));
      const b = Math.floor(rand() * (context.length + 1));
      const start = Math.min(a, b);
      const end = Math.max(a, b);
      const { before, span, after } = spanSegments(context, start, end);
      expect(before + span + after).toBe(context);
      expect(span).toBe(context.slice(start, end));
    }
  });

  it("slices strictly as [0:start], [start:end], [end:]", () => {
    const context = "There is a tiny purple box in the room.";
    const segments = spanSegments(context, 16, 22);
    expect(segments).toEqual({
      before: "There is a tiny ",
      span: "purple",
      after: " box in the room.",
    });
  });
});

describe("renderAnswers", () => {
  const context = "There is a tiny purple box in the room.";

  it("extractive answers become ranked spans with highlight segments", () => {
    const output: QueryOutput = {
      skill_id: "sk-1",
      answers: [
        { text: "purple", score: 0.81, span: [16, 22], context },
        { text: "tiny purple", score: 0.81, span: [11, 22], context },
      ],
    };
    const display = renderAnswers("extractive", output, context);
    expect(display.kind).toBe("extractive");
    if (display.kind !== "extractive") return;
    expect(display.spans.map((s) => s.text)).toEqual(["purple", "tiny purple"]);
    for (const span of display.spans) {
      const seg = span.segments!;
      expect(seg.before + seg.span + seg.after).toBe(context);
      expect(seg.span).toBe(span.text);
    }
  });

  it("displayed texts and scores equal the API payload with no post-processing", () => {
    const output: QueryOutput = {
      skill_id: "sk-1",
      answers: [{ text: "  Purple!  ", score: 0.8187307531, span: [0, 11], context: "  Purple!  x" }],
    };
    const display = renderAnswers("extractive", output, "  Purple!  x");
    if (display.kind !== "extractive") throw new Error("wrong kind");
    expect(display.spans[0].text).toBe("  Purple!  ");
    expect(display.spans[0].score).toBe(0.8187307531);
  });

  it("categorical answers become two proportional bars", () => {
    const output: QueryOutput = {
      skill_id: "sk-2",
      answers: [
        { text: "yes", score: 0.75 },
        { text: "no", score: 0.25 },
      ],
    };
    const display = renderAnswers("categorical", output);
    expect(display).toEqual({
      kind: "categorical",
      bars: [
        { label: "yes", score: 0.75, percent: 75 },
        { label: "no", score: 0.25, percent: 25 },
      ],
    });
  });

  it("multiple-choice answers become ranked options", () => {
    const output: QueryOutput = {
      skill_id: "sk-3",
      answers: [
        { text: "blue", score: 1.0 },
        { text: "red", score: 0.0 },
      ],
    };
    const display = renderAnswers("multiple-choice", output);
    expect(display).toEqual({
      kind: "multiple-choice",
      options: [
        { option: "blue", score: 1.0, rank: 1 },
        { option: "red", score: 0.0, rank: 2 },
      ],
    });
  });

  it("abstractive output shows the top answer text and score", () => {
    const output: QueryOutput = {
      skill_id: "sk-4",
      answers: [{ text: "Paris is the capital of France.", score: 1.0 }],
    };
    expect(renderAnswers("abstractive", output)).toEqual({
      kind: "abstractive",
      text: "Paris is the capital of France.",
      score: 1.0,
    });
  });

  it("shape mismatches yield an inline error model, never a crash", () => {
    const missingSpan: QueryOutput = {
      skill_id: "sk-1",
      answers: [{ text: "purple", score: 0.8 }],
    };
    expect(renderAnswers("extractive", missingSpan, context).kind).toBe("malformed");

    const badOffsets: QueryOutput = {
      skill_id: "sk-1",
      answers: [{ text: "purple", score: 0.8, span: [0, 6], context }],
    };
    expect(renderAnswers("extractive", badOffsets, context).kind).toBe("malformed");

    const badScores: QueryOutput = {
      skill_id: "sk-2",
      answers: [{ text: "yes", score: 1.4 }],
    };
    expect(renderAnswers("categorical", badScores).kind).toBe("malformed");
  });

  it("an empty answers list renders as the empty model", () => {
    expect(renderAnswers("extractive", { skill_id: "x", answers: [] })).toEqual({ kind: "empty" });
  });
});
