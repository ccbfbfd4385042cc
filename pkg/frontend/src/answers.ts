// Display models for the four answer formats. Pure functions from API
// payloads to render-ready structures; the DOM layer just walks these.

import type { Answer, QueryOutput, SkillType } from "./types.js";

/** Context split strictly as [0:start], [start:end], [end:]. */
export interface SpanSegments {
  before: string;
  span: string;
  after: string;
}

export function spanSegments(context: string, start: number, end: number): SpanSegments {
  return {
    before: context.slice(0, start),
    span: context.slice(start, end),
    after: context.slice(end),
  };
}

export interface SpanDisplay {
  text: string;
  score: number;
  docId?: string;
  contextScore?: number;
  segments?: SpanSegments; // present when the answer carries its context
}

export interface BarDisplay {
  label: string;
  score: number;
  percent: number; // bar width, score * 100
}

export interface OptionDisplay {
  option: string;
  score: number;
  rank: number;
}

export type AnswerDisplay =
  | { kind: "extractive"; spans: SpanDisplay[] }
  | { kind: "categorical"; bars: BarDisplay[] }
  | { kind: "multiple-choice"; options: OptionDisplay[] }
  | { kind: "abstractive"; text: string; score: number }
  | { kind: "empty" }
  | { kind: "malformed"; reason: string }; // rendered as an inline error panel

function extractiveDisplay(answers: Answer[], fallbackContext?: string): AnswerDisplay {
  const spans: SpanDisplay[] = [];
  for (const answer of answers) {
    if (!answer.span) {
      return { kind: "malformed", reason: "extractive answer without a span" };
    }
    const [start, end] = answer.span;
    const context = answer.context ?? fallbackContext;
    if (context !== undefined && context.slice(start, end) !== answer.text) {
      return { kind: "malformed", reason: "span offsets do not match the context" };
    }
    spans.push({
      text: answer.text,
      score: answer.score,
      docId: answer.doc_id,
      contextScore: answer.context_score,
      segments: context === undefined ? undefined : spanSegments(context, start, end),
    });
  }
  return { kind: "extractive", spans };
}

function categoricalDisplay(answers: Answer[]): AnswerDisplay {
  const bars = answers.map((a) => ({ label: a.text, score: a.score, percent: a.score * 100 }));
  if (bars.some((b) => b.score < 0 || b.score > 1)) {
    return { kind: "malformed", reason: "categorical scores must lie in [0, 1]" };
  }
  return { kind: "categorical", bars };
}

export function renderAnswers(
  skillType: SkillType,
  output: QueryOutput,
  context?: string,
): AnswerDisplay {
  if (!Array.isArray(output.answers)) {
    return { kind: "malformed", reason: "output has no answers list" };
  }
  if (output.answers.length === 0) return { kind: "empty" };
  switch (skillType) {
    case "extractive":
      return extractiveDisplay(output.answers, context);
    case "categorical":
      return categoricalDisplay(output.answers);
    case "multiple-choice":
      return {
        kind: "multiple-choice",
        options: output.answers.map((a, i) => ({ option: a.text, score: a.score, rank: i + 1 })),
      };
    case "abstractive": {
      const top = output.answers[0];
      return { kind: "abstractive", text: top.text, score: top.score };
    }
    default:
      return { kind: "malformed", reason: `unknown skill type ${skillType}` };
  }
}
