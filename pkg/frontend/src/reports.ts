// Display model for behavioural test reports: summary rows, expandable
// failed examples, and perturbation highlights as paired markers.

import type { FailedExample, TestReport } from "./types.js";

export interface HighlightMarker {
  original: string; // struck out in the UI
  replacement: string; // marked as the perturbed form
}

export interface ExampleDisplay {
  context: string;
  question: string;
  expected?: string;
  prediction: string;
  perturbedQuestion?: string;
  predictionAfter?: string;
  errorCode?: string;
  highlights: HighlightMarker[];
}

export interface ReportRow {
  name: string;
  type: "MFT" | "INV";
  capability: string;
  total: number;
  failures: number;
  rateLabel: string; // e.g. "25.00%", verbatim from the canonical report
  expanded: boolean;
  examples: ExampleDisplay[];
}

export interface ReportDisplay {
  skillId: string;
  suiteName: string;
  rows: ReportRow[];
}

function exampleDisplay(example: FailedExample): ExampleDisplay {
  return {
    context: example.context,
    question: example.question,
    expected: example.expected,
    prediction: example.prediction,
    perturbedQuestion: example.perturbed_question,
    predictionAfter: example.prediction_after,
    errorCode: example.error,
    highlights: (example.highlight ?? []).map(([original, replacement]) => ({
      original,
      replacement,
    })),
  };
}

export function renderTestReport(report: TestReport): ReportDisplay {
  return {
    skillId: report.skill_id,
    suiteName: report.suite_name,
    rows: report.tests.map((test) => ({
      name: test.name,
      type: test.type,
      capability: test.capability,
      total: test.total,
      failures: test.failures,
      rateLabel: `${test.failure_rate}%`,
      expanded: false,
      examples: (test.failed_examples ?? []).map(exampleDisplay),
    })),
  };
}

export function toggleRow(display: ReportDisplay, rowIndex: number): ReportDisplay {
  return {
    ...display,
    rows: display.rows.map((row, i) =>
      i === rowIndex ? { ...row, expanded: !row.expanded } : row,
    ),
  };
}

/** Filename used by the download control. */
export function reportFilename(display: ReportDisplay): string {
  return `${display.skillId}__${display.suiteName}.json`;
}
