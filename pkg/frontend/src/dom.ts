// DOM rendering for the display models. Everything here is presentation
// only: the content of every node comes verbatim from a display model.

import type { AnswerDisplay } from "./answers.js";
import type { ExampleDisplay, ReportDisplay } from "./reports.js";
import { formatScore } from "./format.js";

export function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderAnswerPanel(skillName: string, display: AnswerDisplay): HTMLElement {
  const panel = el("section", "answer-panel");
  panel.appendChild(el("h3", "panel-title", skillName));

  switch (display.kind) {
    case "malformed": {
      const error = el("div", "error-panel", `malformed output: ${display.reason}`);
      panel.appendChild(error);
      break;
    }
    case "empty":
      panel.appendChild(el("p", "empty", "no answers"));
      break;
    case "extractive": {
      const list = el("ol", "span-list");
      for (const span of display.spans) {
        const item = el("li", "span-item");
        item.appendChild(el("span", "answer-text", span.text));
        item.appendChild(el("span", "score", formatScore(span.score)));
        if (span.docId) item.appendChild(el("span", "doc-id", span.docId));
        if (span.segments) {
          const ctx = el("p", "span-context");
          ctx.appendChild(document.createTextNode(span.segments.before));
          ctx.appendChild(el("mark", "span-highlight", span.segments.span));
          ctx.appendChild(document.createTextNode(span.segments.after));
          item.appendChild(ctx);
        }
        list.appendChild(item);
      }
      panel.appendChild(list);
      break;
    }
    case "categorical": {
      const bars = el("div", "bars");
      for (const bar of display.bars) {
        const row = el("div", "bar-row");
        row.appendChild(el("span", "bar-label", bar.label));
        const track = el("div", "bar-track");
        const fill = el("div", "bar-fill");
        fill.style.width = `${bar.percent}%`;
        track.appendChild(fill);
        row.appendChild(track);
        row.appendChild(el("span", "score", formatScore(bar.score)));
        bars.appendChild(row);
      }
      panel.appendChild(bars);
      break;
    }
    case "multiple-choice": {
      const list = el("ol", "option-list");
      for (const option of display.options) {
        const item = el("li", "option-item");
        item.appendChild(el("span", "answer-text", option.option));
        item.appendChild(el("span", "score", formatScore(option.score)));
        list.appendChild(item);
      }
      panel.appendChild(list);
      break;
    }
    case "abstractive":
      panel.appendChild(el("p", "answer-text", display.text));
      panel.appendChild(el("span", "score", formatScore(display.score)));
      break;
  }
  return panel;
}

function renderExample(example: ExampleDisplay): HTMLElement {
  const box = el("div", "failed-example");
  box.appendChild(el("p", "example-context", example.context));
  box.appendChild(el("p", "example-question", example.question));
  if (example.perturbedQuestion) {
    box.appendChild(el("p", "example-perturbed", example.perturbedQuestion));
  }
  for (const marker of example.highlights) {
    const pair = el("span", "highlight-pair");
    pair.appendChild(el("del", "highlight-original", marker.original));
    pair.appendChild(el("ins", "highlight-replacement", marker.replacement));
    box.appendChild(pair);
  }
  if (example.expected !== undefined) {
    box.appendChild(el("p", "example-expected", `expected: ${example.expected}`));
  }
  box.appendChild(el("p", "example-prediction", `prediction: ${example.prediction}`));
  if (example.predictionAfter !== undefined) {
    box.appendChild(el("p", "example-prediction-after", `after: ${example.predictionAfter}`));
  }
  if (example.errorCode) {
    box.appendChild(el("p", "example-error", `query error: ${example.errorCode}`));
  }
  return box;
}

export function renderReportTable(
  display: ReportDisplay,
  onToggle: (row: number) => void,
  onDownload: () => void,
): HTMLElement {
  const container = el("section", "report");
  const heading = el("h3", "panel-title", `${display.suiteName} — ${display.skillId}`);
  container.appendChild(heading);

  const download = el("button", "download-report", "Download JSON report");
  download.addEventListener("click", onDownload);
  container.appendChild(download);

  display.rows.forEach((row, i) => {
    const rowEl = el("div", "report-row");
    const header = el("div", "report-row-header");
    header.appendChild(el("span", "test-name", row.name));
    header.appendChild(el("span", "test-type", row.type));
    header.appendChild(el("span", "test-capability", row.capability));
    header.appendChild(el("span", "failure-rate", row.rateLabel));
    const expand = el("button", "expand", row.expanded ? "Collapse" : "Expand");
    expand.addEventListener("click", () => onToggle(i));
    header.appendChild(expand);
    rowEl.appendChild(header);
    if (row.expanded) {
      const examples = el("div", "examples");
      row.examples.forEach((example) => examples.appendChild(renderExample(example)));
      rowEl.appendChild(examples);
    }
    container.appendChild(rowEl);
  });
  return container;
}

export function downloadBytes(bytes: Uint8Array, filename: string): void {
  const copy = new Uint8Array(bytes); // fresh ArrayBuffer keeps Blob typing happy
  const blob = new Blob([copy.buffer], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}
