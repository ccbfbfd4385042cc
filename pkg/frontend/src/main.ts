// App entry: wires the gateway client, the comparison state, the skill
// manager, and the test explorer into the static page.

import { GatewayClient, GatewayError } from "./api.js";
import { renderAnswers } from "./answers.js";
import { ComparisonState, TestViewSelection } from "./compare.js";
import { downloadBytes, el, renderAnswerPanel, renderReportTable } from "./dom.js";
import { emptyForm, formFromSkill, saveSkill, type SkillForm } from "./manage.js";
import { renderTestReport, reportFilename, toggleRow, type ReportDisplay } from "./reports.js";
import type { Skill, SkillResult } from "./types.js";

const state = {
  client: new GatewayClient(window.location.origin, (input, init) => fetch(input, init)),
  skills: [] as Skill[],
  comparison: new ComparisonState(),
  testSelection: new TestViewSelection(),
  reports: new Map<string, ReportDisplay>(),
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function skillById(id: string): Skill | undefined {
  return state.skills.find((s) => s.id === id);
}

async function refreshSkills(): Promise<void> {
  try {
    state.skills = await state.client.listSkills();
  } catch (err) {
    showStatus(err);
    state.skills = [];
  }
  const picker = byId("skill-picker");
  picker.replaceChildren();
  for (const skill of state.skills) {
    const label = el("label", "skill-choice");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.value = skill.id;
    checkbox.checked = state.comparison.selectedSkills.includes(skill.id);
    checkbox.addEventListener("change", () => {
      if (checkbox.checked) state.comparison.select(skill.id);
      else state.comparison.deselect(skill.id);
      renderPanels();
    });
    label.appendChild(checkbox);
    label.appendChild(
      el("span", "skill-label", `${skill.name} (${skill.skill_type}, ${skill.visibility})`),
    );
    picker.appendChild(label);
  }
  renderManagementList();
}

function showStatus(err: unknown): void {
  const status = byId("status");
  if (err instanceof GatewayError) {
    status.textContent = `${err.code}: ${err.message}`;
  } else {
    status.textContent = String(err);
  }
}

function renderPanels(): void {
  const host = byId("panels");
  host.replaceChildren();
  for (const panel of state.comparison.panels()) {
    const skill = skillById(panel.skillId);
    const name = skill ? skill.name : panel.skillId;
    if (panel.result === null) {
      const pending = el("section", "answer-panel");
      pending.appendChild(el("h3", "panel-title", name));
      pending.appendChild(el("p", "pending", "…"));
      host.appendChild(pending);
      continue;
    }
    if (panel.result.kind === "error") {
      const errorPanel = el("section", "answer-panel");
      errorPanel.appendChild(el("h3", "panel-title", name));
      errorPanel.appendChild(
        el("div", "error-panel", `${panel.result.error.code}: ${panel.result.error.message}`),
      );
      host.appendChild(errorPanel);
      continue;
    }
    const context = (byId("context") as HTMLTextAreaElement).value || undefined;
    const display = renderAnswers(
      skill?.skill_type ?? "extractive",
      panel.result.output,
      context,
    );
    host.appendChild(renderAnswerPanel(name, display));
  }
}

async function ask(): Promise<void> {
  const question = (byId("question") as HTMLInputElement).value.trim();
  const context = (byId("context") as HTMLTextAreaElement).value;
  if (!question) return;
  const sequence = state.comparison.beginRequest();
  renderPanels();
  await Promise.all(
    state.comparison.selectedSkills.map(async (skillId) => {
      let result: SkillResult;
      try {
        const output = await state.client.querySkill(skillId, {
          query: question,
          context: context || undefined,
        });
        result = { kind: "output", output };
      } catch (err) {
        if (err instanceof GatewayError) {
          result = { kind: "error", error: { code: err.code, message: err.message } };
        } else {
          result = { kind: "error", error: { code: "internal", message: String(err) } };
        }
      }
      if (state.comparison.recordResult(sequence, skillId, result)) renderPanels();
    }),
  );
}

// ---------------------------------------------------------------- management

function renderManagementList(): void {
  const host = byId("manage-list");
  host.replaceChildren();
  for (const skill of state.skills) {
    const row = el("div", "manage-row");
    row.appendChild(el("span", "skill-label", `${skill.name} [${skill.id}]`));
    const edit = el("button", "edit", "Edit");
    edit.addEventListener("click", () => fillForm(formFromSkill(skill)));
    const remove = el("button", "delete", "Delete");
    remove.addEventListener("click", async () => {
      try {
        await state.client.removeSkill(skill.id);
        await refreshSkills();
      } catch (err) {
        showStatus(err);
      }
    });
    row.appendChild(edit);
    row.appendChild(remove);
    host.appendChild(row);
  }
}

function readForm(): SkillForm {
  return {
    id: (byId("form-id") as HTMLInputElement).value || undefined,
    name: (byId("form-name") as HTMLInputElement).value,
    description: (byId("form-description") as HTMLInputElement).value,
    skill_type: (byId("form-type") as HTMLSelectElement).value,
    requires_context: (byId("form-requires-context") as HTMLInputElement).checked,
    visibility: (byId("form-visibility") as HTMLSelectElement).value as "public" | "private",
    hosting: (byId("form-hosting") as HTMLSelectElement).value as "internal" | "remote",
    endpoint: (byId("form-endpoint") as HTMLInputElement).value,
    datastore: (byId("form-datastore") as HTMLInputElement).value,
    index: (byId("form-index") as HTMLSelectElement).value,
    reader_worker: (byId("form-reader") as HTMLInputElement).value,
    retrieve_k: Number((byId("form-retrieve-k") as HTMLInputElement).value) || 3,
    reader_topk: Number((byId("form-reader-topk") as HTMLInputElement).value) || 5,
  };
}

function fillForm(form: SkillForm): void {
  (byId("form-id") as HTMLInputElement).value = form.id ?? "";
  (byId("form-name") as HTMLInputElement).value = form.name;
  (byId("form-description") as HTMLInputElement).value = form.description;
  (byId("form-type") as HTMLSelectElement).value = form.skill_type;
  (byId("form-requires-context") as HTMLInputElement).checked = form.requires_context;
  (byId("form-visibility") as HTMLSelectElement).value = form.visibility;
  (byId("form-hosting") as HTMLSelectElement).value = form.hosting;
  (byId("form-endpoint") as HTMLInputElement).value = form.endpoint;
  (byId("form-datastore") as HTMLInputElement).value = form.datastore;
  (byId("form-index") as HTMLSelectElement).value = form.index;
  (byId("form-reader") as HTMLInputElement).value = form.reader_worker;
  (byId("form-retrieve-k") as HTMLInputElement).value = String(form.retrieve_k);
  (byId("form-reader-topk") as HTMLInputElement).value = String(form.reader_topk);
}

async function submitForm(): Promise<void> {
  const result = await saveSkill(state.client, readForm());
  const inline = byId("form-error");
  if (result.ok) {
    inline.textContent = "";
    fillForm(emptyForm());
    await refreshSkills();
  } else {
    inline.textContent = `${result.code}: ${result.message}`; // gateway error, verbatim
  }
}

// ---------------------------------------------------------------- test view

async function runSelectedSuites(): Promise<void> {
  const suiteName = (byId("suite-name") as HTMLInputElement).value.trim() || "core";
  const host = byId("report-host");
  host.replaceChildren();
  for (const skillId of state.testSelection.selectedSkills) {
    try {
      const report = await state.client.runSuite(skillId, suiteName);
      state.reports.set(skillId, renderTestReport(report));
    } catch (err) {
      showStatus(err);
    }
  }
  renderReports();
}

function renderReports(): void {
  const host = byId("report-host");
  host.replaceChildren();
  for (const skillId of state.testSelection.selectedSkills) {
    const display = state.reports.get(skillId);
    if (!display) continue;
    host.appendChild(
      renderReportTable(
        display,
        (row) => {
          state.reports.set(skillId, toggleRow(display, row));
          renderReports();
        },
        async () => {
          const bytes = await state.client.downloadReport(skillId, display.suiteName);
          downloadBytes(bytes, reportFilename(display));
        },
      ),
    );
  }
}

function renderTestPicker(): void {
  const picker = byId("test-skill-picker");
  picker.replaceChildren();
  for (const skill of state.skills) {
    const label = el("label", "skill-choice");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.value = skill.id;
    checkbox.addEventListener("change", () => {
      if (checkbox.checked) {
        if (!state.testSelection.select(skill.id)) checkbox.checked = false; // cap: 3 skills
      } else {
        state.testSelection.deselect(skill.id);
      }
    });
    label.appendChild(checkbox);
    label.appendChild(el("span", "skill-label", skill.name));
    picker.appendChild(label);
  }
}

// ---------------------------------------------------------------- bootstrap

export function start(): void {
  byId("ask").addEventListener("click", () => void ask());
  byId("form-save").addEventListener("click", () => void submitForm());
  byId("run-tests").addEventListener("click", () => void runSelectedSuites());
  byId("token-apply").addEventListener("click", () => {
    const token = (byId("token") as HTMLInputElement).value.trim();
    state.client.token = token || null;
    void refreshSkills().then(renderTestPicker);
  });
  void refreshSkills().then(renderTestPicker);
}

if (typeof document !== "undefined" && document.getElementById("skill-picker")) {
  start();
}
