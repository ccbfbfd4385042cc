// Comparison state: ordered skill selection, per-skill results, and
// request-sequence tagging so answers from a superseded question are dropped.

import type { SkillResult } from "./types.js";

export const TEST_VIEW_MAX_SKILLS = 3;

export interface Panel {
  skillId: string;
  result: SkillResult | null; // null while in flight
}

export class ComparisonState {
  private selection: string[] = [];
  private results = new Map<string, SkillResult>();
  private sequence = 0;

  /** Selection order drives panel order, left to right. */
  get selectedSkills(): string[] {
    return [...this.selection];
  }

  select(skillId: string): boolean {
    if (this.selection.includes(skillId)) return false;
    this.selection.push(skillId);
    return true;
  }

  deselect(skillId: string): void {
    this.selection = this.selection.filter((id) => id !== skillId);
    this.results.delete(skillId);
  }

  /** Tag a new round of in-flight requests; older responses become stale. */
  beginRequest(): number {
    this.results.clear();
    this.sequence += 1;
    return this.sequence;
  }

  /** Record a response; returns false (and ignores it) when it is stale. */
  recordResult(sequence: number, skillId: string, result: SkillResult): boolean {
    if (sequence !== this.sequence) return false;
    this.results.set(skillId, result);
    return true;
  }

  /** Panels in selection order; in-flight skills have a null result. */
  panels(): Panel[] {
    return this.selection.map((skillId) => ({
      skillId,
      result: this.results.get(skillId) ?? null,
    }));
  }
}

/** The explainability view compares at most three skills side by side. */
export class TestViewSelection {
  private selection: string[] = [];

  get selectedSkills(): string[] {
    return [...this.selection];
  }

  select(skillId: string): boolean {
    if (this.selection.includes(skillId)) return false;
    if (this.selection.length >= TEST_VIEW_MAX_SKILLS) return false;
    this.selection.push(skillId);
    return true;
  }

  deselect(skillId: string): void {
    this.selection = this.selection.filter((id) => id !== skillId);
  }
}
