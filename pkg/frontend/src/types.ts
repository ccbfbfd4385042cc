// Wire types mirroring the gateway's JSON payloads. The UI never reshapes
// answer content: what the API sends is what gets displayed.

export type SkillType = "extractive" | "categorical" | "multiple-choice" | "abstractive";

export interface PipelineConfig {
  reader_worker: string;
  reader_topk: number;
  retrieve_k: number;
  datastore?: string;
  index?: "sparse" | "dense";
}

export interface Skill {
  id: string;
  name: string;
  description: string;
  skill_type: SkillType;
  requires_context: boolean;
  visibility: "public" | "private";
  owner: string;
  hosting: "internal" | "remote";
  endpoint?: string;
  pipeline?: PipelineConfig;
}

export interface Answer {
  text: string;
  score: number;
  span?: [number, number];
  doc_id?: string;
  context?: string;
  context_score?: number;
}

export interface QueryOutput {
  skill_id: string;
  answers: Answer[];
}

export interface ApiError {
  code: string;
  message: string;
}

export type SkillResult =
  | { kind: "output"; output: QueryOutput }
  | { kind: "error"; error: ApiError };

export interface TestResultRow {
  name: string;
  type: "MFT" | "INV";
  capability: string;
  total: number;
  failures: number;
  failure_rate: string; // two-decimal string, exactly as exported by the backend
  failed_examples: FailedExample[];
}

export interface FailedExample {
  context: string;
  question: string;
  expected?: string;
  prediction: string;
  perturbed_question?: string;
  prediction_after?: string;
  highlight?: [string, string][];
  error?: string;
}

export interface TestReport {
  skill_id: string;
  suite_name: string;
  tests: TestResultRow[];
}

export interface TestSummary {
  skill_id: string;
  available_suites: string[];
  reports: { suite_name: string; tests: Omit<TestResultRow, "failed_examples">[] }[];
}
