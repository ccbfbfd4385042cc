// Skill management: form model <-> wire payload, with gateway errors
// surfaced verbatim (code + message) instead of being rewritten.

import { GatewayClient, GatewayError } from "./api.js";
import type { Skill } from "./types.js";

export interface SkillForm {
  id?: string;
  name: string;
  description: string;
  skill_type: string;
  requires_context: boolean;
  visibility: "public" | "private";
  hosting: "internal" | "remote";
  endpoint: string;
  datastore: string;
  index: string;
  reader_worker: string;
  retrieve_k: number;
  reader_topk: number;
}

export function emptyForm(): SkillForm {
  return {
    name: "",
    description: "",
    skill_type: "extractive",
    requires_context: true,
    visibility: "public",
    hosting: "internal",
    endpoint: "",
    datastore: "",
    index: "",
    reader_worker: "",
    retrieve_k: 3,
    reader_topk: 5,
  };
}

export function formFromSkill(skill: Skill): SkillForm {
  return {
    id: skill.id,
    name: skill.name,
    description: skill.description,
    skill_type: skill.skill_type,
    requires_context: skill.requires_context,
    visibility: skill.visibility,
    hosting: skill.hosting,
    endpoint: skill.endpoint ?? "",
    datastore: skill.pipeline?.datastore ?? "",
    index: skill.pipeline?.index ?? "",
    reader_worker: skill.pipeline?.reader_worker ?? "",
    retrieve_k: skill.pipeline?.retrieve_k ?? 3,
    reader_topk: skill.pipeline?.reader_topk ?? 5,
  };
}

export function formToPayload(form: SkillForm): Partial<Skill> {
  const payload: Record<string, unknown> = {
    name: form.name,
    description: form.description,
    skill_type: form.skill_type,
    requires_context: form.requires_context,
    visibility: form.visibility,
    hosting: form.hosting,
  };
  if (form.hosting === "remote") {
    payload.endpoint = form.endpoint;
  } else {
    const pipeline: Record<string, unknown> = {
      reader_worker: form.reader_worker,
      reader_topk: form.reader_topk,
      retrieve_k: form.retrieve_k,
    };
    if (!form.requires_context) {
      pipeline.datastore = form.datastore;
      pipeline.index = form.index;
    }
    payload.pipeline = pipeline;
  }
  return payload as Partial<Skill>;
}

export type SaveResult =
  | { ok: true; skill: Skill }
  | { ok: false; code: string; message: string; status: number };

export async function saveSkill(client: GatewayClient, form: SkillForm): Promise<SaveResult> {
  try {
    const payload = formToPayload(form);
    const skill = form.id
      ? await client.updateSkill(form.id, payload)
      : await client.registerSkill(payload);
    return { ok: true, skill };
  } catch (err) {
    if (err instanceof GatewayError) {
      return { ok: false, code: err.code, message: err.message, status: err.status };
    }
    throw err;
  }
}
