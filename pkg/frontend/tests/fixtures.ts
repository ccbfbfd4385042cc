// Canonical report bytes exactly as the gateway download endpoint serves them
// (captured from a live backend run; byte-for-byte, sorted keys, compact separators).
export const CANONICAL_REPORT_JSON: string =
  "{\"skill_id\":\"sk-1\",\"suite_name\":\"acceptance-10\",\"tests\":[{\"capability\":\"Taxonomy\",\"failed_examples\":[{\"context\":\"The whale in the bay is huge.\",\"expected\":\"huge\",\"prediction\":\"tiny\",\"question\":\"What size is the whale?\"},{\"context\":\"The mouse is small and quick.\",\"expected\":\"small\",\"prediction\":\"tiny\",\"question\":\"What size is the mouse?\"}],\"failure_rate\":\"50.00\",\"failures\":2,\"name\":\"object-size\",\"total\":4,\"type\":\"MFT\"},{\"capability\":\"Robustness\",\"failed_examples\":[],\"failure_rate\":\"0.00\",\"failures\":0,\"name\":\"typo-robustness\",\"total\":3,\"type\":\"INV\"},{\"capability\":\"Robustness\",\"failed_examples\":[],\"failure_rate\":\"0.00\",\"failures\":0,\"name\":\"name-replacement\",\"total\":3,\"type\":\"INV\"}]}";
