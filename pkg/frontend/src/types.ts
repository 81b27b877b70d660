/** Payload shapes returned by the discovery service API. */

export interface LinkView {
  kind: string;
  value: string;
  tier: string;
  trusted: boolean;
}

export interface TableRow {
  rank: number;
  canonical_key: string;
  display_name: string;
  aliases: string[];
  family_id: string | null;
  flags: string[];
  link: LinkView | null;
  mention_count: number;
  citation_count: number;
  trusted: boolean;
  with_pid: boolean;
  usage_roles: Record<string, number>;
}

export interface TablePayload {
  run_id: string;
  rows: TableRow[];
}

export type RunStatus = "Pending" | "Running" | "Failed" | "Complete";

export interface RunRecord {
  run_id: string;
  status: RunStatus;
  query: { text: string; field_constraints: string[]; seed_k: number };
  counters: Record<string, number>;
  artifacts: string[];
  error: string;
}

export interface RelevanceVerdict {
  is_relevant: boolean;
  confidence: number;
  reasoning: string;
  undetermined: boolean;
}

export interface MentionRow {
  surface_name: string;
  usage_role: string;
  content_type: string;
  evidence: string;
  confidence: number;
  rationale: string;
  citing_id: string;
  cited_id: string;
  context_id: string;
  extracted_url: string | null;
  canonical_key: string;
  window_text: string;
  citing_title: string;
  cited_title: string;
  relevance: RelevanceVerdict;
}

export interface EntityDetail {
  canonical_key: string;
  display_name: string;
  aliases: string[];
  surface_counts: Record<string, number>;
  usage_roles: Record<string, number>;
  mention_count: number;
  contexts: string[];
  relations: [string, string][];
  links: LinkView[];
  family_id: string | null;
  flags: string[];
}

export interface EvidencePayload {
  entity: EntityDetail;
  mentions: MentionRow[];
}

export interface HealthPayload {
  status: string;
  papers: number;
  contexts: number;
}

export interface SubmitResponse {
  run_id: string;
  status: RunStatus;
}
