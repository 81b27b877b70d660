import { readFileSync } from "node:fs";

import type { EvidencePayload, RunRecord, TablePayload } from "../src/types.js";

export interface Expected {
  row_count: number;
  trusted_keys: string[];
  evaluate_against_keys: string[];
  evidence_key: string;
}

function load<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export const tablePayload = load<TablePayload>("table.json");
export const runRecord = load<RunRecord>("run.json");
export const evidencePayload = load<EvidencePayload>("evidence.json");
export const expected = load<Expected>("expected.json");
