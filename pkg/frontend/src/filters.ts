import type { TableRow } from "./types.js";

export interface TableFilters {
  trustedOnly: boolean;
  role: string | null;
}

export const NO_FILTERS: TableFilters = { trustedOnly: false, role: null };

/** Rows surviving the active filters, original rank order preserved. */
export function applyFilters(rows: TableRow[], filters: TableFilters): TableRow[] {
  return rows.filter((row) => {
    if (filters.trustedOnly && !row.trusted) {
      return false;
    }
    if (filters.role !== null && !(filters.role in row.usage_roles)) {
      return false;
    }
    return true;
  });
}

/** Distinct usage roles, ordered by total mention count, then name. */
export function roleOptions(rows: TableRow[]): string[] {
  const totals = new Map<string, number>();
  for (const row of rows) {
    for (const [role, count] of Object.entries(row.usage_roles)) {
      totals.set(role, (totals.get(role) ?? 0) + count);
    }
  }
  return [...totals.entries()]
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]))
    .map(([role]) => role);
}
