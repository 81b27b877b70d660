import { ApiError, getEvidence, getHealth, getRun, getTable, submitQuery } from "./api.js";
import { applyFilters, roleOptions, type TableFilters } from "./filters.js";
import { pollRun } from "./poll.js";
import type { TableRow } from "./types.js";
import { renderEvidencePanel, renderTable } from "./view.js";

const BASE = "";

interface UiState {
  runId: string | null;
  rows: TableRow[];
  filters: TableFilters;
}

const state: UiState = { runId: null, rows: [], filters: { trustedOnly: false, role: null } };

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function setStatus(text: string): void {
  element<HTMLParagraphElement>("status").textContent = text;
}

function redrawTable(): void {
  const visible = applyFilters(state.rows, state.filters);
  element<HTMLDivElement>("table").innerHTML = renderTable(visible);
  for (const row of element<HTMLDivElement>("table").querySelectorAll("tr[data-key]")) {
    row.addEventListener("click", () => {
      void showEvidence(row.getAttribute("data-key") ?? "");
    });
  }
}

function redrawRoleFilter(): void {
  const select = element<HTMLSelectElement>("role-filter");
  const current = state.filters.role;
  select.innerHTML = '<option value="">All roles</option>';
  for (const role of roleOptions(state.rows)) {
    const option = document.createElement("option");
    option.value = role;
    option.textContent = role;
    option.selected = role === current;
    select.appendChild(option);
  }
}

async function showEvidence(key: string): Promise<void> {
  if (state.runId === null || key === "") {
    return;
  }
  try {
    const payload = await getEvidence(BASE, state.runId, key);
    element<HTMLDivElement>("evidence").innerHTML = renderEvidencePanel(payload);
  } catch (err) {
    setStatus(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  }
}

async function runQuery(text: string): Promise<void> {
  setStatus("submitting query...");
  element<HTMLDivElement>("evidence").innerHTML = "";
  try {
    const submitted = await submitQuery(BASE, text);
    state.runId = submitted.run_id;
    const record = await pollRun(() => getRun(BASE, submitted.run_id), {
      intervalMs: 500,
      onUpdate: (r) => setStatus(`run ${r.run_id}: ${r.status}`),
    });
    if (record.status !== "Complete") {
      setStatus(`run failed: ${record.error || "unknown error"}`);
      return;
    }
    const table = await getTable(BASE, submitted.run_id);
    state.rows = table.rows;
    redrawRoleFilter();
    redrawTable();
    setStatus(`${table.rows.length} datasets from ${record.counters.contexts ?? 0} citation contexts`);
  } catch (err) {
    setStatus(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  }
}

function wire(): void {
  element<HTMLFormElement>("query-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const text = element<HTMLInputElement>("query-text").value.trim();
    if (text.length > 0) {
      void runQuery(text);
    }
  });
  element<HTMLInputElement>("trusted-filter").addEventListener("change", (event) => {
    state.filters.trustedOnly = (event.target as HTMLInputElement).checked;
    redrawTable();
  });
  element<HTMLSelectElement>("role-filter").addEventListener("change", (event) => {
    const value = (event.target as HTMLSelectElement).value;
    state.filters.role = value === "" ? null : value;
    redrawTable();
  });
  void getHealth(BASE)
    .then((health) => setStatus(`index ready: ${health.papers} papers, ${health.contexts} contexts`))
    .catch(() => setStatus("service unreachable"));
}

wire();
