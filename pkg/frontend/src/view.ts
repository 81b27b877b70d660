import { escapeHtml, renderWindowHtml } from "./highlight.js";
import type { EvidencePayload, MentionRow, TableRow } from "./types.js";

export function describeLink(row: TableRow): string {
  if (row.link === null) {
    return "no link";
  }
  return `${row.link.kind}: ${row.link.value}`;
}

function describeRoles(roles: Record<string, number>): string {
  return Object.entries(roles)
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]))
    .map(([role, count]) => `${role} (${count})`)
    .join(", ");
}

function renderRow(row: TableRow): string {
  const badge = row.trusted ? '<span class="badge trusted">trusted</span>' : "";
  const aliases = row.aliases.length > 0 ? ` <small>also: ${escapeHtml(row.aliases.join(", "))}</small>` : "";
  return `
    <tr data-key="${escapeHtml(row.canonical_key)}">
      <td class="rank">${row.rank}</td>
      <td class="name"><button type="button" class="entity">${escapeHtml(row.display_name)}</button>${aliases} ${badge}</td>
      <td class="roles">${escapeHtml(describeRoles(row.usage_roles))}</td>
      <td class="counts">${row.mention_count} mentions / ${row.citation_count} citing</td>
      <td class="link">${escapeHtml(describeLink(row))}</td>
    </tr>`;
}

/** The ranked results table; rows render in the order given. */
export function renderTable(rows: TableRow[]): string {
  if (rows.length === 0) {
    return '<p class="empty">No rows match the active filters.</p>';
  }
  const body = rows.map(renderRow).join("\n");
  return `
    <table class="results">
      <thead>
        <tr><th>#</th><th>Dataset</th><th>Roles</th><th>Counts</th><th>Link</th></tr>
      </thead>
      <tbody>${body}
      </tbody>
    </table>`;
}

function renderMention(mention: MentionRow): string {
  const url = mention.extracted_url
    ? `<p class="mention-url">URL: ${escapeHtml(mention.extracted_url)}</p>`
    : "";
  return `
    <article class="mention" data-context="${escapeHtml(mention.context_id)}">
      <header>${escapeHtml(mention.surface_name)} &middot; ${escapeHtml(mention.usage_role)} &middot; confidence ${mention.confidence.toFixed(2)}</header>
      <blockquote class="window">${renderWindowHtml(mention.window_text, mention.evidence)}</blockquote>
      <p class="provenance">${escapeHtml(mention.citing_title)} &rarr; ${escapeHtml(mention.cited_title)}</p>
      ${url}
    </article>`;
}

/** Evidence panel: entity header plus one highlighted window per mention. */
export function renderEvidencePanel(payload: EvidencePayload): string {
  const entity = payload.entity;
  const aliases = entity.aliases.length > 0 ? ` (also: ${escapeHtml(entity.aliases.join(", "))})` : "";
  const family = entity.family_id ? `<p class="family">family: ${escapeHtml(entity.family_id)}</p>` : "";
  const mentions = payload.mentions.map(renderMention).join("\n");
  return `
    <section class="evidence-panel">
      <h2>${escapeHtml(entity.display_name)}${aliases}</h2>
      ${family}
      ${mentions}
    </section>`;
}

/** data-key attributes in document order, for row selection. */
export function extractRowKeys(tableHtml: string): string[] {
  const keys: string[] = [];
  const pattern = /data-key="([^"]*)"/g;
  let match: RegExpExecArray | null;
  while ((match = pattern.exec(tableHtml)) !== null) {
    keys.push(match[1]);
  }
  return keys;
}
