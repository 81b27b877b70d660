export interface HighlightSegments {
  before: string;
  match: string;
  after: string;
}

/**
 * Split a citation window around the first occurrence of the evidence
 * span. Returns null when the span does not occur verbatim.
 */
export function highlightSegments(windowText: string, evidence: string): HighlightSegments | null {
  if (evidence.length === 0) {
    return null;
  }
  const start = windowText.indexOf(evidence);
  if (start === -1) {
    return null;
  }
  return {
    before: windowText.slice(0, start),
    match: windowText.slice(start, start + evidence.length),
    after: windowText.slice(start + evidence.length),
  };
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Window HTML with the evidence span wrapped in <mark>. */
export function renderWindowHtml(windowText: string, evidence: string): string {
  const segments = highlightSegments(windowText, evidence);
  if (segments === null) {
    return escapeHtml(windowText);
  }
  return `${escapeHtml(segments.before)}<mark>${escapeHtml(segments.match)}</mark>${escapeHtml(segments.after)}`;
}
