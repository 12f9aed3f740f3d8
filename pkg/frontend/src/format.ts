// Display formatting. Numbers pass through String() untouched so every
// value on screen matches its API field; anything fancier would break the
// verbatim guarantee the snapshot tests enforce.

export function show(value: number | string | boolean | null | undefined): string {
  if (value === null || value === undefined) {
    return "";
  }
  return String(value);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}
