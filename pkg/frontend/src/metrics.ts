// Metrics panel and compare table. Every displayed number is the backend
// report's value rendered with String(); the viewer does no geometry math
// of its own. Deltas in the compare table are plain differences of the two
// reported values.

import type { MeshReport } from "./api";

export const NUMERIC_FIELDS: Array<{ key: keyof MeshReport; label: string }> = [
  { key: "surface_area", label: "surface area (mm^2)" },
  { key: "enclosed_volume", label: "volume (mm^3)" },
  { key: "relative_density", label: "relative density" },
  { key: "overhang_area_fraction", label: "overhang fraction" },
  { key: "min_wall_mm", label: "min wall (mm)" },
  { key: "component_count", label: "components" },
];

export const FLAG_FIELDS: Array<{ key: keyof MeshReport; label: string }> = [
  { key: "watertight", label: "watertight" },
  { key: "edge_manifold", label: "edge manifold" },
  { key: "consistent_winding", label: "consistent winding" },
];

export function displayValue(value: unknown): string {
  if (value === null || value === undefined) return "n/a";
  return String(value);
}

export function renderMetrics(doc: Document, report: MeshReport): HTMLTableElement {
  const table = doc.createElement("table");
  table.className = "metrics";
  for (const { key, label } of [...NUMERIC_FIELDS, ...FLAG_FIELDS]) {
    const row = table.insertRow();
    row.insertCell().textContent = label;
    const cell = row.insertCell();
    cell.textContent = displayValue(report[key]);
    cell.dataset.field = key;
  }
  return table;
}

export function renderWarnings(doc: Document, report: MeshReport): HTMLElement {
  const container = doc.createElement("div");
  container.className = "warnings";
  if (report.warnings.length === 0) {
    const badge = doc.createElement("span");
    badge.className = "badge ok";
    badge.textContent = "printable";
    container.appendChild(badge);
    return container;
  }
  for (const code of report.warnings) {
    const badge = doc.createElement("span");
    badge.className = "badge warn";
    badge.dataset.code = code;
    badge.textContent = code;
    container.appendChild(badge);
  }
  return container;
}

export function renderCompare(
  doc: Document,
  a: MeshReport,
  b: MeshReport,
): HTMLTableElement {
  const table = doc.createElement("table");
  table.className = "compare";
  const head = table.insertRow();
  for (const title of ["metric", "A", "B", "delta (B-A)"]) {
    const cell = doc.createElement("th");
    cell.textContent = title;
    head.appendChild(cell);
  }
  for (const { key, label } of NUMERIC_FIELDS) {
    const row = table.insertRow();
    row.insertCell().textContent = label;
    const va = a[key] as number | null;
    const vb = b[key] as number | null;
    row.insertCell().textContent = displayValue(va);
    row.insertCell().textContent = displayValue(vb);
    const delta = row.insertCell();
    delta.dataset.field = `delta_${key}`;
    delta.textContent = va === null || vb === null ? "n/a" : displayValue(vb - va);
  }
  for (const { key, label } of FLAG_FIELDS) {
    const row = table.insertRow();
    row.insertCell().textContent = label;
    row.insertCell().textContent = displayValue(a[key]);
    row.insertCell().textContent = displayValue(b[key]);
    row.insertCell().textContent = a[key] === b[key] ? "same" : "differs";
  }
  return table;
}
