/** Palettes: single-hue ramp for counts, categorical colors for tracks. */

export function countColor(value: number, max: number): string {
  const span = max > 0 ? max : 1;
  const t = Math.min(Math.max(value / span, 0), 1);
  const lightness = 95 - t * 60;
  return `hsl(215, 65%, ${lightness}%)`;
}

export const CATEGORICAL = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#e45756",
  "#72b7b2",
  "#eeca3b",
  "#b279a2",
  "#ff9da6",
  "#9d755d",
  "#bab0ac",
];

export function categoryColor(id: number): string {
  const n = CATEGORICAL.length;
  return CATEGORICAL[((id % n) + n) % n];
}
