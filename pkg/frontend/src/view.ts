/** Pure view math: table→canvas projection and panel row shaping.
 *
 * Kept DOM-free so it unit-tests without a browser.
 */

import type { BeliefEntry, Box, EpisodeResult, ObjectStatus, PadState } from "./protocol.js";

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export interface Projection {
  /** Table-plane point to canvas pixels (y axis flipped so +y is up-screen). */
  toScreen(x: number, y: number): [number, number];
  /** Meters to pixels. */
  scale: number;
}

/** Uniform, centered top-down projection of the workspace box. */
export function makeProjection(workspace: Box, vp: Viewport): Projection {
  const spanX = workspace.max[0] - workspace.min[0];
  const spanY = workspace.max[1] - workspace.min[1];
  const usableW = vp.width - 2 * vp.margin;
  const usableH = vp.height - 2 * vp.margin;
  const scale = Math.min(usableW / spanX, usableH / spanY);
  const offX = (vp.width - spanX * scale) / 2;
  const offY = (vp.height - spanY * scale) / 2;
  return {
    scale,
    toScreen(x: number, y: number): [number, number] {
      return [
        offX + (x - workspace.min[0]) * scale,
        offY + (workspace.max[1] - y) * scale,
      ];
    },
  };
}

export const STATUS_COLORS: Record<ObjectStatus, string> = {
  on_table: "#7f95ad",
  held: "#e8a33d",
  in_bin: "#4caf6e",
  dropped: "#d9534f",
};

export function statusColor(status: ObjectStatus): string {
  return STATUS_COLORS[status] ?? "#888888";
}

export const PAD_GLYPHS: Record<PadState, string> = {
  positive: "+",
  neutral: "·",
  negative: "−",
};

export const PAD_COLORS: Record<PadState, string> = {
  positive: "#e8a33d",
  neutral: "#9aa7b4",
  negative: "#4c8caf",
};

export interface BeliefRow {
  label: string;
  p: number;
}

/** Belief entries sorted most-probable first, with display labels. */
export function beliefRows(entries: BeliefEntry[], limit = 8): BeliefRow[] {
  return entries
    .map(([id, tag, p]): BeliefRow => ({ label: `${id} · ${tag}`, p }))
    .sort((a, b) => b.p - a.p)
    .slice(0, limit);
}

export function formatResult(r: EpisodeResult): string {
  const verdict = r.success ? "binned" : "failed";
  const what = r.target ?? "nothing grasped";
  const grasp = r.grasp_type_used ? ` via ${r.grasp_type_used}` : "";
  return (
    `${what} ${verdict}${grasp} — ${r.wall_steps} steps, ` +
    `${r.human_input_steps} inputs, ${r.trajectory_length.toFixed(2)} m`
  );
}

/** Vertical gauge fill fraction for the end-effector height readout. */
export function heightFraction(z: number, workspace: Box): number {
  const span = workspace.max[2] - workspace.min[2];
  if (span <= 0) return 0;
  const f = (z - workspace.min[2]) / span;
  return Math.min(1, Math.max(0, f));
}
