/** Canvas renderer: top-down table view plus gripper detail. */

import type { BeliefFrame, StateFrame } from "./protocol.js";
import {
  beliefRows,
  heightFraction,
  makeProjection,
  PAD_COLORS,
  PAD_GLYPHS,
  statusColor,
  type Viewport,
} from "./view.js";

const TABLE_BG = "#1d232a";
const GRID = "#2a323c";
const BIN_FILL = "rgba(76, 175, 110, 0.15)";
const BIN_EDGE = "#4caf6e";
const EE_COLOR = "#e8edf2";

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  frame: StateFrame,
  vp: Viewport,
): void {
  const proj = makeProjection(frame.workspace, vp);
  ctx.clearRect(0, 0, vp.width, vp.height);

  // table
  const [x0, y0] = proj.toScreen(frame.workspace.min[0], frame.workspace.max[1]);
  const [x1, y1] = proj.toScreen(frame.workspace.max[0], frame.workspace.min[1]);
  ctx.fillStyle = TABLE_BG;
  ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
  ctx.strokeStyle = GRID;
  ctx.lineWidth = 1;
  for (let gx = Math.ceil(frame.workspace.min[0] / 0.1) * 0.1; gx < frame.workspace.max[0]; gx += 0.1) {
    const [sx] = proj.toScreen(gx, 0);
    ctx.beginPath();
    ctx.moveTo(sx, y0);
    ctx.lineTo(sx, y1);
    ctx.stroke();
  }
  for (let gy = Math.ceil(frame.workspace.min[1] / 0.1) * 0.1; gy < frame.workspace.max[1]; gy += 0.1) {
    const [, sy] = proj.toScreen(0, gy);
    ctx.beginPath();
    ctx.moveTo(x0, sy);
    ctx.lineTo(x1, sy);
    ctx.stroke();
  }

  // bin
  const [bx0, by0] = proj.toScreen(frame.bin.min[0], frame.bin.max[1]);
  const [bx1, by1] = proj.toScreen(frame.bin.max[0], frame.bin.min[1]);
  ctx.fillStyle = BIN_FILL;
  ctx.fillRect(bx0, by0, bx1 - bx0, by1 - by0);
  ctx.strokeStyle = BIN_EDGE;
  ctx.strokeRect(bx0, by0, bx1 - bx0, by1 - by0);
  ctx.fillStyle = BIN_EDGE;
  ctx.font = "11px system-ui, sans-serif";
  ctx.fillText("bin", bx0 + 4, by0 + 13);

  // objects
  ctx.textAlign = "center";
  for (const obj of frame.objects) {
    const [sx, sy] = proj.toScreen(obj.position[0], obj.position[1]);
    const r = Math.max(obj.contact_radius * proj.scale, 3);
    ctx.beginPath();
    ctx.arc(sx, sy, r, 0, 2 * Math.PI);
    ctx.fillStyle = statusColor(obj.status);
    ctx.fill();
    ctx.fillStyle = "#c8d2dc";
    ctx.font = "10px system-ui, sans-serif";
    ctx.fillText(obj.id, sx, sy - r - 3);
  }
  ctx.textAlign = "left";

  // gripper: jaw ticks around the pose, pads at their offsets
  const g = frame.gripper;
  const [gx, gy] = proj.toScreen(g.pose[0], g.pose[1]);
  const half = (g.aperture / 2) * proj.scale;
  ctx.strokeStyle = EE_COLOR;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(gx - half, gy - 7);
  ctx.lineTo(gx - half, gy + 7);
  ctx.moveTo(gx + half, gy - 7);
  ctx.lineTo(gx + half, gy + 7);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(gx - 5, gy);
  ctx.lineTo(gx + 5, gy);
  ctx.moveTo(gx, gy - 5);
  ctx.lineTo(gx, gy + 5);
  ctx.stroke();

  g.pads.forEach((state, i) => {
    const off = g.pad_offsets[i];
    if (!off) return;
    const [px, py] = proj.toScreen(g.pose[0] + off[0], g.pose[1] + off[1]);
    ctx.beginPath();
    ctx.arc(px, py, 7, 0, 2 * Math.PI);
    ctx.strokeStyle = PAD_COLORS[state];
    ctx.lineWidth = 2;
    ctx.stroke();
    ctx.fillStyle = PAD_COLORS[state];
    ctx.font = "bold 11px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(PAD_GLYPHS[state], px, py + 4);
    ctx.textAlign = "left";
  });

  // height gauge along the right edge
  const frac = heightFraction(frame.ee_pose[2], frame.workspace);
  const gaugeH = vp.height - 2 * vp.margin;
  ctx.strokeStyle = GRID;
  ctx.strokeRect(vp.width - 14, vp.margin, 8, gaugeH);
  ctx.fillStyle = EE_COLOR;
  ctx.fillRect(vp.width - 14, vp.margin + (1 - frac) * gaugeH, 8, 3);

  // HUD
  ctx.fillStyle = "#9aa7b4";
  ctx.font = "12px system-ui, sans-serif";
  const held = frame.held.map((h) => `${h.object_id} (${h.grasp})`).join(", ");
  ctx.fillText(
    `t=${frame.time.toFixed(2)}s  z=${frame.ee_pose[2].toFixed(3)}m` +
      (held ? `  holding: ${held}` : ""),
    vp.margin,
    16,
  );
}

/** Rebuild the belief side panel as horizontal probability bars. */
export function renderBeliefPanel(panel: HTMLElement, frame: BeliefFrame | null): void {
  panel.replaceChildren();
  if (!frame) {
    return;
  }
  for (const row of beliefRows(frame.entries)) {
    const line = document.createElement("div");
    line.className = "belief-row";
    const label = document.createElement("span");
    label.className = "belief-label";
    label.textContent = row.label;
    const track = document.createElement("div");
    track.className = "belief-track";
    const fill = document.createElement("div");
    fill.className = "belief-fill";
    fill.style.width = `${(row.p * 100).toFixed(1)}%`;
    track.appendChild(fill);
    const pct = document.createElement("span");
    pct.className = "belief-pct";
    pct.textContent = `${(row.p * 100).toFixed(1)}%`;
    line.append(label, track, pct);
    panel.appendChild(line);
  }
}
