/** Entry point: wires keyboard, canvas, belief panel, and the client.
 *
 * Query parameters:
 *   ?ws=localhost:9801       bridge address (default shown)
 *   &controller=shared       autonomous | human | shared
 *   &scenario=household15    bundled name (a server-side path also works)
 *   &seed=0                  episode seed
 */

import { TeleopClient } from "./client.js";
import { InputState } from "./input.js";
import type { BeliefFrame, StateFrame } from "./protocol.js";
import { drawFrame, renderBeliefPanel } from "./render.js";
import { formatResult } from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("table");
const ctx = canvas.getContext("2d");
if (!ctx) throw new Error("no 2d context");
const beliefPanel = el<HTMLDivElement>("belief");
const statusLine = el<HTMLDivElement>("status");
const banner = el<HTMLDivElement>("banner");
const resetButton = el<HTMLButtonElement>("reset");

const params = new URLSearchParams(location.search);
const wsAddr = params.get("ws") ?? "localhost:9801";
const controller = params.get("controller") ?? "shared";
const scenario = params.get("scenario") ?? undefined;
const seedParam = params.get("seed");
const seed = seedParam === null ? undefined : Number(seedParam);

const input = new InputState();
let lastBelief: BeliefFrame | null = null;

const client = new TeleopClient(input, {
  onStatus(text) {
    statusLine.textContent = `${text} — controller: ${controller}`;
  },
  onFrame(frame) {
    switch (frame.type) {
      case "state_frame":
        drawFrame(ctx, frame as StateFrame, {
          width: canvas.width,
          height: canvas.height,
          margin: 24,
        });
        break;
      case "belief_frame":
        lastBelief = frame;
        renderBeliefPanel(beliefPanel, lastBelief);
        break;
      case "episode_end":
        banner.textContent = formatResult(frame.result);
        banner.className = frame.result.success ? "banner ok" : "banner bad";
        break;
      case "error":
        statusLine.textContent = `server: ${frame.code} — ${frame.detail}`;
        break;
    }
  },
});

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  if (input.keyDown(ev.code)) ev.preventDefault();
});
window.addEventListener("keyup", (ev) => input.keyUp(ev.code));
window.addEventListener("blur", () => input.clear());

resetButton.addEventListener("click", () => {
  banner.textContent = "";
  banner.className = "banner";
  lastBelief = null;
  renderBeliefPanel(beliefPanel, null);
  client.reset(seed);
});

client.connect(`ws://${wsAddr}`, { controller, scenario, seed });
