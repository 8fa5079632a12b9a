/** Keyboard state → per-tick commands.
 *
 * Planar drive on WASD/arrows, vertical on R/F.  Grasp keys queue a one-shot
 * command that rides along with the next paired input (the server applies
 * each input to exactly one tick, so both sides agree on consume-once).
 */

import type { GraspCmd, Vec3 } from "./protocol.js";

export const PLANAR_SPEED = 0.25; // m/s, the rig's speed limit
export const VERTICAL_SPEED = 0.15; // m/s, keeps carried loads inside hold margins

const PLANAR: Record<string, [number, number]> = {
  KeyW: [0, 1],
  ArrowUp: [0, 1],
  KeyS: [0, -1],
  ArrowDown: [0, -1],
  KeyA: [-1, 0],
  ArrowLeft: [-1, 0],
  KeyD: [1, 0],
  ArrowRight: [1, 0],
};

const VERTICAL: Record<string, number> = {
  KeyR: 1,
  KeyF: -1,
};

export const GRASP_KEYS: Record<string, GraspCmd> = {
  Space: "pad_vacuum",
  KeyG: "pad_inflate",
  KeyN: "pad_neutral",
  KeyC: "close_rigid",
  KeyO: "open_rigid",
};

/** Velocity for a set of currently-held key codes; opposing keys cancel. */
export function velocityFromKeys(down: ReadonlySet<string>): Vec3 {
  let x = 0;
  let y = 0;
  let z = 0;
  for (const code of down) {
    const planar = PLANAR[code];
    if (planar) {
      x += planar[0];
      y += planar[1];
    }
    const vertical = VERTICAL[code];
    if (vertical !== undefined) z += vertical;
  }
  const norm = Math.hypot(x, y);
  if (norm > 0) {
    x = (x / norm) * PLANAR_SPEED;
    y = (y / norm) * PLANAR_SPEED;
  }
  return [x, y, Math.sign(z) * VERTICAL_SPEED];
}

export class InputState {
  private down = new Set<string>();
  private queuedGrasp: GraspCmd | null = null;

  keyDown(code: string): boolean {
    const grasp = GRASP_KEYS[code];
    if (grasp) {
      this.queuedGrasp = grasp;
      return true;
    }
    if (code in PLANAR || code in VERTICAL) {
      this.down.add(code);
      return true;
    }
    return false;
  }

  keyUp(code: string): void {
    this.down.delete(code);
  }

  clear(): void {
    this.down.clear();
    this.queuedGrasp = null;
  }

  /** Snapshot for one tick; the queued grasp command is consumed. */
  take(): { v: Vec3; graspCmd: GraspCmd | null } {
    const cmd = this.queuedGrasp;
    this.queuedGrasp = null;
    return { v: velocityFromKeys(this.down), graspCmd: cmd };
  }

  get active(): boolean {
    const [x, y, z] = velocityFromKeys(this.down);
    return x !== 0 || y !== 0 || z !== 0 || this.queuedGrasp !== null;
  }
}
