/** Wire types for the session server's newline-delimited JSON protocol.
 *
 * Mirrors docs/protocol.md in the simulator package.  Parsing is defensive:
 * anything that does not carry a known `type` discriminant with the expected
 * core fields throws, so a malformed frame never reaches the renderer.
 */

export type Vec3 = [number, number, number];

export type PadState = "positive" | "neutral" | "negative";

export type ObjectStatus = "on_table" | "held" | "in_bin" | "dropped";

export type GraspCmd =
  | "pad_vacuum"
  | "pad_inflate"
  | "pad_neutral"
  | "close_rigid"
  | "open_rigid";

export const GRASP_CMDS: readonly GraspCmd[] = [
  "pad_vacuum",
  "pad_inflate",
  "pad_neutral",
  "close_rigid",
  "open_rigid",
];

export interface Box {
  min: Vec3;
  max: Vec3;
}

export interface GripperView {
  aperture: number;
  max_aperture: number;
  pads: PadState[];
  pose: Vec3;
  pad_offsets: Vec3[];
}

export interface ObjectView {
  id: string;
  position: Vec3;
  status: ObjectStatus;
  contact_radius: number;
  height: number;
  mass: number;
}

export interface HeldView {
  object_id: string;
  grasp: string;
}

export interface StateFrame {
  type: "state_frame";
  time: number;
  ee_pose: Vec3;
  gripper: GripperView;
  objects: ObjectView[];
  held: HeldView[];
  bin: Box;
  workspace: Box;
}

/** [object id, grasp tag, probability] */
export type BeliefEntry = [string, string, number];

export interface BeliefFrame {
  type: "belief_frame";
  entries: BeliefEntry[];
}

export interface EpisodeResult {
  success: boolean;
  human_input_steps: number;
  trajectory_length: number;
  wall_steps: number;
  grasp_type_used: string | null;
  target: string | null;
}

export interface EpisodeEnd {
  type: "episode_end";
  result: EpisodeResult;
}

export interface ErrorFrame {
  type: "error";
  code: string;
  detail: string;
}

export type ServerFrame = StateFrame | BeliefFrame | EpisodeEnd | ErrorFrame;

function isVec3(v: unknown): v is Vec3 {
  return Array.isArray(v) && v.length === 3 && v.every((c) => typeof c === "number");
}

function fail(why: string): never {
  throw new Error(`bad frame: ${why}`);
}

/** Parse one line from the server; throws on anything unrecognizable. */
export function parseFrame(text: string): ServerFrame {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    fail("not JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    fail("not an object");
  }
  const frame = raw as Record<string, unknown>;
  switch (frame.type) {
    case "state_frame": {
      if (typeof frame.time !== "number") fail("state_frame without time");
      if (!isVec3(frame.ee_pose)) fail("state_frame without ee_pose");
      if (!Array.isArray(frame.objects)) fail("state_frame without objects");
      if (typeof frame.gripper !== "object" || frame.gripper === null) {
        fail("state_frame without gripper");
      }
      return frame as unknown as StateFrame;
    }
    case "belief_frame": {
      if (!Array.isArray(frame.entries)) fail("belief_frame without entries");
      return frame as unknown as BeliefFrame;
    }
    case "episode_end": {
      const r = frame.result as Record<string, unknown> | undefined;
      if (typeof r !== "object" || r === null || typeof r.success !== "boolean") {
        fail("episode_end without result");
      }
      return frame as unknown as EpisodeEnd;
    }
    case "error": {
      if (typeof frame.code !== "string") fail("error frame without code");
      return frame as unknown as ErrorFrame;
    }
    default:
      fail(`unknown type ${String(frame.type)}`);
  }
}

/** One tick's worth of input.  Zeroes are omitted to keep frames small. */
export function humanAction(v: Vec3, graspCmd: GraspCmd | null = null): string {
  const msg: Record<string, unknown> = { type: "human_action" };
  if (v[0] !== 0) msg.vx = v[0];
  if (v[1] !== 0) msg.vy = v[1];
  if (v[2] !== 0) msg.vz = v[2];
  if (graspCmd !== null) msg.grasp_cmd = graspCmd;
  return JSON.stringify(msg);
}

export function helloMessage(controller?: string, scenario?: string): string {
  const msg: Record<string, unknown> = { type: "hello" };
  if (controller !== undefined) msg.controller = controller;
  if (scenario !== undefined) msg.scenario = scenario;
  return JSON.stringify(msg);
}

export function resetMessage(seed?: number): string {
  const msg: Record<string, unknown> = { type: "reset" };
  if (seed !== undefined) msg.seed = seed;
  return JSON.stringify(msg);
}
