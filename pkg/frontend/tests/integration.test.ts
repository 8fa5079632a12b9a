/** End-to-end: compiled bridge + real simulator server + WebSocket client.
 *
 * Spawns `python3 -m riso_sim.cli serve` on an ephemeral TCP port and the
 * built bridge in front of it, then drives everything through the same
 * protocol helpers the browser UI uses.  Requires `npm run build` first
 * (the bridge runs from dist/) and the simulator package installed.
 */

import { type ChildProcess, spawn } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import type { Readable } from "node:stream";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import {
  helloMessage,
  humanAction,
  parseFrame,
  resetMessage,
  type ServerFrame,
  type StateFrame,
} from "../src/protocol.js";

const FRONTEND_ROOT = fileURLToPath(new URL("..", import.meta.url));
const REPO_ROOT = path.resolve(FRONTEND_ROOT, "..");
const BRIDGE_JS = path.join(FRONTEND_ROOT, "dist", "node", "bridge", "bridge.js");
const DT = 0.05;

const SCENARIO = {
  objects: [
    {
      id: "chip",
      position: [0.12, 0.0],
      mass_kg: 0.02,
      height_m: 0.012,
      contact_radius_m: 0.01,
      curvature_per_m: 0.0,
      roughness_spacing_m: "smooth",
      porosity: 0.0,
    },
  ],
  bin: { min: [0.3, -0.1, 0.0], max: [0.45, 0.1, 0.15] },
  gripper: { n_pads: 1, pinch_force_n: 60.0, max_aperture_m: 0.08 },
};

function waitForLine(stream: Readable, re: RegExp, what: string): Promise<RegExpMatchArray> {
  return new Promise((resolve, reject) => {
    let buf = "";
    const timer = setTimeout(
      () => reject(new Error(`timed out waiting for ${what}; got: ${buf}`)),
      20_000,
    );
    stream.on("data", (chunk: Buffer) => {
      buf += chunk.toString("utf8");
      const m = buf.match(re);
      if (m) {
        clearTimeout(timer);
        resolve(m);
      }
    });
    stream.on("end", () => reject(new Error(`stream ended waiting for ${what}; got: ${buf}`)));
  });
}

/** Promise-queue wrapper so tests can await frames one at a time. */
class WsClient {
  private queue: ServerFrame[] = [];
  private waiters: Array<(f: ServerFrame) => void> = [];

  private constructor(private ws: WebSocket) {}

  static connect(port: number): Promise<WsClient> {
    return new Promise((resolve, reject) => {
      const ws = new WebSocket(`ws://127.0.0.1:${port}`);
      const client = new WsClient(ws);
      ws.on("open", () => resolve(client));
      ws.on("error", reject);
      ws.on("message", (data) => {
        const frame = parseFrame(data.toString());
        const waiter = client.waiters.shift();
        if (waiter) waiter(frame);
        else client.queue.push(frame);
      });
    });
  }

  recv(timeoutMs = 10_000): Promise<ServerFrame> {
    const queued = this.queue.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("timed out waiting for a frame")), timeoutMs);
      this.waiters.push((f) => {
        clearTimeout(timer);
        resolve(f);
      });
    });
  }

  async recvType<T extends ServerFrame["type"]>(
    type: T,
    timeoutMs = 10_000,
  ): Promise<Extract<ServerFrame, { type: T }>> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const frame = await this.recv(Math.max(1, deadline - Date.now()));
      if (frame.type === type) return frame as Extract<ServerFrame, { type: T }>;
    }
  }

  send(text: string): void {
    this.ws.send(text);
  }

  close(): void {
    this.ws.close();
  }
}

let tmpDir: string;
let pyProc: ChildProcess;
let bridgeProc: ChildProcess;
let wsPort: number;

beforeAll(async () => {
  expect(fs.existsSync(BRIDGE_JS), `missing ${BRIDGE_JS} — run \`npm run build\` first`).toBe(true);
  tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "riso-ui-"));
  const scenarioPath = path.join(tmpDir, "one_chip.json");
  fs.writeFileSync(scenarioPath, JSON.stringify(SCENARIO));

  pyProc = spawn(
    "python3",
    ["-m", "riso_sim.cli", "serve", "--port", "0", "--scenario", scenarioPath, "--controller", "shared"],
    { cwd: REPO_ROOT, env: { ...process.env, RISO_SIM_LOG: "INFO" }, stdio: ["ignore", "pipe", "pipe"] },
  );
  const served = await waitForLine(
    pyProc.stderr as Readable,
    /listening on 127\.0\.0\.1:(\d+)/,
    "simulator port",
  );
  const tcpPort = Number(served[1]);

  bridgeProc = spawn("node", [BRIDGE_JS, "--listen", "0", "--tcp-port", String(tcpPort)], {
    cwd: FRONTEND_ROOT,
    stdio: ["ignore", "pipe", "pipe"],
  });
  const bridged = await waitForLine(
    bridgeProc.stdout as Readable,
    /bridge listening on (\d+)/,
    "bridge port",
  );
  wsPort = Number(bridged[1]);
}, 60_000);

afterAll(() => {
  bridgeProc?.kill("SIGTERM");
  pyProc?.kill("SIGTERM");
  if (tmpDir) fs.rmSync(tmpDir, { recursive: true, force: true });
});

describe("bridge + simulator", () => {
  it("streams state frames at the simulator tick rate with paired beliefs", async () => {
    const c = await WsClient.connect(wsPort);
    const times: number[] = [];
    let beliefs = 0;
    const t0 = Date.now();
    while (times.length < 25) {
      const frame = await c.recv();
      if (frame.type === "state_frame") times.push(frame.time);
      else if (frame.type === "belief_frame") {
        beliefs += 1;
        const total = frame.entries.reduce((acc, [, , p]) => acc + p, 0);
        expect(total).toBeCloseTo(1, 9);
      }
    }
    const elapsed = (Date.now() - t0) / 1000;
    c.close();

    for (let i = 1; i < times.length; i++) {
      expect(times[i]! - times[i - 1]!).toBeCloseTo(DT, 9);
    }
    // default controller is shared, so every tick carries a belief frame
    expect(beliefs).toBeGreaterThanOrEqual(times.length - 1);
    // wall pacing sanity: 24 intervals of 50 ms, with wide headroom for CI
    expect(elapsed).toBeGreaterThan(0.6);
    expect(elapsed).toBeLessThan(6);
  }, 30_000);

  it("applies each input to exactly one tick, promptly", async () => {
    const c = await WsClient.connect(wsPort);
    c.send(helloMessage("human"));
    let frame = await c.recvType("state_frame");
    const latencies: number[] = [];
    let moves = 0;
    const probes = 10;
    for (let i = 0; i < probes; i++) {
      const xBefore = frame.ee_pose[0];
      const sent = Date.now();
      c.send(humanAction([0.25, 0, 0]));
      // the very next ticks: exactly one should show the displacement
      let seen = 0;
      for (let j = 0; j < 5; j++) {
        frame = await c.recvType("state_frame");
        if (Math.abs(frame.ee_pose[0] - xBefore - 0.25 * DT) < 1e-9 && seen === 0) {
          latencies.push(Date.now() - sent);
          seen = 1;
        }
      }
      expect(frame.ee_pose[0]).toBeCloseTo(xBefore + 0.25 * DT, 9);
      moves += seen;
    }
    c.close();
    expect(moves).toBe(probes);
    const mean = latencies.reduce((a, b) => a + b, 0) / latencies.length;
    console.log(`input→frame latency: mean ${mean.toFixed(1)} ms over ${probes} probes`);
    expect(mean).toBeLessThan(150);
    expect(Math.max(...latencies)).toBeLessThan(1000);
  }, 30_000);

  it("keeps concurrent sessions isolated", async () => {
    const a = await WsClient.connect(wsPort);
    a.send(helloMessage("human"));
    await a.recvType("state_frame");
    for (let i = 0; i < 5; i++) {
      a.send(humanAction([0.25, 0, 0]));
      await a.recvType("state_frame");
    }
    const b = await WsClient.connect(wsPort);
    b.send(helloMessage("human"));
    // skip frames already in flight from before the hello reset the session
    let frame = await b.recvType("state_frame");
    for (let i = 0; i < 20 && Math.abs(frame.ee_pose[0] - 0.05) > 1e-12; i++) {
      frame = await b.recvType("state_frame");
    }
    const t0 = frame.time;
    for (let i = 1; i <= 3; i++) {
      frame = await b.recvType("state_frame");
      expect(frame.ee_pose).toEqual([0.05, 0, 0.18]);
      expect(frame.time).toBeCloseTo(t0 + i * DT, 9);
    }
    const aNow = await a.recvType("state_frame");
    expect(aNow.ee_pose[0]).toBeCloseTo(0.05 + 5 * 0.25 * DT, 9);
    a.close();
    b.close();
  }, 30_000);

  it("completes a teleoperated pick-and-place, then resets", async () => {
    const c = await WsClient.connect(wsPort);
    c.send(helloMessage("human"));
    const deadline = Date.now() + 90_000;
    let result: Extract<ServerFrame, { type: "episode_end" }>["result"] | null = null;
    let inputsSent = 0;

    while (Date.now() < deadline) {
      const msg = await c.recv();
      if (msg.type === "episode_end") {
        result = msg.result;
        break;
      }
      if (msg.type !== "state_frame") continue;
      const ee = msg.ee_pose;
      const chip = msg.objects[0] as StateFrame["objects"][number];
      const off = msg.gripper.pad_offsets[0] as [number, number, number];
      if (msg.held.length === 0) {
        if (chip.status !== "on_table") continue; // settling after release
        const goal = [
          chip.position[0] - off[0],
          chip.position[1] - off[1],
          chip.height - off[2],
        ];
        const disp = [goal[0]! - ee[0], goal[1]! - ee[1], goal[2]! - ee[2]] as const;
        if (Math.hypot(...disp) < 0.0015) {
          c.send(humanAction([0, 0, 0], "pad_vacuum"));
        } else {
          c.send(humanAction([3 * disp[0], 3 * disp[1], 3 * disp[2]]));
        }
        inputsSent += 1;
      } else {
        const binC = [
          (msg.bin.min[0] + msg.bin.max[0]) / 2,
          (msg.bin.min[1] + msg.bin.max[1]) / 2,
        ];
        const dx = binC[0]! - chip.position[0];
        const dy = binC[1]! - chip.position[1];
        if (Math.hypot(dx, dy) < 0.02) {
          c.send(humanAction([0, 0, 0], "pad_inflate"));
        } else if (ee[2] < 0.15) {
          c.send(humanAction([0, 0, 0.25]));
        } else {
          c.send(humanAction([3 * dx, 3 * dy, 0]));
        }
        inputsSent += 1;
      }
    }

    expect(result, "episode did not finish before the deadline").not.toBeNull();
    expect(result!.success).toBe(true);
    expect(result!.target).toBe("chip");
    expect(result!.grasp_type_used).toBe("soft0");
    expect(result!.human_input_steps).toBeGreaterThan(0);
    expect(inputsSent).toBeGreaterThan(0);

    // after the episode the stream goes quiet; reset brings it back from t=DT
    c.send(resetMessage());
    const fresh = await c.recvType("state_frame");
    expect(fresh.time).toBeCloseTo(DT, 9);
    expect(fresh.ee_pose).toEqual([0.05, 0, 0.18]);
    expect(fresh.objects[0]?.status).toBe("on_table");
    c.close();
  }, 120_000);
});
