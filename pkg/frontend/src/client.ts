/** WebSocket client for the session server (via the NDJSON bridge).
 *
 * Pairs one input message to each received state frame: the server applies
 * an input to exactly one tick, so sending on frame arrival holds the rig's
 * motion exactly while a key is down, without flooding.
 */

import type { InputState } from "./input.js";
import {
  helloMessage,
  humanAction,
  parseFrame,
  resetMessage,
  type ServerFrame,
} from "./protocol.js";

export interface ClientOptions {
  controller?: string;
  scenario?: string;
  seed?: number;
}

export interface ClientEvents {
  onFrame(frame: ServerFrame): void;
  onStatus(text: string): void;
}

export class TeleopClient {
  private sock: WebSocket | null = null;

  constructor(
    private readonly input: InputState,
    private readonly events: ClientEvents,
  ) {}

  connect(url: string, opts: ClientOptions): void {
    this.close();
    this.events.onStatus(`connecting to ${url} …`);
    const sock = new WebSocket(url);
    this.sock = sock;
    sock.onopen = () => {
      this.events.onStatus("connected");
      if (opts.controller !== undefined || opts.scenario !== undefined) {
        sock.send(helloMessage(opts.controller, opts.scenario));
      }
      if (opts.seed !== undefined) {
        sock.send(resetMessage(opts.seed));
      }
    };
    sock.onmessage = (ev) => {
      let frame: ServerFrame;
      try {
        frame = parseFrame(String(ev.data));
      } catch (err) {
        this.events.onStatus(`dropped frame: ${(err as Error).message}`);
        return;
      }
      if (frame.type === "state_frame") {
        const { v, graspCmd } = this.input.take();
        if (v[0] !== 0 || v[1] !== 0 || v[2] !== 0 || graspCmd !== null) {
          sock.send(humanAction(v, graspCmd));
        }
      }
      this.events.onFrame(frame);
    };
    sock.onclose = () => {
      this.events.onStatus("disconnected");
      this.sock = null;
    };
    sock.onerror = () => {
      this.events.onStatus("socket error");
    };
  }

  reset(seed?: number): void {
    this.sock?.send(resetMessage(seed));
  }

  close(): void {
    this.sock?.close();
    this.sock = null;
  }

  get connected(): boolean {
    return this.sock !== null && this.sock.readyState === WebSocket.OPEN;
  }
}
