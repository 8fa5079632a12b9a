/** WebSocket ⇄ TCP bridge for the session server.
 *
 * Browsers cannot open raw TCP sockets, so each WebSocket connection gets
 * its own TCP connection to the simulator — sessions stay isolated exactly
 * as they would for direct TCP clients.  WebSocket messages are forwarded
 * as NDJSON lines; NDJSON lines come back as one WebSocket message each.
 *
 * Usage: node dist/node/bridge/bridge.js [--listen 9801]
 *            [--tcp-host 127.0.0.1] [--tcp-port 8901]
 */

import net from "node:net";
import path from "node:path";
import process from "node:process";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";
import { WebSocketServer, type WebSocket } from "ws";

import { splitLines } from "./lines.js";

export interface BridgeOptions {
  listen: number;
  tcpHost: string;
  tcpPort: number;
}

export function startBridge(opts: BridgeOptions): WebSocketServer {
  const wss = new WebSocketServer({ host: "127.0.0.1", port: opts.listen });

  wss.on("connection", (ws: WebSocket) => {
    const tcp = net.connect(opts.tcpPort, opts.tcpHost);
    tcp.setNoDelay(true);
    let rest = "";

    tcp.on("data", (chunk: Buffer) => {
      const out = splitLines(rest, chunk.toString("utf8"));
      rest = out.rest;
      for (const line of out.lines) {
        if (ws.readyState === ws.OPEN) ws.send(line);
      }
    });
    tcp.on("close", () => ws.close());
    tcp.on("error", () => ws.close());

    ws.on("message", (data) => {
      tcp.write(data.toString() + "\n");
    });
    ws.on("close", () => tcp.destroy());
    ws.on("error", () => tcp.destroy());
  });

  return wss;
}

function main(): void {
  const { values } = parseArgs({
    options: {
      listen: { type: "string", default: "9801" },
      "tcp-host": { type: "string", default: "127.0.0.1" },
      "tcp-port": { type: "string", default: "8901" },
    },
  });
  const wss = startBridge({
    listen: Number(values.listen),
    tcpHost: values["tcp-host"] as string,
    tcpPort: Number(values["tcp-port"]),
  });
  wss.on("listening", () => {
    const addr = wss.address();
    const port = typeof addr === "object" && addr !== null ? addr.port : values.listen;
    // the integration harness parses this line to find the port
    console.log(`bridge listening on ${port}`);
  });
  const stop = () => {
    wss.close();
    process.exit(0);
  };
  process.on("SIGINT", stop);
  process.on("SIGTERM", stop);
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  fileURLToPath(import.meta.url) === path.resolve(process.argv[1]);
if (invokedDirectly) {
  main();
}
