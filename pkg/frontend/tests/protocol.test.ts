import { describe, expect, it } from "vitest";

import {
  GRASP_CMDS,
  helloMessage,
  humanAction,
  parseFrame,
  resetMessage,
  type StateFrame,
} from "../src/protocol.js";

const STATE = {
  type: "state_frame",
  time: 0.05,
  ee_pose: [0.05, 0, 0.18],
  gripper: {
    aperture: 0.08,
    max_aperture: 0.08,
    pads: ["neutral"],
    pose: [0.05, 0, 0.18],
    pad_offsets: [[0.03, 0, 0]],
  },
  objects: [
    {
      id: "chip",
      position: [0.12, 0, 0],
      status: "on_table",
      contact_radius: 0.01,
      height: 0.012,
      mass: 0.02,
    },
  ],
  held: [],
  bin: { min: [0.3, -0.1, 0], max: [0.45, 0.1, 0.15] },
  workspace: { min: [-0.6, -0.45, 0], max: [0.6, 0.45, 0.4] },
};

describe("parseFrame", () => {
  it("accepts a state frame", () => {
    const frame = parseFrame(JSON.stringify(STATE)) as StateFrame;
    expect(frame.type).toBe("state_frame");
    expect(frame.objects[0]?.id).toBe("chip");
    expect(frame.gripper.pads).toEqual(["neutral"]);
  });

  it("accepts belief, episode_end and error frames", () => {
    expect(
      parseFrame(JSON.stringify({ type: "belief_frame", entries: [["chip", "soft0", 1]] })).type,
    ).toBe("belief_frame");
    expect(
      parseFrame(
        JSON.stringify({
          type: "episode_end",
          result: {
            success: true,
            human_input_steps: 3,
            trajectory_length: 1.2,
            wall_steps: 100,
            grasp_type_used: "soft0",
            target: "chip",
          },
        }),
      ).type,
    ).toBe("episode_end");
    expect(parseFrame('{"type":"error","code":"bad_json","detail":"x"}').type).toBe("error");
  });

  it("rejects garbage", () => {
    expect(() => parseFrame("{nope")).toThrow(/not JSON/);
    expect(() => parseFrame('"just a string"')).toThrow(/not an object/);
    expect(() => parseFrame('{"type":"mystery"}')).toThrow(/unknown type/);
    expect(() => parseFrame('{"type":"state_frame"}')).toThrow(/without time/);
    expect(() => parseFrame('{"type":"episode_end","result":{}}')).toThrow(/without result/);
  });
});

describe("client messages", () => {
  it("omits zero velocity components", () => {
    expect(JSON.parse(humanAction([0, 0, 0]))).toEqual({ type: "human_action" });
    expect(JSON.parse(humanAction([0.25, 0, -0.15]))).toEqual({
      type: "human_action",
      vx: 0.25,
      vz: -0.15,
    });
  });

  it("carries a grasp command", () => {
    for (const cmd of GRASP_CMDS) {
      expect(JSON.parse(humanAction([0, 0, 0], cmd))).toEqual({
        type: "human_action",
        grasp_cmd: cmd,
      });
    }
  });

  it("builds hello and reset", () => {
    expect(JSON.parse(helloMessage("shared", "household15"))).toEqual({
      type: "hello",
      controller: "shared",
      scenario: "household15",
    });
    expect(JSON.parse(helloMessage())).toEqual({ type: "hello" });
    expect(JSON.parse(resetMessage(7))).toEqual({ type: "reset", seed: 7 });
    expect(JSON.parse(resetMessage())).toEqual({ type: "reset" });
  });
});
