import { describe, expect, it } from "vitest";

import { InputState, PLANAR_SPEED, VERTICAL_SPEED, velocityFromKeys } from "../src/input.js";

describe("velocityFromKeys", () => {
  it("maps single planar keys at full speed", () => {
    expect(velocityFromKeys(new Set(["KeyW"]))).toEqual([0, PLANAR_SPEED, 0]);
    expect(velocityFromKeys(new Set(["KeyS"]))).toEqual([0, -PLANAR_SPEED, 0]);
    expect(velocityFromKeys(new Set(["KeyA"]))).toEqual([-PLANAR_SPEED, 0, 0]);
    expect(velocityFromKeys(new Set(["ArrowRight"]))).toEqual([PLANAR_SPEED, 0, 0]);
  });

  it("normalizes diagonals to the planar speed", () => {
    const [vx, vy] = velocityFromKeys(new Set(["KeyW", "KeyD"]));
    expect(Math.hypot(vx, vy)).toBeCloseTo(PLANAR_SPEED, 12);
    expect(vx).toBeCloseTo(vy, 12);
  });

  it("cancels opposing keys", () => {
    expect(velocityFromKeys(new Set(["KeyW", "KeyS"]))).toEqual([0, 0, 0]);
    expect(velocityFromKeys(new Set(["KeyA", "KeyD", "KeyR", "KeyF"]))).toEqual([0, 0, 0]);
  });

  it("moves vertically at the slower speed", () => {
    expect(velocityFromKeys(new Set(["KeyR"]))).toEqual([0, 0, VERTICAL_SPEED]);
    expect(velocityFromKeys(new Set(["KeyF"]))).toEqual([0, 0, -VERTICAL_SPEED]);
  });

  it("ignores unmapped keys", () => {
    expect(velocityFromKeys(new Set(["KeyQ", "Tab"]))).toEqual([0, 0, 0]);
  });
});

describe("InputState", () => {
  it("tracks held keys and reports handled ones", () => {
    const input = new InputState();
    expect(input.keyDown("KeyW")).toBe(true);
    expect(input.keyDown("KeyQ")).toBe(false);
    expect(input.take().v).toEqual([0, PLANAR_SPEED, 0]);
    input.keyUp("KeyW");
    expect(input.take().v).toEqual([0, 0, 0]);
  });

  it("queues a grasp command and consumes it once", () => {
    const input = new InputState();
    expect(input.keyDown("Space")).toBe(true);
    expect(input.take().graspCmd).toBe("pad_vacuum");
    expect(input.take().graspCmd).toBeNull();
  });

  it("keeps only the latest grasp command", () => {
    const input = new InputState();
    input.keyDown("KeyG");
    input.keyDown("KeyC");
    expect(input.take().graspCmd).toBe("close_rigid");
  });

  it("reports activity and clears on demand", () => {
    const input = new InputState();
    expect(input.active).toBe(false);
    input.keyDown("KeyD");
    expect(input.active).toBe(true);
    input.clear();
    expect(input.active).toBe(false);
    expect(input.take().v).toEqual([0, 0, 0]);
  });

  it("stays active while a grasp command is pending", () => {
    const input = new InputState();
    input.keyDown("KeyN");
    input.keyUp("KeyN");
    expect(input.active).toBe(true);
    input.take();
    expect(input.active).toBe(false);
  });
});
