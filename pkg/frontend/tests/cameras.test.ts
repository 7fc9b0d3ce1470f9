// Camera preset contracts, checked against a real engine replay fixture.
import { describe, expect, it } from "vitest";

import {
  cameraForPreset,
  isOrthographic,
  projectToNdc,
  SceneInfo,
  viewDirection,
} from "../src/cameras.js";
import { FrameJson } from "../src/protocol.js";

import fixture from "./fixtures/swing_replay.json";

const frames = fixture.frames as FrameJson[];
const info: SceneInfo = {
  center: [0, 0, 0],
  radius: 45,
  signalmanPost: [6, 22, 0],
};

describe("plan preset", () => {
  it("is orthographic and looks straight down", () => {
    const camera = cameraForPreset("plan", frames[0], info);
    expect(isOrthographic(camera)).toBe(true);
    const dir = viewDirection(camera);
    expect(dir.x).toBeCloseTo(0, 9);
    expect(dir.y).toBeCloseTo(0, 9);
    expect(dir.z).toBeCloseTo(-1, 9);
  });

  it("keeps the whole site inside the frustum", () => {
    const camera = cameraForPreset("plan", frames[0], info, 1.0);
    for (const corner of [
      [info.radius, 0, 0],
      [-info.radius, 0, 0],
      [0, info.radius, 0],
      [0, -info.radius, 0],
    ]) {
      const ndc = projectToNdc(camera, corner);
      expect(Math.abs(ndc.x)).toBeLessThanOrEqual(1);
      expect(Math.abs(ndc.y)).toBeLessThanOrEqual(1);
    }
  });
});

describe("follow preset", () => {
  it("keeps the module inside the central 20% across the swing replay", () => {
    for (const frame of frames) {
      const camera = cameraForPreset("follow", frame, info);
      const ndc = projectToNdc(camera, frame.poses.module_pose.translation);
      expect(Math.abs(ndc.x)).toBeLessThanOrEqual(0.2);
      expect(Math.abs(ndc.y)).toBeLessThanOrEqual(0.2);
      expect(ndc.z).toBeLessThan(1); // in front of the camera
    }
  });
});

describe("operator preset", () => {
  it("rides on the superstructure and faces the hook", () => {
    for (const frame of [frames[0], frames[Math.floor(frames.length / 2)], frames.at(-1)!]) {
      const camera = cameraForPreset("operator", frame, info);
      const pose = frame.poses.superstructure;
      // cab offset rotates with facing: the camera stays a fixed distance
      // from the slew axis
      const dx = camera.position.x - pose.translation[0];
      const dy = camera.position.y - pose.translation[1];
      expect(Math.hypot(dx, dy)).toBeCloseTo(Math.hypot(2.2, 1.6), 6);
      const ndc = projectToNdc(camera, frame.poses.hook);
      expect(Math.abs(ndc.x)).toBeLessThan(0.05); // hook centered in view
      expect(Math.abs(ndc.y)).toBeLessThan(0.05);
    }
  });
});

describe("signalman preset", () => {
  it("stands at the post and tracks the module", () => {
    const camera = cameraForPreset("signalman", frames[10], info);
    expect(camera.position.x).toBeCloseTo(info.signalmanPost[0]);
    expect(camera.position.y).toBeCloseTo(info.signalmanPost[1]);
    expect(camera.position.z).toBeCloseTo(1.7);
    const ndc = projectToNdc(camera, frames[10].poses.module_pose.translation);
    expect(Math.abs(ndc.x)).toBeLessThan(0.05);
    expect(Math.abs(ndc.y)).toBeLessThan(0.05);
  });
});

describe("bird preset", () => {
  it("is perspective and sees the crane position", () => {
    const camera = cameraForPreset("bird", frames[0], info);
    expect(isOrthographic(camera)).toBe(false);
    const ndc = projectToNdc(camera, info.center);
    expect(Math.abs(ndc.x)).toBeLessThan(0.05);
    expect(Math.abs(ndc.y)).toBeLessThan(0.05);
  });
});
