/** Camera presets reproducing the named planning viewpoints.
 *
 * All presets are pure functions of the latest frame plus static scene
 * info; world frame is Z-up, so cameras use +Z as their up vector.
 */
import * as THREE from "three";

import { FrameJson } from "./protocol.js";

export type PresetName = "operator" | "signalman" | "bird" | "plan" | "follow";

export const PRESETS: PresetName[] = ["operator", "signalman", "bird", "plan", "follow"];

export interface SceneInfo {
  /** Center of interest, typically the crane position. */
  center: [number, number, number];
  /** Rough site radius in meters, for framing. */
  radius: number;
  /** Where the signalman stands (near the set location). */
  signalmanPost: [number, number, number];
}

const CAB_OFFSET = new THREE.Vector3(2.2, -1.6, 3.4); // in the superstructure frame
const FOLLOW_OFFSET = new THREE.Vector3(-10.0, 0.0, 7.0); // behind the load, facing frame
const EYE_HEIGHT = 1.7;

function vec(p: ArrayLike<number>): THREE.Vector3 {
  return new THREE.Vector3(p[0], p[1], p[2]);
}

function modulePosition(frame: FrameJson): THREE.Vector3 {
  return vec(frame.poses.module_pose.translation);
}

function lookAtZUp(camera: THREE.Camera, eye: THREE.Vector3, target: THREE.Vector3): void {
  camera.up.set(0, 0, 1);
  camera.position.copy(eye);
  camera.lookAt(target);
  camera.updateMatrixWorld(true);
}

export function cameraForPreset(
  name: PresetName,
  frame: FrameJson,
  info: SceneInfo,
  aspect = 16 / 9
): THREE.Camera {
  if (name === "plan") {
    // orthographic top-down
    const half = info.radius * 1.1;
    const camera = new THREE.OrthographicCamera(
      -half * aspect, half * aspect, half, -half, 0.1, 500
    );
    const eye = vec(info.center).add(new THREE.Vector3(0, 0, 120));
    // look straight down with north (+y) up the screen
    camera.up.set(0, 1, 0);
    camera.position.copy(eye);
    camera.lookAt(vec(info.center));
    camera.updateMatrixWorld(true);
    camera.updateProjectionMatrix();
    return camera;
  }

  const camera = new THREE.PerspectiveCamera(55, aspect, 0.1, 1000);
  if (name === "bird") {
    const r = info.radius;
    const eye = vec(info.center).add(new THREE.Vector3(0.9 * r, -0.9 * r, 0.9 * r));
    lookAtZUp(camera, eye, vec(info.center));
  } else if (name === "operator") {
    // anchored to the cab on the superstructure, watching the hook
    const pose = frame.poses.superstructure;
    const yaw = pose.yaw;
    const local = CAB_OFFSET.clone();
    const eye = new THREE.Vector3(
      pose.translation[0] + local.x * Math.cos(yaw) - local.y * Math.sin(yaw),
      pose.translation[1] + local.x * Math.sin(yaw) + local.y * Math.cos(yaw),
      pose.translation[2] + local.z
    );
    lookAtZUp(camera, eye, vec(frame.poses.hook));
  } else if (name === "signalman") {
    const eye = vec(info.signalmanPost);
    eye.z += EYE_HEIGHT;
    lookAtZUp(camera, eye, modulePosition(frame));
  } else {
    // follow: ride behind the load, tracking it
    const target = modulePosition(frame);
    const yaw = frame.poses.module_pose.yaw;
    const eye = new THREE.Vector3(
      target.x + FOLLOW_OFFSET.x * Math.cos(yaw) - FOLLOW_OFFSET.y * Math.sin(yaw),
      target.y + FOLLOW_OFFSET.x * Math.sin(yaw) + FOLLOW_OFFSET.y * Math.cos(yaw),
      target.z + FOLLOW_OFFSET.z
    );
    lookAtZUp(camera, eye, target);
  }
  camera.updateProjectionMatrix();
  return camera;
}

/** Normalized device coordinates of a world point under the camera. */
export function projectToNdc(
  camera: THREE.Camera,
  point: ArrayLike<number>
): { x: number; y: number; z: number } {
  const p = vec(point).project(camera);
  return { x: p.x, y: p.y, z: p.z };
}

export function isOrthographic(camera: THREE.Camera): boolean {
  return (camera as THREE.OrthographicCamera).isOrthographicCamera === true;
}

/** World-space view direction (unit vector) of a camera. */
export function viewDirection(camera: THREE.Camera): THREE.Vector3 {
  const dir = new THREE.Vector3();
  camera.getWorldDirection(dir);
  return dir;
}
