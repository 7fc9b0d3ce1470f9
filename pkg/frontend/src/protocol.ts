/** Wire protocol types mirroring the server's JSON payloads. */

export interface Envelope {
  type: string;
  session: string | null;
  seq: number;
  payload: any;
}

export interface CraneStateJson {
  tx: number;
  ty: number;
  heading: number;
  swing: number;
  luff: number;
  hoist: number;
}

export interface PoseJson {
  translation: [number, number, number];
  yaw: number;
}

export interface ComponentPosesJson {
  carrier: PoseJson;
  superstructure: PoseJson;
  boom_foot: [number, number, number];
  boom_tip: [number, number, number];
  hook: [number, number, number];
  module_pose: PoseJson;
  operating_radius: number;
}

export interface CapacityJson {
  rated_t: number | null;
  gross_t: number;
  usage_pct: number | null;
  out_of_chart: boolean;
}

export type ClearanceCode = "GREEN" | "YELLOW" | "RED";

export interface ClearanceJson {
  component: string;
  obstacle: string;
  distance_m: number;
  point_on_component: [number, number, number];
  point_on_obstacle: [number, number, number];
  code: ClearanceCode;
}

export interface FrameJson {
  tick: number;
  sim_time: number;
  state: CraneStateJson;
  poses: ComponentPosesJson;
  capacity: CapacityJson;
  clearances: ClearanceJson[];
  min_clearance: ClearanceJson | null;
  flags: string[];
}

export interface MeshJson {
  vertices: number[][];
  triangles: number[][];
}

export interface SceneJson {
  units: string;
  ground_z: number;
  crane_position: [number, number, number];
  obstacles: { id: string; tag: string; mesh: MeshJson; pose: PoseJson }[];
  module: { id: string; mesh: MeshJson; rigging_length_m: number };
  pick_state: CraneStateJson;
  set_state: CraneStateJson;
  clearance: { red_m: number; yellow_m: number };
}

export const DOF_NAMES = ["tx", "ty", "heading", "swing", "luff", "hoist"] as const;
export type DofName = (typeof DOF_NAMES)[number];

export type ControlFractions = Record<DofName, number>;

export function zeroControl(): ControlFractions {
  return { tx: 0, ty: 0, heading: 0, swing: 0, luff: 0, hoist: 0 };
}

/** Clamp every commanded fraction into [-1, 1]. */
export function clampControl(c: ControlFractions): ControlFractions {
  const out = zeroControl();
  for (const dof of DOF_NAMES) {
    const v = c[dof] ?? 0;
    out[dof] = Math.min(1, Math.max(-1, Number.isFinite(v) ? v : 0));
  }
  return out;
}

export function isFrame(msg: Envelope): boolean {
  return msg.type === "frame";
}
