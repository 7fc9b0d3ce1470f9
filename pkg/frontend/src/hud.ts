/** Telemetry HUD: every displayed number and color is a pure function of
 * the last accepted frame; nothing is recomputed client-side.
 */
import { FrameJson } from "./protocol.js";

export type HudColor = "green" | "yellow" | "red";

export interface HudModel {
  tick: number;
  simTime: string;
  usageText: string;
  usageColor: HudColor;
  usageFraction: number; // gauge fill, 0..1
  clearanceText: string;
  clearanceColor: HudColor;
  clearancePair: string;
  flags: string[];
  dofs: { label: string; value: string }[];
}

const CODE_COLORS: Record<string, HudColor> = {
  GREEN: "green",
  YELLOW: "yellow",
  RED: "red",
};

function usageColor(pct: number | null, outOfChart: boolean): HudColor {
  if (outOfChart || pct === null || pct >= 100) {
    return "red";
  }
  return pct < 90 ? "green" : "yellow";
}

const DEG = 180 / Math.PI;

export function hudModel(frame: FrameJson): HudModel {
  const cap = frame.capacity;
  const pct = cap.usage_pct;
  const min = frame.min_clearance;
  return {
    tick: frame.tick,
    simTime: `${frame.sim_time.toFixed(2)} s`,
    usageText: cap.out_of_chart || pct === null ? "OFF CHART" : `${pct.toFixed(1)}%`,
    usageColor: usageColor(pct, cap.out_of_chart),
    usageFraction: pct === null ? 1 : Math.min(pct / 100, 1),
    clearanceText: min ? `${min.distance_m.toFixed(2)} m` : "—",
    clearanceColor: min ? CODE_COLORS[min.code] : "green",
    clearancePair: min ? `${min.component} ↔ ${min.obstacle}` : "no obstacles",
    flags: [...frame.flags],
    dofs: [
      { label: "travel x", value: `${frame.state.tx.toFixed(2)} m` },
      { label: "travel y", value: `${frame.state.ty.toFixed(2)} m` },
      { label: "heading", value: `${(frame.state.heading * DEG).toFixed(1)}°` },
      { label: "swing", value: `${(frame.state.swing * DEG).toFixed(1)}°` },
      { label: "luff", value: `${(frame.state.luff * DEG).toFixed(1)}°` },
      { label: "hoist", value: `${frame.state.hoist.toFixed(2)} m` },
      { label: "radius", value: `${frame.poses.operating_radius.toFixed(2)} m` },
    ],
  };
}

/** Idempotent DOM update; elements are addressed by data-hud attributes. */
export function renderHud(root: HTMLElement, model: HudModel): void {
  const set = (sel: string, text: string, color?: HudColor) => {
    const el = root.querySelector(`[data-hud="${sel}"]`) as HTMLElement | null;
    if (!el) {
      return;
    }
    el.textContent = text;
    if (color) {
      el.dataset.color = color;
    }
  };
  set("tick", `#${model.tick}`);
  set("time", model.simTime);
  set("usage", model.usageText, model.usageColor);
  set("clearance", model.clearanceText, model.clearanceColor);
  set("clearance-pair", model.clearancePair);

  const gauge = root.querySelector('[data-hud="usage-gauge"]') as HTMLElement | null;
  if (gauge) {
    gauge.style.width = `${(model.usageFraction * 100).toFixed(1)}%`;
    gauge.dataset.color = model.usageColor;
  }

  const flagsEl = root.querySelector('[data-hud="flags"]') as HTMLElement | null;
  if (flagsEl) {
    flagsEl.textContent = "";
    for (const flag of model.flags) {
      const badge = root.ownerDocument.createElement("span");
      badge.className = "badge";
      badge.dataset.flag = flag;
      badge.textContent = flag;
      flagsEl.appendChild(badge);
    }
  }

  const dofsEl = root.querySelector('[data-hud="dofs"]') as HTMLElement | null;
  if (dofsEl) {
    dofsEl.textContent = "";
    for (const dof of model.dofs) {
      const row = root.ownerDocument.createElement("div");
      row.className = "dof-row";
      row.textContent = `${dof.label}: ${dof.value}`;
      dofsEl.appendChild(row);
    }
  }
}

export function buildHudSkeleton(doc: Document): HTMLElement {
  const root = doc.createElement("div");
  root.id = "hud";
  root.innerHTML = `
    <div class="row"><span data-hud="tick"></span> <span data-hud="time"></span></div>
    <div class="row">capacity <span data-hud="usage"></span>
      <div class="gauge"><div data-hud="usage-gauge"></div></div></div>
    <div class="row">clearance <span data-hud="clearance"></span>
      <span data-hud="clearance-pair" class="pair"></span></div>
    <div class="row" data-hud="flags"></div>
    <div class="col" data-hud="dofs"></div>`;
  return root;
}
