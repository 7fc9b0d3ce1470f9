/** Browser entry point: connect, join, render, drive. */
import * as THREE from "three";

import { cameraForPreset, PresetName, PRESETS, SceneInfo } from "./cameras.js";
import { SessionClient } from "./client.js";
import { buildHudSkeleton, hudModel, renderHud } from "./hud.js";
import { InputLoop } from "./input.js";
import { FrameJson, SceneJson } from "./protocol.js";
import { LiftScene } from "./scene3d.js";

function banner(text: string, isError = false): void {
  const el = document.getElementById("banner")!;
  el.textContent = text;
  el.dataset.error = isError ? "yes" : "no";
  el.style.display = text ? "block" : "none";
}

async function start(): Promise<void> {
  const url = `ws://${location.host}/ws`;
  const client = new SessionClient(url);
  try {
    await client.connect();
  } catch (err) {
    banner(`cannot reach ${url} — is \`liftsim serve\` running?`, true);
    return;
  }
  await client.hello();

  const sceneMsg = await client.requestScene();
  const sceneDoc = sceneMsg.payload.scene as SceneJson;
  const craneDoc = sceneMsg.payload.crane;

  const params = new URLSearchParams(location.search);
  let sessionId = params.get("session");
  if (!sessionId) {
    sessionId = await client.createSession();
  }
  const role = await client.joinOrWatch(sessionId);
  banner(role === "driver" ? "" : "watching (driver seat taken)");

  const renderer = new THREE.WebGLRenderer({
    canvas: document.getElementById("view") as HTMLCanvasElement,
    antialias: true,
  });
  renderer.setSize(window.innerWidth, window.innerHeight);

  const lift = new LiftScene(sceneDoc, craneDoc);
  const info: SceneInfo = {
    center: sceneDoc.crane_position,
    radius: 45,
    signalmanPost: [
      sceneDoc.crane_position[0] + 6,
      sceneDoc.crane_position[1] + 22,
      sceneDoc.ground_z,
    ],
  };

  const hud = buildHudSkeleton(document);
  document.body.appendChild(hud);
  const presetLabel = document.getElementById("preset")!;

  let preset: PresetName = "bird";
  let lastFrame: FrameJson | null = null;

  client.onFrame = (frame) => {
    lastFrame = frame;
    lift.applyFrame(frame);
    renderHud(hud, hudModel(frame));
  };
  client.onDisconnect = () => banner("connection lost", true);

  window.addEventListener("keydown", (ev) => {
    const index = Number(ev.key) - 1;
    if (index >= 0 && index < PRESETS.length) {
      preset = PRESETS[index];
      presetLabel.textContent = `camera: ${preset} (keys 1-${PRESETS.length})`;
    }
  });
  presetLabel.textContent = `camera: ${preset} (keys 1-${PRESETS.length})`;

  if (role === "driver") {
    const loop = new InputLoop((control) => client.sendControl(control));
    loop.start(window);
  }

  const aspect = () => window.innerWidth / window.innerHeight;
  window.addEventListener("resize", () =>
    renderer.setSize(window.innerWidth, window.innerHeight)
  );

  const render = () => {
    if (lastFrame) {
      const camera = cameraForPreset(preset, lastFrame, info, aspect());
      renderer.render(lift.scene, camera);
    }
    requestAnimationFrame(render);
  };
  requestAnimationFrame(render);
}

start();
