/** Three.js scene graph for the site and crane, updated from telemetry.
 *
 * Geometry comes from the scene document; per-frame updates only move
 * objects to the poses the engine computed. Clearance leader lines are
 * drawn for the top-k records carried by each frame.
 */
import * as THREE from "three";

import { ClearanceJson, FrameJson, MeshJson, PoseJson, SceneJson } from "./protocol.js";

const COLORS: Record<string, number> = {
  GREEN: 0x3ecf6b,
  YELLOW: 0xf5c542,
  RED: 0xe84545,
};

function bufferGeometry(mesh: MeshJson): THREE.BufferGeometry {
  const geometry = new THREE.BufferGeometry();
  const positions = new Float32Array(mesh.vertices.flat());
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geometry.setIndex(mesh.triangles.flat());
  geometry.computeVertexNormals();
  return geometry;
}

function applyPose(object: THREE.Object3D, pose: PoseJson): void {
  object.position.set(...pose.translation);
  object.rotation.set(0, 0, pose.yaw);
}

export class LiftScene {
  readonly scene = new THREE.Scene();
  private boom: THREE.Mesh;
  private loadLine: THREE.Line;
  private hook: THREE.Mesh;
  private moduleMesh: THREE.Mesh;
  private carrier: THREE.Object3D;
  private superstructure: THREE.Object3D;
  private leaders = new THREE.Group();

  constructor(doc: SceneJson, craneDoc: { carrier_mesh: MeshJson; superstructure_mesh: MeshJson; boom_radius: number }) {
    this.scene.background = new THREE.Color(0x10141c);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    const sun = new THREE.DirectionalLight(0xffffff, 1.1);
    sun.position.set(40, -25, 60);
    this.scene.add(sun);

    const ground = new THREE.Mesh(
      new THREE.CircleGeometry(80, 48),
      new THREE.MeshLambertMaterial({ color: 0x22262e })
    );
    ground.position.z = doc.ground_z - 0.02;
    this.scene.add(ground);
    const grid = new THREE.GridHelper(120, 24, 0x556070, 0x39414d);
    grid.rotation.x = Math.PI / 2; // grid is XZ by default; our ground is XY
    grid.position.z = doc.ground_z;
    this.scene.add(grid);

    for (const obstacle of doc.obstacles) {
      const mesh = new THREE.Mesh(
        bufferGeometry(obstacle.mesh),
        new THREE.MeshLambertMaterial({ color: 0x7c8aa0 })
      );
      applyPose(mesh, obstacle.pose);
      mesh.name = `obstacle:${obstacle.id}`;
      this.scene.add(mesh);
    }

    this.carrier = new THREE.Mesh(
      bufferGeometry(craneDoc.carrier_mesh),
      new THREE.MeshLambertMaterial({ color: 0xc8b25a })
    );
    this.superstructure = new THREE.Mesh(
      bufferGeometry(craneDoc.superstructure_mesh),
      new THREE.MeshLambertMaterial({ color: 0xd9c16a })
    );
    this.scene.add(this.carrier, this.superstructure);

    // unit cylinder along +Z, scaled/rotated to span foot->tip each frame
    this.boom = new THREE.Mesh(
      new THREE.CylinderGeometry(craneDoc.boom_radius, craneDoc.boom_radius, 1, 12),
      new THREE.MeshLambertMaterial({ color: 0xe0cf7d })
    );
    this.boom.geometry.rotateX(Math.PI / 2);
    this.scene.add(this.boom);

    this.loadLine = new THREE.Line(
      new THREE.BufferGeometry().setAttribute(
        "position",
        new THREE.BufferAttribute(new Float32Array(6), 3)
      ),
      new THREE.LineBasicMaterial({ color: 0xdddddd })
    );
    this.scene.add(this.loadLine);

    this.hook = new THREE.Mesh(
      new THREE.SphereGeometry(0.35, 12, 8),
      new THREE.MeshLambertMaterial({ color: 0xcccccc })
    );
    this.scene.add(this.hook);

    this.moduleMesh = new THREE.Mesh(
      bufferGeometry(doc.module.mesh),
      new THREE.MeshLambertMaterial({ color: 0x5aa0c8 })
    );
    this.scene.add(this.moduleMesh);
    this.scene.add(this.leaders);
  }

  applyFrame(frame: FrameJson): void {
    applyPose(this.carrier, frame.poses.carrier);
    applyPose(this.superstructure, frame.poses.superstructure);
    applyPose(this.moduleMesh, frame.poses.module_pose);

    const foot = new THREE.Vector3(...frame.poses.boom_foot);
    const tip = new THREE.Vector3(...frame.poses.boom_tip);
    const mid = foot.clone().add(tip).multiplyScalar(0.5);
    this.boom.position.copy(mid);
    this.boom.scale.set(1, 1, foot.distanceTo(tip));
    this.boom.lookAt(tip);

    const hook = new THREE.Vector3(...frame.poses.hook);
    this.hook.position.copy(hook);
    const line = this.loadLine.geometry.getAttribute("position") as THREE.BufferAttribute;
    line.setXYZ(0, tip.x, tip.y, tip.z);
    line.setXYZ(1, hook.x, hook.y, hook.z);
    line.needsUpdate = true;

    this.updateLeaders(frame.clearances);
  }

  private updateLeaders(records: ClearanceJson[]): void {
    this.leaders.clear();
    for (const record of records) {
      const geometry = new THREE.BufferGeometry().setFromPoints([
        new THREE.Vector3(...record.point_on_component),
        new THREE.Vector3(...record.point_on_obstacle),
      ]);
      const line = new THREE.Line(
        geometry,
        new THREE.LineBasicMaterial({ color: COLORS[record.code] ?? COLORS.GREEN })
      );
      line.name = `leader:${record.component}:${record.obstacle}:${record.code}`;
      this.leaders.add(line);
    }
  }

  get leaderLines(): THREE.Object3D[] {
    return [...this.leaders.children];
  }
}
