"""Demo site content: a 300t-class crawler, a petrochemical-style yard, a chart.

The demo lift swings a 28 t pipe-rack module a quarter turn from its pick
position to a set pedestal, passing over a low tank and near a vessel.
`write_demo` materializes the files the CLI examples use.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .capacity import LoadChart
from .crane import CraneSpec, CraneState, load_crane_spec
from .geometry import Pose, box_mesh, cylinder_mesh, format_obj, paneled_box_mesh
from .paths import LiftPath
from .scene import ClearanceThresholds, LiftedModule, Obstacle, Scene

BOOM_LENGTH = 30.0
PIVOT_FORWARD = 2.0
PIVOT_HEIGHT = 1.5
LUFF_DEMO = math.pi / 3  # 60 deg working luff
TIP_Z = PIVOT_HEIGHT + BOOM_LENGTH * math.sin(LUFF_DEMO)
MODULE_HEIGHT = 3.0
RIGGING_LENGTH = 2.0


def demo_crane() -> CraneSpec:
    return load_crane_spec(demo_crane_document())


def demo_crane_document() -> dict:
    return {
        "name": "demo-crawler-300t",
        "boom_length": BOOM_LENGTH,
        "boom_pivot_forward": PIVOT_FORWARD,
        "boom_pivot_height": PIVOT_HEIGHT,
        "boom_radius": 0.35,
        "tailswing_radius": 4.5,
        "hook_block_weight_t": 1.5,
        "limits": {
            "tx": [-60.0, 60.0],
            "ty": [-60.0, 60.0],
            "luff_deg": [5.0, 88.0],
            "hoist": [2.0, 35.0],
        },
        "rates": {
            "travel": 0.5,
            "heading": 0.05,
            "swing": 0.08,
            "luff": 0.015,
            "hoist": 0.6,
        },
    }


def demo_chart() -> LoadChart:
    radii = [3.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 24.0, 28.0, 32.0]
    rated = [
        [170.0, 160.0, 140.0, 120.0, 100.0, 80.0, 60.0, 45.0, 34.0, 26.0, 20.0],
        [158.0, 150.0, 130.0, 110.0, 90.0, 70.0, 52.0, 39.0, 29.0, 22.0, 17.0],
    ]
    return LoadChart(np.array([30.0, 40.0]), np.array(radii), np.array(rated))


def demo_module() -> LiftedModule:
    # pipe-rack module, origin at the rigging attach point (top center)
    mesh = box_mesh((-3.0, -1.5, -MODULE_HEIGHT), (3.0, 1.5, 0.0))
    return LiftedModule(
        id="pr-module-7",
        mesh=mesh,
        weight=28.0,
        rigging_weight=1.5,
        rigging_length=RIGGING_LENGTH,
    )


def _hoist_for_bottom(bottom_z: float) -> float:
    """Hoist length putting the module underside at the given height."""
    hook_z = bottom_z + MODULE_HEIGHT + RIGGING_LENGTH
    return TIP_Z - hook_z


def demo_pick_state() -> CraneState:
    return CraneState(swing=0.0, luff=LUFF_DEMO, hoist=_hoist_for_bottom(0.2))


def demo_set_state() -> CraneState:
    return CraneState(swing=math.pi / 2, luff=LUFF_DEMO, hoist=_hoist_for_bottom(2.0))


def demo_scene() -> Scene:
    tank = Obstacle(
        id="tank-12",
        tag="tank",
        mesh=box_mesh((-2.0, -2.0, 0.0), (2.0, 2.0, 4.0)),
        pose=Pose((12.0, 12.0, 0.0)),
    )
    vessel = Obstacle(
        id="vessel-3",
        tag="vessel",
        mesh=cylinder_mesh(1.6, 8.0, segments=24),
        pose=Pose((12.0, 8.0, 0.0)),
    )
    piperack = Obstacle(
        id="piperack-A",
        tag="piperack",
        mesh=box_mesh((-4.0, -2.0, 0.0), (4.0, 2.0, 12.0)),
        pose=Pose((0.0, -14.0, 0.0)),
    )
    return Scene(
        ground_z=0.0,
        obstacles=(tank, vessel, piperack),
        module=demo_module(),
        crane_position=(0.0, 0.0, 0.0),
        pick_state=demo_pick_state(),
        set_state=demo_set_state(),
        module_yaw_offset=0.0,
        clearance=ClearanceThresholds(),
    )


def demo_path_ok() -> LiftPath:
    """Hoist up, swing the quarter turn clear of the tank, lower to set."""
    pick = demo_pick_state()
    set_ = demo_set_state()
    high = 12.0
    return LiftPath(
        (
            pick,
            CraneState(swing=0.0, luff=LUFF_DEMO, hoist=high),
            CraneState(swing=math.pi / 2, luff=LUFF_DEMO, hoist=high),
            set_,
        )
    )


def demo_path_blocked() -> LiftPath:
    """Direct pick-to-set swing that drags the module through the tank."""
    return LiftPath((demo_pick_state(), demo_set_state()))


def perf_scene(target_triangles: int = 50_000) -> Scene:
    """Dense scene for latency measurements: a ring of heavily paneled blocks."""
    base = demo_scene()
    per_box = max(1, target_triangles // 10)
    divisions = max(1, round(math.sqrt(per_box / 12)))
    obstacles = []
    rng_angles = np.linspace(0.0, 2.0 * math.pi, 10, endpoint=False)
    for i, ang in enumerate(rng_angles):
        r = 24.0 + 3.0 * ((i * 2654435761) % 7) / 7.0
        mesh = paneled_box_mesh((-2.5, -2.5, 0.0), (2.5, 2.5, 6.0 + (i % 3) * 2.0), divisions)
        obstacles.append(
            Obstacle(
                id=f"block-{i}",
                tag="block",
                mesh=mesh,
                pose=Pose((r * math.cos(ang), r * math.sin(ang), 0.0), yaw=float(ang)),
            )
        )
    return Scene(
        ground_z=base.ground_z,
        obstacles=tuple(obstacles),
        module=base.module,
        crane_position=base.crane_position,
        pick_state=base.pick_state,
        set_state=base.set_state,
        module_yaw_offset=base.module_yaw_offset,
        clearance=base.clearance,
    )


def demo_scene_document() -> dict:
    """Scene document with the module mesh referenced as an OBJ file."""
    from .scene import scene_to_document

    doc = scene_to_document(demo_scene())
    doc["module"]["mesh"] = {"obj": "meshes/module.obj"}
    return doc


def write_demo(directory) -> dict[str, Path]:
    """Write the demo scene/crane/chart/path files; returns the path map."""
    directory = Path(directory)
    (directory / "meshes").mkdir(parents=True, exist_ok=True)
    paths = {
        "scene": directory / "scene.json",
        "crane": directory / "crane.json",
        "chart": directory / "chart.csv",
        "path_ok": directory / "path_ok.json",
        "path_blocked": directory / "path_blocked.json",
    }
    module_obj = directory / "meshes" / "module.obj"
    module_obj.write_text(format_obj(demo_module().mesh), encoding="utf-8")
    paths["scene"].write_text(
        json.dumps(demo_scene_document(), indent=2), encoding="utf-8"
    )
    paths["crane"].write_text(
        json.dumps(demo_crane_document(), indent=2), encoding="utf-8"
    )
    paths["chart"].write_text(demo_chart().to_csv(), encoding="utf-8")
    paths["path_ok"].write_text(
        json.dumps(demo_path_ok().to_json(), indent=2), encoding="utf-8"
    )
    paths["path_blocked"].write_text(
        json.dumps(demo_path_blocked().to_json(), indent=2), encoding="utf-8"
    )
    return paths
