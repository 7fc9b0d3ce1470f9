"""Exact clearance queries: distances, witnesses, and color coding.

Run:  python demos/03_clearance_queries.py
"""
import math

from liftsim import build_index, forward_kinematics, min_distance
from liftsim.clearance import ClearanceIndex, clearance_report
from liftsim.demo import demo_crane, demo_scene
from liftsim.geometry import Pose, box_mesh

# standalone mesh-to-mesh query with witness points
a = build_index(box_mesh((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5)))
b = build_index(box_mesh((4.0, -1.0, -1.0), (6.0, 1.0, 1.0)))
d, (wa, wb) = min_distance(a, b)
print(f"two boxes: distance {d} m, witnesses {wa} -> {wb}")

# the same query with one box rotated in place
d_rot, _ = min_distance(a, b, pose_b=Pose((0, 0, 0), yaw=math.radians(30)))
print(f"rotated:   distance {d_rot:.4f} m\n")

# full report for the demo lift at its pick state
scene = demo_scene()
crane = demo_crane()
poses = forward_kinematics(
    crane, scene.pick_state,
    ground_z=scene.ground_z,
    rigging_length=scene.module.rigging_length,
)
index = ClearanceIndex(scene, crane)
records = clearance_report(scene, crane, poses, index=index)
print(f"clearance report at pick ({len(records)} pairs, "
      f"red<{scene.clearance.red_below} m, yellow<{scene.clearance.yellow_below} m):")
print(f"{'component':>15} {'obstacle':>12} {'distance':>9} code")
for rec in records:
    print(f"{rec.component:>15} {rec.obstacle:>12} {rec.distance:>8.2f}m {rec.code}")
