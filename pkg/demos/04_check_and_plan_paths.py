"""Checking lift paths for violations and planning around obstacles.

Run:  python demos/04_check_and_plan_paths.py
"""
import math

from liftsim import LatticeSpec, check_path, plan_path
from liftsim.demo import demo_chart, demo_crane, demo_path_blocked, demo_path_ok, demo_scene
from liftsim.planner import path_cost

scene = demo_scene()
crane = demo_crane()
chart = demo_chart()

print("checking the engineered lift path (hoist up, swing, lower):")
result = check_path(scene, crane, chart, demo_path_ok())
print(f"  valid={result.valid}, violations={len(result.violations)}, "
      f"warnings={len(result.warnings)}")

print("\nchecking the naive direct swing:")
result = check_path(scene, crane, chart, demo_path_blocked())
print(f"  valid={result.valid}")
for v in result.violations[:3]:
    print(f"  leg {v.leg} u={v.u:.3f} {v.kind}: {v.detail}")
print(f"  ... {len(result.violations)} violations total")

print("\nplanning pick -> set on a (swing, luff, hoist) lattice:")
lattice = LatticeSpec(
    steps={"swing": math.radians(5), "luff": math.radians(2), "hoist": 1.0}
)
path = plan_path(scene, crane, chart, scene.pick_state, scene.set_state, lattice)
print(f"  {len(path.waypoints)} waypoints, cost {path_cost(path, lattice):.3f}")
for w in path.waypoints:
    print(f"  swing {math.degrees(w.swing):7.2f} deg  "
          f"luff {math.degrees(w.luff):6.2f} deg  hoist {w.hoist:6.2f} m")
check = check_path(scene, crane, chart, path)
print(f"  planned path re-checks valid={check.valid}")
