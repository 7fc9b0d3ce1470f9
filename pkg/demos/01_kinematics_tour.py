"""Tour of the six-DOF crane model: forward kinematics, reach, inverse solves.

Run:  python demos/01_kinematics_tour.py
"""
import math

from liftsim import CraneState, forward_kinematics, operating_radius, solve_hook_ik
from liftsim.demo import demo_crane

crane = demo_crane()
print(f"crane: {crane.name}")
print(f"  boom {crane.boom_length} m, pivot +{crane.boom_pivot_forward} m / "
      f"{crane.boom_pivot_height} m, luff limits "
      f"{math.degrees(crane.limits.luff[0]):.0f}..{math.degrees(crane.limits.luff[1]):.0f} deg")
print(f"  reach: radius {crane.min_radius:.2f} .. {crane.max_radius:.2f} m\n")

# sweep the luffing angle and watch the hook travel
print("luff sweep at swing=0, hoist=10 m:")
print(f"{'luff':>6} {'radius':>8} {'tip z':>8} {'hook z':>8}")
for luff_deg in (80, 70, 60, 50, 40, 30):
    state = CraneState(luff=math.radians(luff_deg), hoist=10.0)
    poses = forward_kinematics(crane, state)
    print(f"{luff_deg:>5}° {poses.operating_radius:>8.2f} "
          f"{poses.boom_tip[2]:>8.2f} {poses.hook[2]:>8.2f}")

# the same pose reached by swinging the carrier instead of the superstructure
a = forward_kinematics(crane, CraneState(heading=0.0, swing=1.1, luff=1.0, hoist=8.0))
b = forward_kinematics(crane, CraneState(heading=1.1, swing=0.0, luff=1.0, hoist=8.0))
print(f"\nswing/heading compose: hook {a.hook.round(6)} == {b.hook.round(6)}")

# place the hook exactly above a target point
target = (14.0, 9.0, 12.0)
state = solve_hook_ik(crane, 0.0, 0.0, 0.0, target)
hook = forward_kinematics(crane, state).hook
print(f"\nIK to {target}:")
print(f"  swing {math.degrees(state.swing):.2f} deg, "
      f"luff {math.degrees(state.luff):.2f} deg, hoist {state.hoist:.2f} m")
print(f"  FK check: hook at {tuple(round(float(v), 6) for v in hook)}")
print(f"  radius {operating_radius(crane, state):.3f} m")
