"""Load-chart lookups and live capacity usage across the working range.

Run:  python demos/02_capacity_and_charts.py
"""
import math

from liftsim import CraneState, capacity_usage, rated_capacity
from liftsim.capacity import gross_load
from liftsim.demo import demo_chart, demo_crane, demo_module

chart = demo_chart()
crane = demo_crane()
module = demo_module()

print("chart axes:")
print(f"  boom lengths: {chart.boom_lengths.tolist()} m")
print(f"  radii:        {chart.radii.tolist()} m")

print("\nbilinear lookups (boom 30 m):")
for radius in (10.0, 11.0, 17.0, 23.5, 30.0):
    print(f"  radius {radius:>5.1f} m -> rated {rated_capacity(chart, 30.0, radius):7.2f} t")
print(f"  between boom rows: (35 m, 11 m) -> {rated_capacity(chart, 35.0, 11.0):.1f} t")

print(f"\nmodule {module.id}: {module.weight} t + rigging {module.rigging_weight} t"
      f" + block {crane.hook_block_weight} t = gross {gross_load(module, crane):.1f} t")

print("\nusage vs luffing angle (hoist 10 m):")
print(f"{'luff':>6} {'radius':>8} {'rated':>8} {'usage':>8}")
for luff_deg in range(85, 24, -5):
    state = CraneState(luff=math.radians(luff_deg), hoist=10.0)
    result = capacity_usage(chart, crane, state, module)
    bar = "#" * int(result.usage / 4)
    print(f"{luff_deg:>5}° {2 + 30 * math.cos(state.luff):>8.2f} "
          f"{result.rated:>8.2f} {result.usage:>7.1f}% {bar}")
