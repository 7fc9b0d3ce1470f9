"""Lattice A* planner over crane configuration space.

Nodes are integer coordinates on a per-DOF grid; edges move one active DOF
by one step and are feasible when both endpoints and the midpoint pass the
same per-state test the path checker uses. Costs are weighted step sizes,
the heuristic is the weighted Manhattan distance (admissible), and ties
break lexicographically by (f, h, coordinates) so runs are deterministic.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .capacity import LoadChart
from .clearance import ClearanceIndex
from .crane import CraneSpec, CraneState, DOF_NAMES
from .errors import NoPath, ParseError, SnapError
from .paths import LiftPath, evaluate_state
from .scene import LiftedModule, Scene

DEFAULT_ACTIVE = ("swing", "luff", "hoist")


@dataclass(frozen=True)
class LatticeSpec:
    """Planning grid: active DOFs, step sizes, cost weights, coordinate bounds.

    Bounds keep the search finite; DOFs without explicit bounds fall back
    to the crane's limit intervals, and unbounded angular DOFs to the
    start/goal window widened by pi on each side.
    """

    steps: dict[str, float]
    active: tuple[str, ...] = DEFAULT_ACTIVE
    weights: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.active:
            raise ParseError("at least one active DOF required")
        for dof in self.active:
            if dof not in DOF_NAMES:
                raise ParseError(f"unknown DOF {dof!r}")
            if self.steps.get(dof, 0.0) <= 0.0:
                raise ParseError(f"active DOF {dof!r} needs a positive step")
            if self.weights.get(dof, 1.0) < 0.0:
                raise ParseError(f"weight for {dof!r} must be >= 0")

    def weight(self, dof: str) -> float:
        return self.weights.get(dof, 1.0)

    @classmethod
    def from_json(cls, doc: dict) -> "LatticeSpec":
        steps = dict(doc.get("steps", {}))
        for key in list(steps):
            if key.endswith("_deg"):
                steps[key[:-4]] = math.radians(float(steps.pop(key)))
        bounds = {k: tuple(v) for k, v in doc.get("bounds", {}).items()}
        for key in list(bounds):
            if key.endswith("_deg"):
                lo, hi = bounds.pop(key)
                bounds[key[:-4]] = (math.radians(float(lo)), math.radians(float(hi)))
        return cls(
            steps={k: float(v) for k, v in steps.items()},
            active=tuple(doc.get("active", DEFAULT_ACTIVE)),
            weights={k: float(v) for k, v in doc.get("weights", {}).items()},
            bounds={k: (float(lo), float(hi)) for k, (lo, hi) in bounds.items()},
        )


def snap_to_lattice(state: CraneState, lattice: LatticeSpec) -> tuple[tuple[int, ...], float]:
    """Nearest lattice coordinates for the active DOFs and the snap distance.

    The grid is anchored at zero in every DOF; the snap distance is the
    euclidean norm of the per-DOF snap offsets.
    """
    coords = []
    err2 = 0.0
    for dof in lattice.active:
        step = lattice.steps[dof]
        c = round(state.get(dof) / step)
        err2 += (state.get(dof) - c * step) ** 2
        coords.append(int(c))
    return tuple(coords), math.sqrt(err2)


class _LatticeProblem:
    """Shared machinery for the A* planner and exhaustive oracle checks."""

    def __init__(
        self,
        scene: Scene,
        spec: CraneSpec,
        chart: LoadChart,
        module: LiftedModule,
        lattice: LatticeSpec,
        frozen: CraneState,
        index: ClearanceIndex,
        window: tuple[CraneState, ...] = (),
    ):
        self.scene = scene
        self.spec = spec
        self.chart = chart
        self.module = module
        self.lattice = lattice
        self.frozen = frozen
        self.index = index
        self._state_ok: dict[tuple[int, ...], bool] = {}
        self._mid_ok: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self.coord_bounds = self._coordinate_bounds(window or (frozen,))

    def _coordinate_bounds(self, window: tuple[CraneState, ...]) -> list[tuple[int, int]]:
        out = []
        for dof in self.lattice.active:
            step = self.lattice.steps[dof]
            if dof in self.lattice.bounds:
                lo, hi = self.lattice.bounds[dof]
            elif dof in ("tx", "ty", "luff", "hoist"):
                lo, hi = getattr(self.spec.limits, dof)
            else:
                # unbounded angular DOF: allow a half turn beyond the
                # start/goal window in either direction
                values = [s.get(dof) for s in window]
                lo, hi = min(values) - math.pi, max(values) + math.pi
            out.append((math.ceil(lo / step - 1e-9), math.floor(hi / step + 1e-9)))
        return out

    def state_of(self, coords: tuple[int, ...]) -> CraneState:
        values = {dof: self.frozen.get(dof) for dof in DOF_NAMES}
        for dof, c in zip(self.lattice.active, coords):
            values[dof] = c * self.lattice.steps[dof]
        return CraneState(**values)

    def in_bounds(self, coords: tuple[int, ...]) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(coords, self.coord_bounds))

    def _check(self, state: CraneState) -> bool:
        violations, _ = evaluate_state(
            self.scene, self.spec, self.chart, self.module, state, self.index
        )
        return not violations

    def node_ok(self, coords: tuple[int, ...]) -> bool:
        cached = self._state_ok.get(coords)
        if cached is None:
            cached = self._check(self.state_of(coords))
            self._state_ok[coords] = cached
        return cached

    def edge_ok(self, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        """Single-step edge feasibility: both endpoints plus the midpoint."""
        if not (self.in_bounds(b) and self.node_ok(a) and self.node_ok(b)):
            return False
        key = (a, b) if a <= b else (b, a)
        cached = self._mid_ok.get(key)
        if cached is None:
            sa = self.state_of(key[0])
            sb = self.state_of(key[1])
            mid = CraneState(
                **{
                    dof: 0.5 * (sa.get(dof) + sb.get(dof))
                    for dof in DOF_NAMES
                }
            )
            cached = self._check(mid)
            self._mid_ok[key] = cached
        return cached

    def neighbors(self, coords: tuple[int, ...]):
        for d in range(len(coords)):
            for sign in (1, -1):
                nxt = list(coords)
                nxt[d] += sign
                yield d, tuple(nxt)

    def step_cost(self, d: int) -> float:
        dof = self.lattice.active[d]
        return self.lattice.weight(dof) * self.lattice.steps[dof]

    def heuristic(self, coords: tuple[int, ...], goal: tuple[int, ...]) -> float:
        h = 0.0
        for d in range(len(coords)):
            h += abs(goal[d] - coords[d]) * self.step_cost(d)
        return h


def path_cost(path: LiftPath, lattice: LatticeSpec) -> float:
    """Canonical planner cost: per-DOF step counts times step costs, DOF order fixed."""
    counts = {dof: 0 for dof in lattice.active}
    for i in range(path.legs):
        a, b = path.waypoints[i], path.waypoints[i + 1]
        for dof in lattice.active:
            counts[dof] += round(abs(b.get(dof) - a.get(dof)) / lattice.steps[dof])
    total = 0.0
    for dof in lattice.active:
        total += counts[dof] * (lattice.weight(dof) * lattice.steps[dof])
    return total


def _compress(problem: _LatticeProblem, coords_path: list[tuple[int, ...]]) -> LiftPath:
    """Merge collinear single-DOF runs; wrapped DOFs split below a half turn."""
    states = [problem.state_of(c) for c in coords_path]
    if len(states) == 1:
        return LiftPath((states[0], states[0]))
    keep = [0]
    i = 1
    while i < len(states) - 1:
        prev = coords_path[keep[-1]]
        cur = coords_path[i]
        nxt = coords_path[i + 1]
        d_prev = [b - a for a, b in zip(prev, cur)]
        d_next = [b - a for a, b in zip(cur, nxt)]
        same_axis = False
        for d in range(len(cur)):
            if d_prev[d] != 0 and d_next[d] != 0 and (d_prev[d] > 0) == (d_next[d] > 0):
                others_prev = any(d_prev[k] != 0 for k in range(len(cur)) if k != d)
                others_next = any(d_next[k] != 0 for k in range(len(cur)) if k != d)
                if not others_prev and not others_next:
                    dof = problem.lattice.active[d]
                    run = abs(nxt[d] - prev[d]) * problem.lattice.steps[dof]
                    if dof not in ("heading", "swing") or run < math.pi - 1e-9:
                        same_axis = True
                break
        if same_axis:
            i += 1
            continue
        keep.append(i)
        i += 1
    keep.append(len(states) - 1)
    return LiftPath(tuple(states[k] for k in keep))


def plan_path(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    start: CraneState,
    goal: CraneState,
    lattice: LatticeSpec,
    module: LiftedModule | None = None,
    index: ClearanceIndex | None = None,
) -> LiftPath:
    """A* over the lattice; returns a cost-minimal path with merged waypoints.

    Raises SnapError when start/goal cannot sit on the lattice (inactive
    DOFs differing, or snap farther than half a step) and NoPath when the
    goal is unreachable within the lattice bounds.
    """
    module = module if module is not None else scene.module
    index = index if index is not None else ClearanceIndex(scene, spec, module)

    for dof in DOF_NAMES:
        if dof in lattice.active:
            continue
        if abs(start.get(dof) - goal.get(dof)) > 1e-9:
            raise SnapError(
                f"inactive DOF {dof!r} differs between start and goal; "
                "activate it or align the states"
            )

    start_coords, start_snap = snap_to_lattice(start, lattice)
    goal_coords, goal_snap = snap_to_lattice(goal, lattice)
    for label, coords, state, snap in (
        ("start", start_coords, start, start_snap),
        ("goal", goal_coords, goal, goal_snap),
    ):
        for dof, c in zip(lattice.active, coords):
            step = lattice.steps[dof]
            if abs(state.get(dof) - c * step) > 0.5 * step + 1e-9:
                raise SnapError(f"{label} {dof} farther than half a step from the lattice")

    problem = _LatticeProblem(
        scene, spec, chart, module, lattice, start, index, window=(start, goal)
    )
    if not problem.in_bounds(start_coords) or not problem.in_bounds(goal_coords):
        raise NoPath("start or goal outside lattice bounds")
    if not problem.node_ok(start_coords):
        raise NoPath("start state fails the per-state check")
    if not problem.node_ok(goal_coords):
        raise NoPath("goal state fails the per-state check")

    if start_coords == goal_coords:
        return LiftPath((problem.state_of(start_coords), problem.state_of(goal_coords)))

    open_heap: list[tuple[float, float, tuple[int, ...]]] = []
    g_cost: dict[tuple[int, ...], float] = {start_coords: 0.0}
    parent: dict[tuple[int, ...], tuple[int, ...]] = {}
    closed: set[tuple[int, ...]] = set()
    h0 = problem.heuristic(start_coords, goal_coords)
    heapq.heappush(open_heap, (h0, h0, start_coords))

    while open_heap:
        f, h, coords = heapq.heappop(open_heap)
        if coords in closed:
            continue
        closed.add(coords)
        if coords == goal_coords:
            chain = [coords]
            while chain[-1] in parent:
                chain.append(parent[chain[-1]])
            chain.reverse()
            return _compress(problem, chain)
        g = g_cost[coords]
        for d, nxt in problem.neighbors(coords):
            if nxt in closed or not problem.edge_ok(coords, nxt):
                continue
            cand = g + problem.step_cost(d)
            if cand < g_cost.get(nxt, math.inf):
                g_cost[nxt] = cand
                parent[nxt] = coords
                nh = problem.heuristic(nxt, goal_coords)
                heapq.heappush(open_heap, (cand + nh, nh, nxt))
    raise NoPath("goal unreachable in the explored lattice component")
