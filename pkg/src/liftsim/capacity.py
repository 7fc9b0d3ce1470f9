"""Load-chart lookup and capacity usage.

Charts are a rated-capacity grid over (boom length, operating radius).
Lookups interpolate bilinearly between grid points, which is smoother than
the stepwise floor a certified chart would use; results are planning aids,
not certified ratings.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfChart, ParseError

CSV_HEADER = "radius_m"


@dataclass(frozen=True)
class LoadChart:
    """Rated capacities rated[i][j] (tonnes) at boom_lengths[i], radii[j]; NaN = not rated."""

    boom_lengths: np.ndarray
    radii: np.ndarray
    rated: np.ndarray

    def __post_init__(self):
        lengths = np.asarray(self.boom_lengths, dtype=np.float64)
        radii = np.asarray(self.radii, dtype=np.float64)
        rated = np.asarray(self.rated, dtype=np.float64)
        object.__setattr__(self, "boom_lengths", lengths)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "rated", rated)
        if lengths.ndim != 1 or radii.ndim != 1 or len(lengths) < 1 or len(radii) < 2:
            raise ParseError("chart needs >=1 boom length and >=2 radii")
        if rated.shape != (len(lengths), len(radii)):
            raise ParseError("rated grid shape does not match axis lists")
        if np.any(np.diff(lengths) <= 0) or np.any(np.diff(radii) <= 0):
            raise ParseError("chart axes must be strictly ascending")
        if np.any(rated[np.isfinite(rated)] <= 0):
            raise ParseError("rated capacities must be positive")
        for i, row in enumerate(rated):
            vals = row[np.isfinite(row)]
            if np.any(np.diff(vals) > 0):
                raise ParseError(
                    f"rated capacity must be non-increasing in radius (boom {lengths[i]} m)"
                )

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "," + ",".join(repr(float(r)) for r in self.radii) + "\n")
        for length, row in zip(self.boom_lengths, self.rated):
            cells = ["" if not math.isfinite(v) else repr(float(v)) for v in row]
            out.write(repr(float(length)) + "," + ",".join(cells) + "\n")
        return out.getvalue()


def load_chart_csv(source) -> LoadChart:
    """Parse a load chart CSV: header row `radius_m,<radii...>`, one row per boom length."""
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty chart file")
    header = [c.strip() for c in lines[0].split(",")]
    if header[0] != CSV_HEADER:
        raise ParseError(f"chart header must start with '{CSV_HEADER}', got {header[0]!r}")
    try:
        radii = [float(c) for c in header[1:]]
    except ValueError as exc:
        raise ParseError(f"bad radius in chart header: {exc}") from exc
    lengths = []
    grid = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != len(radii) + 1:
            raise ParseError(f"chart row has {len(cells) - 1} cells, expected {len(radii)}")
        try:
            lengths.append(float(cells[0]))
            grid.append([float(c) if c else math.nan for c in cells[1:]])
        except ValueError as exc:
            raise ParseError(f"bad chart cell: {exc}") from exc
    return LoadChart(np.array(lengths), np.array(radii), np.array(grid))


def _axis_cell(axis: np.ndarray, value: float, name: str) -> tuple[int, float]:
    """Index i and weight u with axis[i] <= value <= axis[i+1]; u in [0,1]."""
    if value < axis[0] or value > axis[-1]:
        raise OutOfChart(f"{name} {value:g} outside chart range [{axis[0]:g}, {axis[-1]:g}]")
    if len(axis) == 1:
        return 0, 0.0
    i = int(np.searchsorted(axis, value, side="right")) - 1
    if i >= len(axis) - 1:
        i = len(axis) - 2
    u = (value - axis[i]) / (axis[i + 1] - axis[i])
    return i, float(u)


def rated_capacity(chart: LoadChart, boom_length: float, radius: float) -> float:
    """Bilinear rated capacity at (boom_length, radius); exact on grid points.

    Raises OutOfChart outside the axis hull or when a needed corner is not rated.
    """
    if len(chart.boom_lengths) == 1:
        if boom_length != chart.boom_lengths[0]:
            raise OutOfChart(
                f"boom length {boom_length:g} not in single-length chart "
                f"({chart.boom_lengths[0]:g})"
            )
        i, u = 0, 0.0
    else:
        i, u = _axis_cell(chart.boom_lengths, boom_length, "boom length")
    j, v = _axis_cell(chart.radii, radius, "radius")

    value = 0.0
    for (di, wu) in ((0, 1.0 - u), (1, u)):
        for (dj, wv) in ((0, 1.0 - v), (1, v)):
            w = wu * wv
            if w == 0.0:
                continue
            cell = chart.rated[min(i + di, len(chart.boom_lengths) - 1), j + dj]
            if not math.isfinite(cell):
                raise OutOfChart(
                    f"not rated near boom {boom_length:g} m, radius {radius:g} m"
                )
            value += w * cell
    return value


def gross_load(module, spec) -> float:
    """Module weight plus rigging plus hook block, in tonnes."""
    return module.weight + module.rigging_weight + spec.hook_block_weight


@dataclass(frozen=True)
class CapacityResult:
    """Rated vs gross load at one state; usage is a percentage."""

    rated: float
    gross_load: float
    usage: float

    @property
    def out_of_chart(self) -> bool:
        return not math.isfinite(self.usage)

    def to_json(self) -> dict:
        return {
            "rated_t": self.rated if math.isfinite(self.rated) else None,
            "gross_t": self.gross_load,
            "usage_pct": self.usage if math.isfinite(self.usage) else None,
            "out_of_chart": self.out_of_chart,
        }


def capacity_usage(chart: LoadChart, spec, state, module) -> CapacityResult:
    """Capacity usage at the state's operating radius; raises OutOfChart off-chart."""
    from .crane import operating_radius

    rated = rated_capacity(chart, spec.boom_length, operating_radius(spec, state))
    gross = gross_load(module, spec)
    return CapacityResult(rated=rated, gross_load=gross, usage=100.0 * gross / rated)


def capacity_usage_or_overload(chart: LoadChart, spec, state, module) -> CapacityResult:
    """Like capacity_usage, but off-chart states map to the +inf usage sentinel."""
    try:
        return capacity_usage(chart, spec, state, module)
    except OutOfChart:
        return CapacityResult(
            rated=math.nan, gross_load=gross_load(module, spec), usage=math.inf
        )
