import math

import numpy as np
import pytest

from liftsim.capacity import (
    CapacityResult,
    LoadChart,
    capacity_usage,
    capacity_usage_or_overload,
    gross_load,
    load_chart_csv,
    rated_capacity,
)
from liftsim.crane import CraneState
from liftsim.errors import OutOfChart, ParseError
from liftsim import demo


@pytest.fixture(scope="module")
def small_chart():
    return LoadChart(
        np.array([30.0, 40.0]),
        np.array([10.0, 12.0]),
        np.array([[100.0, 80.0], [90.0, 70.0]]),
    )


class TestRatedCapacity:
    def test_midpoint_bilinear(self, small_chart):
        assert rated_capacity(small_chart, 35.0, 11.0) == 85.0

    def test_exact_on_grid_points(self, small_chart):
        for i, length in enumerate(small_chart.boom_lengths):
            for j, radius in enumerate(small_chart.radii):
                assert rated_capacity(small_chart, length, radius) == small_chart.rated[i, j]

    def test_radius_beyond_axis(self, small_chart):
        with pytest.raises(OutOfChart):
            rated_capacity(small_chart, 30.0, 15.0)

    def test_length_beyond_axis(self, small_chart):
        with pytest.raises(OutOfChart):
            rated_capacity(small_chart, 45.0, 11.0)

    def test_not_rated_cell(self):
        chart = LoadChart(
            np.array([30.0]),
            np.array([10.0, 12.0, 14.0]),
            np.array([[100.0, 80.0, math.nan]]),
        )
        assert rated_capacity(chart, 30.0, 11.0) == 90.0
        with pytest.raises(OutOfChart):
            rated_capacity(chart, 30.0, 13.0)

    def test_interpolation_within_corner_envelope(self, small_chart):
        rng = np.random.default_rng(31)
        lengths = small_chart.boom_lengths
        radii = small_chart.radii
        for _ in range(2000):
            length = rng.uniform(lengths[0], lengths[-1])
            radius = rng.uniform(radii[0], radii[-1])
            value = rated_capacity(small_chart, length, radius)
            i = min(np.searchsorted(lengths, length, side="right") - 1, len(lengths) - 2)
            j = min(np.searchsorted(radii, radius, side="right") - 1, len(radii) - 2)
            corners = small_chart.rated[i : i + 2, j : j + 2]
            assert corners.min() - 1e-12 <= value <= corners.max() + 1e-12

    def test_non_increasing_in_radius(self, small_chart):
        radii = np.linspace(10.0, 12.0, 500)
        values = [rated_capacity(small_chart, 33.0, r) for r in radii]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


class TestChartValidation:
    def test_rejects_increasing_row(self):
        with pytest.raises(ParseError, match="non-increasing"):
            LoadChart(
                np.array([30.0]),
                np.array([10.0, 12.0]),
                np.array([[80.0, 100.0]]),
            )

    def test_rejects_non_ascending_axis(self):
        with pytest.raises(ParseError):
            LoadChart(
                np.array([30.0]),
                np.array([12.0, 10.0]),
                np.array([[100.0, 80.0]]),
            )

    def test_rejects_negative_capacity(self):
        with pytest.raises(ParseError):
            LoadChart(
                np.array([30.0]),
                np.array([10.0, 12.0]),
                np.array([[100.0, -80.0]]),
            )


class TestCsv:
    def test_round_trip(self):
        chart = demo.demo_chart()
        back = load_chart_csv(chart.to_csv())
        np.testing.assert_array_equal(back.boom_lengths, chart.boom_lengths)
        np.testing.assert_array_equal(back.radii, chart.radii)
        np.testing.assert_array_equal(back.rated, chart.rated)

    def test_blank_cell_not_rated(self):
        chart = load_chart_csv("radius_m,10,12,14\n30,100,80,\n")
        assert math.isnan(chart.rated[0, 2])

    def test_bad_header(self):
        with pytest.raises(ParseError, match="radius_m"):
            load_chart_csv("radius,10,12\n30,100,80\n")


class TestUsage:
    def test_gross_load(self, crane):
        module = demo.demo_module()
        assert gross_load(module, crane) == pytest.approx(28.0 + 1.5 + 1.5)

    def test_fifty_percent(self, small_chart, crane):
        # radius 10 at boom 30 -> rated 100; make gross 50 via a fake module
        from liftsim.scene import LiftedModule
        from liftsim.geometry import box_mesh

        module = LiftedModule(
            id="m", mesh=box_mesh((0, 0, 0), (1, 1, 1)),
            weight=50.0 - crane.hook_block_weight, rigging_weight=0.0,
        )
        luff = math.acos((10.0 - crane.boom_pivot_forward) / crane.boom_length)
        result = capacity_usage(small_chart, crane, CraneState(luff=luff, hoist=5), module)
        assert result.usage == pytest.approx(50.0, abs=1e-9)

    def test_usage_boundary_100(self, small_chart, crane):
        from liftsim.scene import LiftedModule
        from liftsim.geometry import box_mesh

        module = LiftedModule(
            id="m", mesh=box_mesh((0, 0, 0), (1, 1, 1)),
            weight=100.0 - crane.hook_block_weight, rigging_weight=0.0,
        )
        luff = math.acos((10.0 - crane.boom_pivot_forward) / crane.boom_length)
        result = capacity_usage(small_chart, crane, CraneState(luff=luff, hoist=5), module)
        assert result.usage == pytest.approx(100.0, abs=1e-9)

    def test_usage_monotone_as_boom_lowers(self, crane, chart):
        module = demo.demo_module()
        usages = []
        for luff_deg in np.linspace(88, 30, 120):
            state = CraneState(luff=math.radians(luff_deg), hoist=5.0)
            usages.append(capacity_usage(chart, crane, state, module).usage)
        assert all(b >= a - 1e-9 for a, b in zip(usages, usages[1:]))

    def test_out_of_chart_sentinel(self, small_chart, crane):
        module = demo.demo_module()
        state = CraneState(luff=math.radians(10), hoist=5.0)  # radius ~31.5
        with pytest.raises(OutOfChart):
            capacity_usage(small_chart, crane, state, module)
        sentinel = capacity_usage_or_overload(small_chart, crane, state, module)
        assert sentinel.out_of_chart
        assert math.isinf(sentinel.usage)

    def test_usage_linear_in_gross(self, small_chart, crane):
        from liftsim.scene import LiftedModule
        from liftsim.geometry import box_mesh

        luff = math.acos((11.0 - crane.boom_pivot_forward) / crane.boom_length)
        state = CraneState(luff=luff, hoist=5)
        usages = []
        weights = [10.0, 20.0, 40.0]
        for w in weights:
            module = LiftedModule(id="m", mesh=box_mesh((0, 0, 0), (1, 1, 1)), weight=w)
            usages.append(capacity_usage(small_chart, crane, state, module).usage)
        g0 = weights[0] + crane.hook_block_weight
        g1 = weights[1] + crane.hook_block_weight
        g2 = weights[2] + crane.hook_block_weight
        assert usages[1] / usages[0] == pytest.approx(g1 / g0, rel=1e-12)
        assert usages[2] / usages[0] == pytest.approx(g2 / g0, rel=1e-12)
