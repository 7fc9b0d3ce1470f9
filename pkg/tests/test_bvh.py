import math

import numpy as np
import pytest

from liftsim.bvh import (
    AabbTree,
    LEAF_SIZE,
    build_index,
    min_distance,
    min_distance_segment,
    split_long_edges,
    triangle_pair_distance,
)
from liftsim.errors import DegenerateMesh
from liftsim.geometry import Pose, TriMesh, box_mesh

from oracles import (
    brute_force_mesh_distance,
    random_mesh,
    scipy_triangle_distance,
    triangle_triangle_d2,
)


def walk_leaves(tree: AabbTree):
    """Yield (node, triangle ids) for every leaf, depth first."""
    stack = [0]
    while stack:
        node = stack.pop()
        if tree.left[node] < 0:
            ids = tree.order[tree.start[node] : tree.start[node] + tree.count[node]]
            yield node, ids
        else:
            stack.append(tree.left[node])
            stack.append(tree.right[node])


class TestBuild:
    def test_single_triangle(self):
        mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        tree = build_index(mesh)
        assert tree.left[0] == -1
        lo, hi = tree.root_box
        np.testing.assert_array_equal(lo, [0, 0, 0])
        np.testing.assert_array_equal(hi, [1, 1, 0])

    def test_cube_root_box(self):
        tree = build_index(box_mesh((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5)))
        lo, hi = tree.root_box
        np.testing.assert_array_equal(lo, [-0.5, -0.5, -0.5])
        np.testing.assert_array_equal(hi, [0.5, 0.5, 0.5])

    def test_pose_baked_into_root_box(self):
        tree = build_index(box_mesh((0, 0, 0), (1, 1, 1)), Pose((10, 0, 0)))
        lo, hi = tree.root_box
        np.testing.assert_allclose(lo, [10, 0, 0])
        np.testing.assert_allclose(hi, [11, 1, 1])

    def test_every_triangle_in_exactly_one_leaf_10k(self):
        rng = np.random.default_rng(7)
        tris = random_mesh(rng, 10_000, scale=50.0)
        tree = AabbTree(tris)
        seen = []
        for node, ids in walk_leaves(tree):
            assert len(ids) <= LEAF_SIZE
            seen.extend(ids.tolist())
        assert sorted(seen) == list(range(10_000))

    def test_parent_box_contains_children(self):
        rng = np.random.default_rng(8)
        tree = AabbTree(random_mesh(rng, 500, scale=20.0))
        for node in range(len(tree.left)):
            if tree.left[node] < 0:
                ids = tree.order[tree.start[node] : tree.start[node] + tree.count[node]]
                tri_lo = tree.tris[ids].min(axis=(0, 1))
                tri_hi = tree.tris[ids].max(axis=(0, 1))
                assert np.all(tree.bmin[node] <= tri_lo + 1e-15)
                assert np.all(tree.bmax[node] >= tri_hi - 1e-15)
            else:
                for child in (tree.left[node], tree.right[node]):
                    assert np.all(tree.bmin[node] <= tree.bmin[child])
                    assert np.all(tree.bmax[node] >= tree.bmax[child])

    def test_empty_rejected(self):
        with pytest.raises(DegenerateMesh):
            AabbTree(np.zeros((0, 3, 3)))


class TestMinDistance:
    def test_cube_fixture_exact(self):
        a = build_index(box_mesh((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5)))
        b = build_index(box_mesh((4, -1, -1), (6, 1, 1)))
        d, (wa, wb) = min_distance(a, b)
        assert d == 3.5
        assert abs(np.linalg.norm(wa - wb) - 3.5) < 1e-12

    def test_overlap_is_zero(self):
        a = build_index(box_mesh((0, 0, 0), (2, 2, 2)))
        b = build_index(box_mesh((1, 1, 1), (3, 3, 3)))
        d, (wa, wb) = min_distance(a, b)
        assert d == 0.0
        np.testing.assert_allclose(wa, wb)

    def test_symmetry(self):
        rng = np.random.default_rng(11)
        a = AabbTree(random_mesh(rng, 20))
        b = AabbTree(random_mesh(rng, 20) + np.array([5.0, 1.0, -2.0]))
        d_ab, _ = min_distance(a, b)
        d_ba, _ = min_distance(b, a)
        assert abs(d_ab - d_ba) < 1e-12

    def test_rigid_motion_equivariance(self):
        rng = np.random.default_rng(12)
        mesh_a = random_mesh(rng, 15)
        mesh_b = random_mesh(rng, 15) + np.array([6.0, 0.0, 0.0])
        base, _ = min_distance(AabbTree(mesh_a), AabbTree(mesh_b))
        pose = Pose((3.3, -1.2, 0.8), yaw=1.1)
        moved, _ = min_distance(
            AabbTree(mesh_a), AabbTree(mesh_b), pose_a=pose, pose_b=pose
        )
        assert abs(base - moved) < 1e-9

    def test_separation_soundness(self):
        # translating B along the witness direction by d brings contact
        rng = np.random.default_rng(13)
        a = AabbTree(random_mesh(rng, 25))
        b = AabbTree(random_mesh(rng, 25) + np.array([7.0, 2.0, 1.0]))
        d, (wa, wb) = min_distance(a, b)
        assert d > 0
        shift = (wa - wb) / d * d
        d2, _ = min_distance(a, b, pose_b=Pose(tuple(shift)))
        assert d2 < 1e-6

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(14)
        for trial in range(25):
            a = random_mesh(rng, int(rng.integers(3, 30)))
            offset = rng.uniform(-6, 6, size=3)
            b = random_mesh(rng, int(rng.integers(3, 30))) + offset
            d, _ = min_distance(AabbTree(a), AabbTree(b))
            expected = brute_force_mesh_distance(a, b)
            assert abs(d - expected) < 1e-9, trial

    def test_seed_does_not_change_result(self):
        rng = np.random.default_rng(15)
        a = AabbTree(random_mesh(rng, 20))
        b = AabbTree(random_mesh(rng, 20) + np.array([5.0, 0.0, 0.0]))
        d0, (wa, wb) = min_distance(a, b)
        # a seed from arbitrary surface points (first corners)
        seed = (a.tris[0, 0], b.tris[0, 0])
        d1, _ = min_distance(a, b, seed=seed)
        assert d1 == pytest.approx(d0, abs=1e-12)
        # seeding with the optimal witnesses is also exact
        d2, _ = min_distance(a, b, seed=(wa, wb))
        assert d2 == pytest.approx(d0, abs=1e-12)


class TestSegmentQueries:
    def test_vertical_segment_above_cube(self):
        tree = build_index(box_mesh((-1, -1, -1), (1, 1, 1)))
        d, (wt, ws) = min_distance_segment(tree, (0, 0, 3), (0, 0, 9))
        assert d == 2.0
        np.testing.assert_allclose(ws, [0, 0, 3])
        np.testing.assert_allclose(wt, [0, 0, 1])

    def test_long_segment_piecewise_matches_point_checks(self):
        rng = np.random.default_rng(16)
        tris = random_mesh(rng, 40, scale=3.0) + np.array([0.0, 8.0, 0.0])
        tree = AabbTree(tris)
        p = np.array([-30.0, 0.0, -5.0])
        q = np.array([30.0, 1.0, 6.0])
        d, _ = min_distance_segment(tree, p, q)
        # oracle: dense sampling along the segment, point-triangle distances
        from oracles import closest_points_on_triangles

        ts = np.linspace(0, 1, 4001)
        pts = p[None, :] + ts[:, None] * (q - p)[None, :]
        best = np.inf
        for tri in tris:
            cp = closest_points_on_triangles(pts, np.broadcast_to(tri, (len(pts), 3, 3)))
            best = min(best, float(np.linalg.norm(pts - cp, axis=1).min()))
        assert d <= best + 1e-12
        assert d >= best - 2e-4  # sampling resolution of the oracle

    def test_intersecting_segment(self):
        tree = build_index(box_mesh((-1, -1, -1), (1, 1, 1)))
        d, _ = min_distance_segment(tree, (-5, 0, 0), (5, 0, 0))
        assert d == 0.0


class TestTrianglePair:
    def test_known_parallel_triangles(self):
        t0 = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        t1 = t0 + np.array([0, 0, 2.5])
        d, (w0, w1) = triangle_pair_distance(t0, t1)
        assert d == 2.5

    def test_scipy_cross_check(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            t0 = random_mesh(rng, 1)[0]
            t1 = random_mesh(rng, 1)[0] + rng.uniform(1.5, 5, size=3)
            d, _ = triangle_pair_distance(t0, t1)
            ref = scipy_triangle_distance(t0, t1)
            assert abs(d - ref) < 1e-5

    def test_numpy_oracle_agreement(self):
        rng = np.random.default_rng(18)
        t0 = random_mesh(rng, 200)
        t1 = random_mesh(rng, 200) + rng.uniform(-4, 4, size=(200, 1, 3))
        expected = np.sqrt(triangle_triangle_d2(t0, t1))
        for k in range(200):
            d, _ = triangle_pair_distance(t0[k], t1[k])
            assert abs(d - expected[k]) < 1e-9


class TestContactCases:
    """Exact-contact configurations must report exactly zero, never epsilon."""

    def test_shared_vertex(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            v = rng.uniform(-3, 3, size=(5, 3))
            d, _ = triangle_pair_distance(
                np.array([v[0], v[1], v[2]]), np.array([v[0], v[3], v[4]])
            )
            assert d < 1e-12

    def test_shared_edge(self):
        rng = np.random.default_rng(62)
        for _ in range(100):
            v = rng.uniform(-3, 3, size=(4, 3))
            d, _ = triangle_pair_distance(
                np.array([v[0], v[1], v[2]]), np.array([v[0], v[1], v[3]])
            )
            assert d < 1e-12

    def test_vertex_on_face(self):
        rng = np.random.default_rng(63)
        t0 = np.array([[0, 0, 0], [4, 0, 0], [0, 4, 0]], dtype=float)
        for _ in range(100):
            p = np.array([rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5), 0.0])
            t1 = np.array([p, p + [0.4, 0.1, 1.4], p + [-0.2, 0.5, 1.1]])
            d, _ = triangle_pair_distance(t0, t1)
            assert d < 1e-12

    def test_piercing_is_exactly_zero(self):
        rng = np.random.default_rng(64)
        t0 = np.array([[0, 0, 0], [5, 0, 0], [0, 5, 0]], dtype=float)
        for _ in range(100):
            x, y = rng.uniform(0.3, 1.5, size=2)
            t1 = np.array([[x, y, -1.0], [x + 0.3, y + 0.2, 2.0], [x - 0.2, y + 0.4, 2.0]])
            d, _ = triangle_pair_distance(t0, t1)
            assert d == 0.0

    def test_no_nan_and_witnesses_attain_distance_across_scales(self):
        rng = np.random.default_rng(65)
        checked = 0
        while checked < 200:
            scale = 10 ** rng.uniform(-3, 3)
            t0 = rng.uniform(-1, 1, size=(3, 3)) * scale
            t1 = rng.uniform(-1, 1, size=(3, 3)) * scale + rng.uniform(-2 * scale, 2 * scale, size=3)

            def area(t):
                return 0.5 * np.linalg.norm(np.cross(t[1] - t[0], t[2] - t[0]))

            if area(t0) <= 1e-12 or area(t1) <= 1e-12:
                continue
            d, (w0, w1) = triangle_pair_distance(t0, t1)
            assert math.isfinite(d)
            assert np.all(np.isfinite(w0)) and np.all(np.isfinite(w1))
            assert abs(np.linalg.norm(w0 - w1) - d) < 1e-9 * max(1.0, scale)
            checked += 1


def test_split_long_edges_preserves_distance():
    rng = np.random.default_rng(19)
    mesh_a = random_mesh(rng, 10, scale=4.0)
    mesh_b = random_mesh(rng, 10, scale=4.0) + np.array([9.0, 0.0, 0.0])
    d_raw, _ = min_distance(AabbTree(mesh_a), AabbTree(mesh_b))
    split_a = split_long_edges(mesh_a, 1.0)
    split_b = split_long_edges(mesh_b, 1.0)
    assert len(split_a) > len(mesh_a)
    d_split, _ = min_distance(AabbTree(split_a), AabbTree(split_b))
    assert abs(d_raw - d_split) < 1e-9
