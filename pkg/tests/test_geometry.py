import math

import numpy as np
import pytest

from liftsim.errors import DegenerateMesh, ParseError
from liftsim.geometry import (
    Pose,
    TriMesh,
    box_mesh,
    cylinder_mesh,
    format_obj,
    paneled_box_mesh,
    parse_obj,
    wrap_angle,
)


@pytest.mark.parametrize(
    "angle,expected",
    [
        (0.0, 0.0),
        (3 * math.pi / 2, -math.pi / 2),
        (math.pi, math.pi),
        (-math.pi, math.pi),
        (5 * math.pi, math.pi),
        (0.25, 0.25),
    ],
)
def test_wrap_angle(angle, expected):
    assert wrap_angle(angle) == pytest.approx(expected, abs=1e-12)
    w = wrap_angle(angle)
    assert -math.pi < w <= math.pi


def test_pose_roundtrip():
    pose = Pose((1.0, -2.0, 3.0), yaw=0.7)
    pts = np.random.default_rng(3).uniform(-5, 5, size=(40, 3))
    back = pose.inverse().apply(pose.apply(pts))
    np.testing.assert_allclose(back, pts, atol=1e-12)


def test_pose_apply_rotates_about_z():
    pose = Pose((0.0, 0.0, 0.0), yaw=math.pi / 2)
    out = pose.apply(np.array([[1.0, 0.0, 5.0]]))
    np.testing.assert_allclose(out, [[0.0, 1.0, 5.0]], atol=1e-12)


class TestTriMesh:
    def test_valid_box(self):
        mesh = box_mesh((0, 0, 0), (1, 2, 3))
        assert len(mesh.triangles) == 12
        lo, hi = mesh.aabb()
        np.testing.assert_array_equal(lo, [0, 0, 0])
        np.testing.assert_array_equal(hi, [1, 2, 3])

    def test_needs_triangles(self):
        with pytest.raises(DegenerateMesh):
            TriMesh(np.zeros((3, 3)), np.zeros((0, 3), dtype=int))

    def test_rejects_bad_index(self):
        with pytest.raises(DegenerateMesh):
            TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 3]])

    def test_rejects_degenerate_triangle(self):
        with pytest.raises(DegenerateMesh):
            TriMesh([[0, 0, 0], [1, 0, 0], [2, 0, 0]], [[0, 1, 2]])

    def test_equality_bit_exact(self):
        m1 = box_mesh((0, 0, 0), (1, 1, 1))
        m2 = TriMesh(m1.vertices.copy(), m1.triangles.copy())
        assert m1 == m2
        m3 = box_mesh((0, 0, 0), (1, 1, 1.0000001))
        assert m1 != m3


class TestObj:
    def test_parse_simple(self):
        mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
        assert len(mesh.vertices) == 3
        assert mesh.triangles.tolist() == [[0, 1, 2]]

    def test_parse_slash_indices_and_comments(self):
        text = "# comment\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1/1 2/2/1 3/3/1\n"
        mesh = parse_obj(text)
        assert mesh.triangles.tolist() == [[0, 1, 2]]

    def test_quad_rejected(self):
        text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"
        with pytest.raises(ParseError, match="triangle"):
            parse_obj(text)

    def test_negative_index_rejected(self):
        with pytest.raises(ParseError):
            parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -1 2 3\n")

    def test_format_roundtrip_bit_exact(self):
        mesh = cylinder_mesh(1.37, 4.21, segments=9)
        back = parse_obj(format_obj(mesh))
        assert np.array_equal(back.vertices, mesh.vertices)
        assert np.array_equal(back.triangles, mesh.triangles)


def test_paneled_box_triangle_count():
    mesh = paneled_box_mesh((0, 0, 0), (1, 1, 1), divisions=3)
    assert len(mesh.triangles) == 12 * 9
    lo, hi = mesh.aabb()
    np.testing.assert_allclose(lo, [0, 0, 0])
    np.testing.assert_allclose(hi, [1, 1, 1])
