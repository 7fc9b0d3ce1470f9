"""Triangle meshes, rigid poses (translation + yaw), and the Wavefront OBJ subset.

World frame is right-handed, Z-up, in meters. Site objects sit on level
ground, so poses carry no roll/pitch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMesh, ParseError

TAU = 2.0 * math.pi
MIN_TRIANGLE_AREA = 1e-12  # m^2


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(angle, TAU)
    if w <= -math.pi:
        w += TAU
    return w


def shortest_arc(start: float, end: float) -> float:
    """Signed smallest rotation taking `start` to `end`."""
    return wrap_angle(end - start)


@dataclass(frozen=True)
class Pose:
    """Rigid transform restricted to translation plus yaw about world Z."""

    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    yaw: float = 0.0

    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.rotation().T + np.asarray(self.translation)

    def inverse(self) -> "Pose":
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        x, y, z = self.translation
        return Pose((-(c * x + s * y), -(-s * x + c * y), -z), -self.yaw)

    def to_json(self) -> dict:
        return {"translation": list(self.translation), "yaw": self.yaw}


class TriMesh:
    """Indexed triangle mesh: vertices (V,3) float64, triangles (T,3) int32.

    Construction validates the mesh invariants: at least one triangle,
    indices in range, and no triangle with area <= 1e-12 m^2.
    """

    __slots__ = ("vertices", "triangles")

    def __init__(self, vertices, triangles):
        v = np.ascontiguousarray(np.asarray(vertices, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(triangles, dtype=np.int32))
        if v.ndim != 2 or v.shape[1] != 3:
            raise DegenerateMesh("vertices must be an (V,3) array")
        if t.ndim != 2 or t.shape[1] != 3:
            raise DegenerateMesh("triangles must be an (T,3) array")
        if len(t) < 1:
            raise DegenerateMesh("mesh has no triangles")
        if not np.all(np.isfinite(v)):
            raise DegenerateMesh("non-finite vertex coordinate")
        if t.min(initial=0) < 0 or t.max(initial=-1) >= len(v):
            raise DegenerateMesh("triangle index out of range")
        corners = v[t]
        cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
        areas = 0.5 * np.linalg.norm(cross, axis=1)
        bad = np.nonzero(areas <= MIN_TRIANGLE_AREA)[0]
        if len(bad):
            raise DegenerateMesh(f"degenerate triangle at index {int(bad[0])}")
        v.setflags(write=False)
        t.setflags(write=False)
        self.vertices = v
        self.triangles = t

    def triangle_corners(self) -> np.ndarray:
        """World per-triangle corner array of shape (T,3,3)."""
        return self.vertices[self.triangles]

    def aabb(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def transformed(self, pose: Pose) -> "TriMesh":
        return TriMesh(pose.apply(self.vertices), self.triangles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriMesh):
            return NotImplemented
        return (
            self.vertices.shape == other.vertices.shape
            and self.triangles.shape == other.triangles.shape
            and np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.triangles, other.triangles)
        )

    def __repr__(self) -> str:
        return f"TriMesh({len(self.vertices)} vertices, {len(self.triangles)} triangles)"

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "triangles": self.triangles.tolist(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TriMesh":
        try:
            return cls(doc["vertices"], doc["triangles"])
        except KeyError as exc:
            raise ParseError(f"inline mesh missing field {exc}") from exc


def parse_obj(text: str) -> TriMesh:
    """Parse the ASCII Wavefront subset: `v` and `f` records only, triangles only.

    Indices are 1-based; any face that is not a triangle is rejected.
    All other record types are ignored.
    """
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise ParseError(f"OBJ line {lineno}: vertex needs 3 coordinates")
            try:
                vertices.append((float(parts[1]), float(parts[2]), float(parts[3])))
            except ValueError as exc:
                raise ParseError(f"OBJ line {lineno}: bad vertex coordinate") from exc
        elif tag == "f":
            if len(parts) != 4:
                raise ParseError(
                    f"OBJ line {lineno}: only triangle faces supported "
                    f"(got {len(parts) - 1} vertices)"
                )
            idx = []
            for token in parts[1:]:
                head = token.split("/")[0]
                try:
                    i = int(head)
                except ValueError as exc:
                    raise ParseError(f"OBJ line {lineno}: bad face index {head!r}") from exc
                if i < 1:
                    raise ParseError(f"OBJ line {lineno}: face indices must be 1-based positive")
                idx.append(i - 1)
            faces.append(tuple(idx))
    if not vertices:
        raise ParseError("OBJ file has no vertices")
    return TriMesh(np.array(vertices), np.array(faces))


def format_obj(mesh: TriMesh) -> str:
    lines = []
    for x, y, z in mesh.vertices:
        lines.append(f"v {float(x)!r} {float(y)!r} {float(z)!r}")
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + "\n"


def box_mesh(lo, hi) -> TriMesh:
    """Axis-aligned box as 12 triangles."""
    x0, y0, z0 = (float(v) for v in lo)
    x1, y1, z1 = (float(v) for v in hi)
    v = np.array(
        [
            [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
            [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
        ]
    )
    quads = [
        (0, 3, 2, 1),  # bottom
        (4, 5, 6, 7),  # top
        (0, 1, 5, 4),  # -y
        (2, 3, 7, 6),  # +y
        (1, 2, 6, 5),  # +x
        (3, 0, 4, 7),  # -x
    ]
    tris = []
    for a, b, c, d in quads:
        tris.append((a, b, c))
        tris.append((a, c, d))
    return TriMesh(v, np.array(tris))


def paneled_box_mesh(lo, hi, divisions: int) -> TriMesh:
    """Box with each face subdivided into divisions^2 quads (12*divisions^2 triangles)."""
    n = int(divisions)
    if n < 1:
        raise ValueError("divisions must be >= 1")
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    verts: list[np.ndarray] = []
    tris: list[tuple[int, int, int]] = []

    def add_face(origin, du, dv):
        base = len(verts)
        for i in range(n + 1):
            for j in range(n + 1):
                verts.append(origin + du * (i / n) + dv * (j / n))
        for i in range(n):
            for j in range(n):
                a = base + i * (n + 1) + j
                b = a + (n + 1)
                tris.append((a, b, b + 1))
                tris.append((a, b + 1, a + 1))

    ex = np.array([hi[0] - lo[0], 0, 0])
    ey = np.array([0, hi[1] - lo[1], 0])
    ez = np.array([0, 0, hi[2] - lo[2]])
    add_face(lo, ex, ey)            # bottom
    add_face(lo + ez, ey, ex)       # top
    add_face(lo, ey, ez)            # -x
    add_face(lo + ex, ez, ey)       # +x
    add_face(lo, ez, ex)            # -y
    add_face(lo + ey, ex, ez)       # +y
    return TriMesh(np.array(verts), np.array(tris))


def cylinder_mesh(radius: float, height: float, segments: int = 24) -> TriMesh:
    """Closed upright cylinder with base at z=0."""
    if segments < 3:
        raise ValueError("segments must be >= 3")
    ang = np.arange(segments) * (TAU / segments)
    ring = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    bottom = np.column_stack([ring, np.zeros(segments)])
    top = np.column_stack([ring, np.full(segments, float(height))])
    verts = np.vstack([bottom, top, [[0, 0, 0]], [[0, 0, float(height)]]])
    cb, ct = 2 * segments, 2 * segments + 1
    tris = []
    for i in range(segments):
        j = (i + 1) % segments
        tris.append((i, j, segments + i))
        tris.append((j, segments + j, segments + i))
        tris.append((cb, j, i))
        tris.append((ct, segments + i, segments + j))
    return TriMesh(verts, np.array(tris))
