"""Numba kernels for exact triangle/segment distance queries and BVH traversal.

Everything here is scalarized: coordinates travel as plain floats so the
hot paths allocate nothing. Squared distances are used internally; poses
arrive as a 3x3 rotation plus translation applied on the fly, which lets a
tree built in a component's local frame serve every tick of a moving crane.
"""
import numpy as np
from numba import njit

_STACK = 4096


@njit(cache=True)
def _closest_point_triangle(px, py, pz, ax, ay, az, bx, by, bz, cx, cy, cz):
    """Closest point to p on triangle abc (Ericson, real-time collision detection)."""
    abx, aby, abz = bx - ax, by - ay, bz - az
    acx, acy, acz = cx - ax, cy - ay, cz - az
    apx, apy, apz = px - ax, py - ay, pz - az
    d1 = abx * apx + aby * apy + abz * apz
    d2 = acx * apx + acy * apy + acz * apz
    if d1 <= 0.0 and d2 <= 0.0:
        return ax, ay, az
    bpx, bpy, bpz = px - bx, py - by, pz - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        return bx, by, bz
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        v = d1 / (d1 - d3)
        return ax + v * abx, ay + v * aby, az + v * abz
    cpx, cpy, cpz = px - cx, py - cy, pz - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        return cx, cy, cz
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        return ax + w * acx, ay + w * acy, az + w * acz
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return bx + w * (cx - bx), by + w * (cy - by), bz + w * (cz - bz)
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return ax + abx * v + acx * w, ay + aby * v + acy * w, az + abz * v + acz * w


@njit(cache=True)
def _closest_segment_segment(
    p1x, p1y, p1z, q1x, q1y, q1z, p2x, p2y, p2z, q2x, q2y, q2z
):
    """Closest points between segments p1q1 and p2q2 (Ericson 5.1.9)."""
    d1x, d1y, d1z = q1x - p1x, q1y - p1y, q1z - p1z
    d2x, d2y, d2z = q2x - p2x, q2y - p2y, q2z - p2z
    rx, ry, rz = p1x - p2x, p1y - p2y, p1z - p2z
    a = d1x * d1x + d1y * d1y + d1z * d1z
    e = d2x * d2x + d2y * d2y + d2z * d2z
    f = d2x * rx + d2y * ry + d2z * rz
    eps = 1e-30
    if a <= eps and e <= eps:
        s = 0.0
        t = 0.0
    elif a <= eps:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = d1x * rx + d1y * ry + d1z * rz
        if e <= eps:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = d1x * d2x + d1y * d2y + d1z * d2z
            denom = a * e - b * b
            if denom > 0.0:
                s = min(max((b * f - c * e) / denom, 0.0), 1.0)
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    return (
        p1x + s * d1x, p1y + s * d1y, p1z + s * d1z,
        p2x + t * d2x, p2y + t * d2y, p2z + t * d2z,
    )


@njit(cache=True)
def _seg_tri(px, py, pz, qx, qy, qz, ax, ay, az, bx, by, bz, cx, cy, cz):
    """Squared distance between segment pq and triangle abc with witnesses.

    Returns (d2, seg_x, seg_y, seg_z, tri_x, tri_y, tri_z). A segment
    crossing the triangle interior yields exactly 0 at the crossing point;
    everything else reduces to segment-edge and endpoint-triangle cases,
    which together cover every closest-feature pair.
    """
    abx, aby, abz = bx - ax, by - ay, bz - az
    acx, acy, acz = cx - ax, cy - ay, cz - az
    nx = aby * acz - abz * acy
    ny = abz * acx - abx * acz
    nz = abx * acy - aby * acx
    sp = nx * (px - ax) + ny * (py - ay) + nz * (pz - az)
    sq = nx * (qx - ax) + ny * (qy - ay) + nz * (qz - az)
    if (sp > 0.0 and sq < 0.0) or (sp < 0.0 and sq > 0.0):
        t = sp / (sp - sq)
        x = px + t * (qx - px)
        y = py + t * (qy - py)
        z = pz + t * (qz - pz)
        # inside test: cross(edge, x - corner) . n >= 0 for all edges
        e1 = (aby * (z - az) - abz * (y - ay)) * nx \
            + (abz * (x - ax) - abx * (z - az)) * ny \
            + (abx * (y - ay) - aby * (x - ax)) * nz
        bcx, bcy, bcz = cx - bx, cy - by, cz - bz
        e2 = (bcy * (z - bz) - bcz * (y - by)) * nx \
            + (bcz * (x - bx) - bcx * (z - bz)) * ny \
            + (bcx * (y - by) - bcy * (x - bx)) * nz
        cax, cay, caz = ax - cx, ay - cy, az - cz
        e3 = (cay * (z - cz) - caz * (y - cy)) * nx \
            + (caz * (x - cx) - cax * (z - cz)) * ny \
            + (cax * (y - cy) - cay * (x - cx)) * nz
        if e1 >= 0.0 and e2 >= 0.0 and e3 >= 0.0:
            return 0.0, x, y, z, x, y, z

    best = np.inf
    wsx = px
    wsy = py
    wsz = pz
    wtx = ax
    wty = ay
    wtz = az

    for k in range(3):
        if k == 0:
            e0x, e0y, e0z, e1x, e1y, e1z = ax, ay, az, bx, by, bz
        elif k == 1:
            e0x, e0y, e0z, e1x, e1y, e1z = bx, by, bz, cx, cy, cz
        else:
            e0x, e0y, e0z, e1x, e1y, e1z = cx, cy, cz, ax, ay, az
        sx, sy, sz, tx, ty, tz = _closest_segment_segment(
            px, py, pz, qx, qy, qz, e0x, e0y, e0z, e1x, e1y, e1z
        )
        dx, dy, dz = sx - tx, sy - ty, sz - tz
        d2 = dx * dx + dy * dy + dz * dz
        if d2 < best:
            best = d2
            wsx, wsy, wsz = sx, sy, sz
            wtx, wty, wtz = tx, ty, tz

    for k in range(2):
        if k == 0:
            ex, ey, ez = px, py, pz
        else:
            ex, ey, ez = qx, qy, qz
        tx, ty, tz = _closest_point_triangle(
            ex, ey, ez, ax, ay, az, bx, by, bz, cx, cy, cz
        )
        dx, dy, dz = ex - tx, ey - ty, ez - tz
        d2 = dx * dx + dy * dy + dz * dz
        if d2 < best:
            best = d2
            wsx, wsy, wsz = ex, ey, ez
            wtx, wty, wtz = tx, ty, tz
    return best, wsx, wsy, wsz, wtx, wty, wtz


@njit(cache=True)
def _tri_tri(
    a0x, a0y, a0z, b0x, b0y, b0z, c0x, c0y, c0z,
    a1x, a1y, a1z, b1x, b1y, b1z, c1x, c1y, c1z,
):
    """Squared distance between two triangles with witnesses (w0 on the first)."""
    best = np.inf
    w0x = a0x
    w0y = a0y
    w0z = a0z
    w1x = a1x
    w1y = a1y
    w1z = a1z
    for k in range(3):
        if k == 0:
            px, py, pz, qx, qy, qz = a0x, a0y, a0z, b0x, b0y, b0z
        elif k == 1:
            px, py, pz, qx, qy, qz = b0x, b0y, b0z, c0x, c0y, c0z
        else:
            px, py, pz, qx, qy, qz = c0x, c0y, c0z, a0x, a0y, a0z
        d2, sx, sy, sz, tx, ty, tz = _seg_tri(
            px, py, pz, qx, qy, qz,
            a1x, a1y, a1z, b1x, b1y, b1z, c1x, c1y, c1z,
        )
        if d2 < best:
            best = d2
            w0x, w0y, w0z = sx, sy, sz
            w1x, w1y, w1z = tx, ty, tz
            if best == 0.0:
                return best, w0x, w0y, w0z, w1x, w1y, w1z
    for k in range(3):
        if k == 0:
            px, py, pz, qx, qy, qz = a1x, a1y, a1z, b1x, b1y, b1z
        elif k == 1:
            px, py, pz, qx, qy, qz = b1x, b1y, b1z, c1x, c1y, c1z
        else:
            px, py, pz, qx, qy, qz = c1x, c1y, c1z, a1x, a1y, a1z
        d2, sx, sy, sz, tx, ty, tz = _seg_tri(
            px, py, pz, qx, qy, qz,
            a0x, a0y, a0z, b0x, b0y, b0z, c0x, c0y, c0z,
        )
        if d2 < best:
            best = d2
            w0x, w0y, w0z = tx, ty, tz
            w1x, w1y, w1z = sx, sy, sz
            if best == 0.0:
                return best, w0x, w0y, w0z, w1x, w1y, w1z
    return best, w0x, w0y, w0z, w1x, w1y, w1z


@njit(cache=True)
def _box_box_d2(
    min0x, min0y, min0z, max0x, max0y, max0z,
    min1x, min1y, min1z, max1x, max1y, max1z,
):
    d2 = 0.0
    d = min0x - max1x
    if min1x - max0x > d:
        d = min1x - max0x
    if d > 0.0:
        d2 += d * d
    d = min0y - max1y
    if min1y - max0y > d:
        d = min1y - max0y
    if d > 0.0:
        d2 += d * d
    d = min0z - max1z
    if min1z - max0z > d:
        d = min1z - max0z
    if d > 0.0:
        d2 += d * d
    return d2


@njit(cache=True)
def _posed_box(bmin, bmax, i, r00, r01, r10, r11, tx, ty, tz):
    """AABB of node i's box under a yaw rotation + translation.

    Yaw-only rotation: the z row/column is identity, so only the xy block
    participates. Returns (min_x, min_y, min_z, max_x, max_y, max_z).
    """
    cx = 0.5 * (bmin[i, 0] + bmax[i, 0])
    cy = 0.5 * (bmin[i, 1] + bmax[i, 1])
    cz = 0.5 * (bmin[i, 2] + bmax[i, 2])
    hx = 0.5 * (bmax[i, 0] - bmin[i, 0])
    hy = 0.5 * (bmax[i, 1] - bmin[i, 1])
    hz = 0.5 * (bmax[i, 2] - bmin[i, 2])
    ncx = r00 * cx + r01 * cy + tx
    ncy = r10 * cx + r11 * cy + ty
    ncz = cz + tz
    nhx = abs(r00) * hx + abs(r01) * hy
    nhy = abs(r10) * hx + abs(r11) * hy
    return ncx - nhx, ncy - nhy, ncz - hz, ncx + nhx, ncy + nhy, ncz + hz


@njit(cache=True)
def tree_tree_min(
    bmin0, bmax0, left0, right0, start0, count0, order0, tris0, pose0,
    bmin1, bmax1, left1, right1, start1, count1, order1, tris1, pose1,
    seed,
):
    """Exact min distance between two posed AABB trees (branch and bound).

    pose arrays are (r00, r01, r10, r11, tx, ty, tz). `seed` is
    (d2, w0x, w0y, w0z, w1x, w1y, w1z): a known point pair on the two
    surfaces whose squared distance bounds the optimum from above (pass
    d2 = inf for no seed); it tightens pruning but never changes the
    returned distance. Returns (distance, w0x, w0y, w0z, w1x, w1y, w1z).
    """
    p000, p001, p010, p011, p0tx, p0ty, p0tz = (
        pose0[0], pose0[1], pose0[2], pose0[3], pose0[4], pose0[5], pose0[6]
    )
    p100, p101, p110, p111, p1tx, p1ty, p1tz = (
        pose1[0], pose1[1], pose1[2], pose1[3], pose1[4], pose1[5], pose1[6]
    )
    best = seed[0]
    w0x, w0y, w0z = seed[1], seed[2], seed[3]
    w1x, w1y, w1z = seed[4], seed[5], seed[6]

    # reusable buffers for one leaf's transformed triangles and their AABBs
    buf1 = np.empty((8, 3, 3))
    buf1_lo = np.empty((8, 3))
    buf1_hi = np.empty((8, 3))

    stack = np.empty((_STACK, 2), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    top = 1
    while top > 0:
        top -= 1
        i = stack[top, 0]
        j = stack[top, 1]
        i0x, i0y, i0z, i1x, i1y, i1z = _posed_box(
            bmin0, bmax0, i, p000, p001, p010, p011, p0tx, p0ty, p0tz
        )
        j0x, j0y, j0z, j1x, j1y, j1z = _posed_box(
            bmin1, bmax1, j, p100, p101, p110, p111, p1tx, p1ty, p1tz
        )
        if _box_box_d2(i0x, i0y, i0z, i1x, i1y, i1z, j0x, j0y, j0z, j1x, j1y, j1z) >= best:
            continue
        leaf_i = left0[i] < 0
        leaf_j = left1[j] < 0
        if leaf_i and leaf_j:
            nj = count1[j]
            for jj in range(nj):
                t1 = order1[start1[j] + jj]
                for kk in range(3):
                    x = tris1[t1, kk, 0]
                    y = tris1[t1, kk, 1]
                    z = tris1[t1, kk, 2]
                    buf1[jj, kk, 0] = p100 * x + p101 * y + p1tx
                    buf1[jj, kk, 1] = p110 * x + p111 * y + p1ty
                    buf1[jj, kk, 2] = z + p1tz
                for ax in range(3):
                    lo = buf1[jj, 0, ax]
                    hi = lo
                    if buf1[jj, 1, ax] < lo:
                        lo = buf1[jj, 1, ax]
                    elif buf1[jj, 1, ax] > hi:
                        hi = buf1[jj, 1, ax]
                    if buf1[jj, 2, ax] < lo:
                        lo = buf1[jj, 2, ax]
                    elif buf1[jj, 2, ax] > hi:
                        hi = buf1[jj, 2, ax]
                    buf1_lo[jj, ax] = lo
                    buf1_hi[jj, ax] = hi
            for ii in range(start0[i], start0[i] + count0[i]):
                t0 = order0[ii]
                x = tris0[t0, 0, 0]
                y = tris0[t0, 0, 1]
                z = tris0[t0, 0, 2]
                a0x = p000 * x + p001 * y + p0tx
                a0y = p010 * x + p011 * y + p0ty
                a0z = z + p0tz
                x = tris0[t0, 1, 0]
                y = tris0[t0, 1, 1]
                z = tris0[t0, 1, 2]
                b0x = p000 * x + p001 * y + p0tx
                b0y = p010 * x + p011 * y + p0ty
                b0z = z + p0tz
                x = tris0[t0, 2, 0]
                y = tris0[t0, 2, 1]
                z = tris0[t0, 2, 2]
                c0x = p000 * x + p001 * y + p0tx
                c0y = p010 * x + p011 * y + p0ty
                c0z = z + p0tz
                t0lx = min(a0x, min(b0x, c0x))
                t0ly = min(a0y, min(b0y, c0y))
                t0lz = min(a0z, min(b0z, c0z))
                t0hx = max(a0x, max(b0x, c0x))
                t0hy = max(a0y, max(b0y, c0y))
                t0hz = max(a0z, max(b0z, c0z))
                for jj in range(nj):
                    if (
                        _box_box_d2(
                            t0lx, t0ly, t0lz, t0hx, t0hy, t0hz,
                            buf1_lo[jj, 0], buf1_lo[jj, 1], buf1_lo[jj, 2],
                            buf1_hi[jj, 0], buf1_hi[jj, 1], buf1_hi[jj, 2],
                        )
                        >= best
                    ):
                        continue
                    d2, u0x, u0y, u0z, u1x, u1y, u1z = _tri_tri(
                        a0x, a0y, a0z, b0x, b0y, b0z, c0x, c0y, c0z,
                        buf1[jj, 0, 0], buf1[jj, 0, 1], buf1[jj, 0, 2],
                        buf1[jj, 1, 0], buf1[jj, 1, 1], buf1[jj, 1, 2],
                        buf1[jj, 2, 0], buf1[jj, 2, 1], buf1[jj, 2, 2],
                    )
                    if d2 < best:
                        best = d2
                        w0x, w0y, w0z = u0x, u0y, u0z
                        w1x, w1y, w1z = u1x, u1y, u1z
        else:
            descend0 = not leaf_i
            if descend0 and not leaf_j:
                size_i = (
                    (bmax0[i, 0] - bmin0[i, 0])
                    + (bmax0[i, 1] - bmin0[i, 1])
                    + (bmax0[i, 2] - bmin0[i, 2])
                )
                size_j = (
                    (bmax1[j, 0] - bmin1[j, 0])
                    + (bmax1[j, 1] - bmin1[j, 1])
                    + (bmax1[j, 2] - bmin1[j, 2])
                )
                descend0 = size_i >= size_j
            if descend0:
                ca = left0[i]
                cb = right0[i]
                a0, a1, a2, a3, a4, a5 = _posed_box(
                    bmin0, bmax0, ca, p000, p001, p010, p011, p0tx, p0ty, p0tz
                )
                da = _box_box_d2(a0, a1, a2, a3, a4, a5, j0x, j0y, j0z, j1x, j1y, j1z)
                a0, a1, a2, a3, a4, a5 = _posed_box(
                    bmin0, bmax0, cb, p000, p001, p010, p011, p0tx, p0ty, p0tz
                )
                db = _box_box_d2(a0, a1, a2, a3, a4, a5, j0x, j0y, j0z, j1x, j1y, j1z)
                if da <= db:
                    stack[top, 0] = cb
                    stack[top, 1] = j
                    top += 1
                    stack[top, 0] = ca
                    stack[top, 1] = j
                    top += 1
                else:
                    stack[top, 0] = ca
                    stack[top, 1] = j
                    top += 1
                    stack[top, 0] = cb
                    stack[top, 1] = j
                    top += 1
            else:
                ca = left1[j]
                cb = right1[j]
                a0, a1, a2, a3, a4, a5 = _posed_box(
                    bmin1, bmax1, ca, p100, p101, p110, p111, p1tx, p1ty, p1tz
                )
                da = _box_box_d2(i0x, i0y, i0z, i1x, i1y, i1z, a0, a1, a2, a3, a4, a5)
                a0, a1, a2, a3, a4, a5 = _posed_box(
                    bmin1, bmax1, cb, p100, p101, p110, p111, p1tx, p1ty, p1tz
                )
                db = _box_box_d2(i0x, i0y, i0z, i1x, i1y, i1z, a0, a1, a2, a3, a4, a5)
                if da <= db:
                    stack[top, 0] = i
                    stack[top, 1] = cb
                    top += 1
                    stack[top, 0] = i
                    stack[top, 1] = ca
                    top += 1
                else:
                    stack[top, 0] = i
                    stack[top, 1] = ca
                    top += 1
                    stack[top, 0] = i
                    stack[top, 1] = cb
                    top += 1
    return np.sqrt(best), w0x, w0y, w0z, w1x, w1y, w1z


@njit(cache=True)
def tree_segment_min(
    bmin, bmax, left, right, start, count, order, tris, pose, p, q, seed
):
    """Exact min distance between a posed AABB tree and a world-frame segment.

    `seed` as in tree_tree_min, with the tree witness first. Returns
    (distance, tree_x, tree_y, tree_z, seg_x, seg_y, seg_z).
    """
    r00, r01, r10, r11, ptx, pty, ptz = (
        pose[0], pose[1], pose[2], pose[3], pose[4], pose[5], pose[6]
    )
    px, py, pz = p[0], p[1], p[2]
    qx, qy, qz = q[0], q[1], q[2]
    s0x = min(px, qx)
    s0y = min(py, qy)
    s0z = min(pz, qz)
    s1x = max(px, qx)
    s1y = max(py, qy)
    s1z = max(pz, qz)

    best = seed[0]
    wtx, wty, wtz = seed[1], seed[2], seed[3]
    wsx, wsy, wsz = seed[4], seed[5], seed[6]

    stack = np.empty(_STACK, np.int64)
    stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        i = stack[top]
        n0x, n0y, n0z, n1x, n1y, n1z = _posed_box(
            bmin, bmax, i, r00, r01, r10, r11, ptx, pty, ptz
        )
        if _box_box_d2(n0x, n0y, n0z, n1x, n1y, n1z, s0x, s0y, s0z, s1x, s1y, s1z) >= best:
            continue
        if left[i] < 0:
            for ii in range(start[i], start[i] + count[i]):
                t = order[ii]
                x = tris[t, 0, 0]
                y = tris[t, 0, 1]
                z = tris[t, 0, 2]
                ax = r00 * x + r01 * y + ptx
                ay = r10 * x + r11 * y + pty
                az = z + ptz
                x = tris[t, 1, 0]
                y = tris[t, 1, 1]
                z = tris[t, 1, 2]
                bx = r00 * x + r01 * y + ptx
                by = r10 * x + r11 * y + pty
                bz = z + ptz
                x = tris[t, 2, 0]
                y = tris[t, 2, 1]
                z = tris[t, 2, 2]
                cx = r00 * x + r01 * y + ptx
                cy = r10 * x + r11 * y + pty
                cz = z + ptz
                if (
                    _box_box_d2(
                        min(ax, min(bx, cx)), min(ay, min(by, cy)), min(az, min(bz, cz)),
                        max(ax, max(bx, cx)), max(ay, max(by, cy)), max(az, max(bz, cz)),
                        s0x, s0y, s0z, s1x, s1y, s1z,
                    )
                    >= best
                ):
                    continue
                d2, sx, sy, sz, tx, ty, tz = _seg_tri(
                    px, py, pz, qx, qy, qz, ax, ay, az, bx, by, bz, cx, cy, cz
                )
                if d2 < best:
                    best = d2
                    wsx, wsy, wsz = sx, sy, sz
                    wtx, wty, wtz = tx, ty, tz
        else:
            ca = left[i]
            cb = right[i]
            a0, a1, a2, a3, a4, a5 = _posed_box(
                bmin, bmax, ca, r00, r01, r10, r11, ptx, pty, ptz
            )
            da = _box_box_d2(a0, a1, a2, a3, a4, a5, s0x, s0y, s0z, s1x, s1y, s1z)
            a0, a1, a2, a3, a4, a5 = _posed_box(
                bmin, bmax, cb, r00, r01, r10, r11, ptx, pty, ptz
            )
            db = _box_box_d2(a0, a1, a2, a3, a4, a5, s0x, s0y, s0z, s1x, s1y, s1z)
            if da <= db:
                stack[top] = cb
                top += 1
                stack[top] = ca
                top += 1
            else:
                stack[top] = ca
                top += 1
                stack[top] = cb
                top += 1
    return np.sqrt(best), wtx, wty, wtz, wsx, wsy, wsz


@njit(cache=True)
def triangle_pair_distance_arrays(t0, t1):
    """Distance and witnesses between two (3,3) triangles."""
    d2, w0x, w0y, w0z, w1x, w1y, w1z = _tri_tri(
        t0[0, 0], t0[0, 1], t0[0, 2],
        t0[1, 0], t0[1, 1], t0[1, 2],
        t0[2, 0], t0[2, 1], t0[2, 2],
        t1[0, 0], t1[0, 1], t1[0, 2],
        t1[1, 0], t1[1, 1], t1[1, 2],
        t1[2, 0], t1[2, 1], t1[2, 2],
    )
    return np.sqrt(d2), w0x, w0y, w0z, w1x, w1y, w1z
