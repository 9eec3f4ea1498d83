"""Greedy edge-collapse decimation ranked by quadric error plus penalties.

Collapse cost for an edge (i, j) with candidate position v:

    cost = v^T (Q_i + Q_j) v
         + normal_flip_penalty     * (#flipped one-ring faces) * 0.01 * diag^2
         + aspect_ratio_penalty    * mean one-ring shape badness * 4e-4 * diag^2
         + edge_length_regularizer * |p_i - p_j|^2 * 4e-3
         + seam_preservation_weight * crease damage

where diag is the bounding-box diagonal. Boundary edges contribute
perpendicular constraint quadrics scaled by boundary_weight. Crease edges
(dihedral angle above the feature_angle threshold) are recorded up front;
moving their endpoints is charged proportionally to crease strength times
squared displacement. The candidate position blends the edge midpoint with
the quadric-optimal point (placement_policy_blend), falling back to the
midpoint when the 3x3 solve is ill-conditioned (condition estimate > 1e12).

Tie-breaking in the priority queue is lexicographic on (cost, smaller vertex
index, larger vertex index), which makes the whole run deterministic.
"""
from __future__ import annotations

import heapq
import math
import time

import numpy as np

from .core import MeshError, ReductionParams, ReductionResult, TriangleMesh
from .quadrics import face_planes, vertex_quadrics_10

_FLIP_SCALE = 1e-2
_ASPECT_SCALE = 4e-4
_LENGTH_SCALE = 4e-3
_SEAM_SCALE = 1.0
_BOUNDARY_CONSTRAINT_WEIGHT = 100.0
_COND_LIMIT = 1e12
_FAULTY_FLIP_FRACTION = 0.01
_SQRT3_4 = 4.0 * math.sqrt(3.0)


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _cross(ax, ay, az, bx, by, bz):
    return (ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx)


def _tri_cross(pa, pb, pc):
    return _cross(
        pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2],
        pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2],
    )


def _quadric_error(q, x, y, z):
    return (
        q[0] * x * x + q[4] * y * y + q[7] * z * z
        + 2.0 * (q[1] * x * y + q[2] * x * z + q[5] * y * z)
        + 2.0 * (q[3] * x + q[6] * y + q[8] * z)
        + q[9]
    )


def _optimal_position(q, fallback):
    """Minimizer of the quadric, or ``fallback`` when near-singular."""
    a00, a01, a02 = q[0], q[1], q[2]
    a11, a12, a22 = q[4], q[5], q[7]
    c00 = a11 * a22 - a12 * a12
    c01 = a02 * a12 - a01 * a22
    c02 = a01 * a12 - a02 * a11
    c11 = a00 * a22 - a02 * a02
    c12 = a01 * a02 - a00 * a12
    c22 = a00 * a11 - a01 * a01
    det = a00 * c00 + a01 * c01 + a02 * c02
    if det == 0.0 or not math.isfinite(det):
        return fallback
    i00, i01, i02 = c00 / det, c01 / det, c02 / det
    i11, i12, i22 = c11 / det, c12 / det, c22 / det
    norm_a = max(
        abs(a00) + abs(a01) + abs(a02),
        abs(a01) + abs(a11) + abs(a12),
        abs(a02) + abs(a12) + abs(a22),
    )
    norm_i = max(
        abs(i00) + abs(i01) + abs(i02),
        abs(i01) + abs(i11) + abs(i12),
        abs(i02) + abs(i12) + abs(i22),
    )
    if not math.isfinite(norm_i) or norm_a * norm_i > _COND_LIMIT:
        return fallback
    bx, by, bz = q[3], q[6], q[8]
    return (
        -(i00 * bx + i01 * by + i02 * bz),
        -(i01 * bx + i11 * by + i12 * bz),
        -(i02 * bx + i12 * by + i22 * bz),
    )


class _Decimator:
    def __init__(self, mesh: TriangleMesh, params: ReductionParams):
        self.params = params
        self.diag = mesh.bbox_diagonal()
        if self.diag <= 0.0:
            raise MeshError("mesh has zero spatial extent")
        self.diag2 = self.diag * self.diag

        self.pos = [list(p) for p in mesh.vertices]
        self.faces = [list(f) for f in mesh.faces]
        self.face_alive = [True] * len(self.faces)
        self.vertex_alive = [True] * len(self.pos)
        self.n_alive = len(self.faces)

        self.vfaces: list[set[int]] = [set() for _ in self.pos]
        for fid, (a, b, c) in enumerate(self.faces):
            self.vfaces[a].add(fid)
            self.vfaces[b].add(fid)
            self.vfaces[c].add(fid)

        quadrics = vertex_quadrics_10(mesh, params.quadric_area_weighting)
        self.Q = [list(row) for row in quadrics]

        edge_faces: dict[tuple[int, int], list[int]] = {}
        for fid, (a, b, c) in enumerate(self.faces):
            for u, v in ((a, b), (b, c), (c, a)):
                edge_faces.setdefault(_edge_key(u, v), []).append(fid)

        planes, _ = face_planes(mesh)
        self._add_boundary_constraints(edge_faces, planes)
        self.features = self._collect_feature_edges(edge_faces, planes)

        self.flipped: set[int] = set()
        self.version: dict[tuple[int, int], int] = {}
        self.heap: list[tuple[float, int, int, int]] = []
        for key in sorted(edge_faces):
            self.version[key] = 0
            self._push(key[0], key[1])

    # -- setup ---------------------------------------------------------

    def _add_boundary_constraints(self, edge_faces, planes) -> None:
        w = self.params.boundary_weight * _BOUNDARY_CONSTRAINT_WEIGHT
        if w == 0.0:
            return
        for (u, v), fids in edge_faces.items():
            if len(fids) != 1:
                continue
            pu, pv = self.pos[u], self.pos[v]
            ex, ey, ez = pv[0] - pu[0], pv[1] - pu[1], pv[2] - pu[2]
            nf = planes[fids[0]][:3]
            cx, cy, cz = _cross(ex, ey, ez, nf[0], nf[1], nf[2])
            norm = math.sqrt(cx * cx + cy * cy + cz * cz)
            if norm == 0.0:
                continue
            cx, cy, cz = cx / norm, cy / norm, cz / norm
            d = -(cx * pu[0] + cy * pu[1] + cz * pu[2])
            q = (
                w * cx * cx, w * cx * cy, w * cx * cz, w * cx * d,
                w * cy * cy, w * cy * cz, w * cy * d,
                w * cz * cz, w * cz * d,
                w * d * d,
            )
            for vtx in (u, v):
                qq = self.Q[vtx]
                for k in range(10):
                    qq[k] += q[k]

    def _collect_feature_edges(self, edge_faces, planes):
        """Per-vertex map of crease strengths, keyed by the other endpoint."""
        thresh = self.params.feature_angle * math.pi
        features: list[dict[int, float]] = [dict() for _ in self.pos]
        if self.params.seam_preservation_weight == 0.0:
            return features
        for (u, v), fids in edge_faces.items():
            if len(fids) != 2:
                continue
            n1, n2 = planes[fids[0]][:3], planes[fids[1]][:3]
            if not (np.any(n1) and np.any(n2)):
                continue
            cosang = float(np.clip(np.dot(n1, n2), -1.0, 1.0))
            angle = math.acos(cosang)
            if angle > thresh:
                strength = (angle - thresh) / math.pi
                features[u][v] = strength
                features[v][u] = strength
        return features

    # -- queue ---------------------------------------------------------

    def _bump(self, i: int, j: int) -> int:
        key = _edge_key(i, j)
        ver = self.version.get(key, 0) + 1
        self.version[key] = ver
        return ver

    def _push(self, i: int, j: int) -> None:
        key = _edge_key(i, j)
        cost = self._evaluate(key[0], key[1])[0]
        heapq.heappush(self.heap, (cost, key[0], key[1], self.version[key]))

    def _neighbors(self, v: int) -> set[int]:
        out: set[int] = set()
        for fid in self.vfaces[v]:
            if self.face_alive[fid]:
                out.update(self.faces[fid])
        out.discard(v)
        return out

    # -- cost ----------------------------------------------------------

    def _evaluate(self, i: int, j: int):
        p = self.params
        qi, qj = self.Q[i], self.Q[j]
        qsum = [qi[k] + qj[k] for k in range(10)]
        pi, pj = self.pos[i], self.pos[j]
        mid = ((pi[0] + pj[0]) * 0.5, (pi[1] + pj[1]) * 0.5, (pi[2] + pj[2]) * 0.5)
        blend = p.placement_policy_blend
        if blend > 0.0:
            opt = _optimal_position(qsum, mid)
            cand = (
                mid[0] + blend * (opt[0] - mid[0]),
                mid[1] + blend * (opt[1] - mid[1]),
                mid[2] + blend * (opt[2] - mid[2]),
            )
        else:
            cand = mid
        cost = _quadric_error(qsum, cand[0], cand[1], cand[2])

        if p.normal_flip_penalty > 0.0 or p.aspect_ratio_penalty > 0.0:
            flips = 0
            badness = 0.0
            count = 0
            for fid in self._survivor_faces(i, j):
                a, b, c = self.faces[fid]
                pa = cand if a in (i, j) else self.pos[a]
                pb = cand if b in (i, j) else self.pos[b]
                pc = cand if c in (i, j) else self.pos[c]
                ox, oy, oz = _tri_cross(self.pos[a], self.pos[b], self.pos[c])
                nx, ny, nz = _tri_cross(pa, pb, pc)
                if ox * nx + oy * ny + oz * nz < 0.0:
                    flips += 1
                norm2 = nx * nx + ny * ny + nz * nz
                e2 = (
                    (pb[0] - pa[0]) ** 2 + (pb[1] - pa[1]) ** 2 + (pb[2] - pa[2]) ** 2
                    + (pc[0] - pb[0]) ** 2 + (pc[1] - pb[1]) ** 2 + (pc[2] - pb[2]) ** 2
                    + (pa[0] - pc[0]) ** 2 + (pa[1] - pc[1]) ** 2 + (pa[2] - pc[2]) ** 2
                )
                if e2 > 0.0:
                    quality = _SQRT3_4 * 0.5 * math.sqrt(norm2) / e2
                    badness += 1.0 - min(quality, 1.0)
                else:
                    badness += 1.0
                count += 1
            if flips and p.normal_flip_penalty > 0.0:
                cost += p.normal_flip_penalty * flips * _FLIP_SCALE * self.diag2
            if count and p.aspect_ratio_penalty > 0.0:
                cost += p.aspect_ratio_penalty * (badness / count) * _ASPECT_SCALE * self.diag2

        if p.edge_length_regularizer > 0.0:
            d2 = (pi[0] - pj[0]) ** 2 + (pi[1] - pj[1]) ** 2 + (pi[2] - pj[2]) ** 2
            cost += p.edge_length_regularizer * d2 * _LENGTH_SCALE

        if p.seam_preservation_weight > 0.0:
            damage = 0.0
            for vtx, old in ((i, pi), (j, pj)):
                feats = self.features[vtx]
                if not feats:
                    continue
                move2 = (
                    (cand[0] - old[0]) ** 2
                    + (cand[1] - old[1]) ** 2
                    + (cand[2] - old[2]) ** 2
                )
                if move2 == 0.0:
                    continue
                strength = 0.0
                for other, s in feats.items():
                    if self.vertex_alive[other]:
                        strength += s
                damage += strength * move2
            cost += p.seam_preservation_weight * damage * _SEAM_SCALE

        return cost, cand

    def _survivor_faces(self, i: int, j: int):
        shared = self.vfaces[i] & self.vfaces[j]
        out = []
        for fid in self.vfaces[i] | self.vfaces[j]:
            if self.face_alive[fid] and fid not in shared:
                out.append(fid)
        out.sort()
        return out

    # -- collapse ------------------------------------------------------

    def _legal(self, i: int, j: int) -> bool:
        if not (self.vertex_alive[i] and self.vertex_alive[j]):
            return False
        shared = [
            fid for fid in self.vfaces[i] & self.vfaces[j] if self.face_alive[fid]
        ]
        if not 1 <= len(shared) <= 2:
            return False
        opposite = set()
        for fid in shared:
            for v in self.faces[fid]:
                if v != i and v != j:
                    opposite.add(v)
        common = self._neighbors(i) & self._neighbors(j)
        # Collapsing is topology-safe only when every shared neighbor sits on
        # a face of the edge itself (the standard link condition).
        return common == opposite

    def _collapse(self, i: int, j: int, cand) -> None:
        shared = sorted(
            fid for fid in self.vfaces[i] & self.vfaces[j] if self.face_alive[fid]
        )
        survivors = self._survivor_faces(i, j)
        old_normals = {}
        for fid in survivors:
            a, b, c = self.faces[fid]
            old_normals[fid] = _tri_cross(self.pos[a], self.pos[b], self.pos[c])

        for fid in shared:
            self.face_alive[fid] = False
            self.n_alive -= 1
            self.flipped.discard(fid)
        for fid in sorted(self.vfaces[j]):
            if not self.face_alive[fid]:
                continue
            self.faces[fid] = [i if v == j else v for v in self.faces[fid]]
            self.vfaces[i].add(fid)
        self.vfaces[j] = set()
        self.vertex_alive[j] = False

        self.pos[i] = [cand[0], cand[1], cand[2]]
        qi, qj = self.Q[i], self.Q[j]
        for k in range(10):
            qi[k] += qj[k]

        feats_i = self.features[i]
        for other, s in self.features[j].items():
            if other != i:
                feats_i[other] = max(feats_i.get(other, 0.0), s)
        feats_i.pop(j, None)
        self.features[j] = {}

        for fid in survivors:
            if not self.face_alive[fid]:
                continue
            a, b, c = self.faces[fid]
            ox, oy, oz = old_normals[fid]
            nx, ny, nz = _tri_cross(self.pos[a], self.pos[b], self.pos[c])
            if ox * nx + oy * ny + oz * nz < 0.0:
                self.flipped.add(fid)

        for k in sorted(self._neighbors(i)):
            self._bump(i, k)
            self._push(i, k)

    def run(self, target_faces: int) -> None:
        while self.n_alive > target_faces and self.heap:
            cost, i, j, ver = heapq.heappop(self.heap)
            if self.version.get((i, j)) != ver:
                continue
            if not self._legal(i, j):
                continue
            _, cand = self._evaluate(i, j)
            self._collapse(i, j, cand)

    # -- output --------------------------------------------------------

    def result(self, orig_faces: int, elapsed: float) -> ReductionResult:
        alive_ids = [fid for fid, ok in enumerate(self.face_alive) if ok]
        used = sorted({v for fid in alive_ids for v in self.faces[fid]})
        remap = {v: k for k, v in enumerate(used)}
        vertices = np.array([self.pos[v] for v in used])
        faces = np.array(
            [[remap[v] for v in self.faces[fid]] for fid in alive_ids], dtype=np.int64
        )
        face_ok = np.array([fid not in self.flipped for fid in alive_ids], dtype=bool)
        mesh = TriangleMesh(vertices, faces, face_ok)
        mesh.validate()
        n_out = len(alive_ids)
        flipped_alive = int((~face_ok).sum())
        return ReductionResult(
            mesh=mesh,
            reduction_ratio=(orig_faces - n_out) / orig_faces,
            faulty=flipped_alive / n_out > _FAULTY_FLIP_FRACTION,
            elapsed=elapsed,
        )


def decimate(mesh: TriangleMesh, params: ReductionParams) -> ReductionResult:
    """Reduce ``mesh`` by greedy edge collapses until the face target is met.

    The face target is round((1 - target_fraction) * original face count);
    decimation stops early if no topology-safe collapse remains. Deterministic
    for fixed inputs.
    """
    mesh.validate()
    if mesh.n_faces < 4:
        raise MeshError("refusing to decimate a mesh with fewer than 4 faces")
    if not np.all(np.isfinite(mesh.vertices)):
        raise MeshError("mesh has non-finite vertex coordinates")

    start = time.perf_counter()
    orig = mesh.n_faces
    frac = params.target_fraction()
    # Floor of 4 alive faces keeps the output a valid (non-degenerate) mesh
    # even when the requested removal fraction approaches 1.
    target = max(4, int(math.floor((1.0 - frac) * orig + 0.5)))
    if target >= orig:
        return ReductionResult(
            mesh=TriangleMesh(mesh.vertices.copy(), mesh.faces.copy()),
            reduction_ratio=0.0,
            faulty=False,
            elapsed=time.perf_counter() - start,
        )
    dec = _Decimator(mesh, params)
    dec.run(target)
    return dec.result(orig, time.perf_counter() - start)
