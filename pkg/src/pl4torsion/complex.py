"""Assembly of the eight-term chain complex of a realized triangulation.

Spaces, in order::

    C0  isometry algebra e4        10   (4 translations, 6 rotations)
    C1  vertex coordinates dx      4 per vertex
    C2  squared edge lengths dL    1 per edge
    C3  deficit angles dw          1 per triangle
    C4  edge deviations dv (dual)  3 per edge
    C5  vertex deviations (dual)   6 per vertex
    C6  trivial deviations (dual)  10  (constant bivector dtau, vector ds)

with maps D1..D6 = M1, M2, M3, M4^T, M5^T, M6^T.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from . import geometry
from .geometry import AXIS_NAMES, BIVECTOR_PLANES
from .triangulation import Realization, Skeleton, Triangulation, build_skeleton, check_realization

PLANE_NAMES = tuple(AXIS_NAMES[a] + AXIS_NAMES[b] for a, b in BIVECTOR_PLANES)
ISOMETRY_LABELS = tuple(f"T{a}" for a in AXIS_NAMES) + tuple(f"R{p}" for p in PLANE_NAMES)
TRIVIAL_LABELS = tuple(f"dtau_{p}" for p in PLANE_NAMES) + tuple(f"ds_{a}" for a in AXIS_NAMES)


@dataclass(frozen=True)
class Frames:
    """Orthonormal bases: a 4x4 orthogonal matrix per vertex (columns are
    the axes) and a 4x3 matrix per edge spanning the edge's orthogonal
    complement."""

    vertex: Mapping[str, np.ndarray]
    edge: Mapping[tuple[str, str], np.ndarray]

    def check(self, r: Realization, tol: float = 1e-12) -> None:
        for v, F in self.vertex.items():
            if np.abs(F.T @ F - np.eye(4)).max() > tol:
                raise ValueError(f"vertex frame at {v} is not orthogonal")
        for (a, b), E in self.edge.items():
            d = r[b] - r[a]
            d = d / np.linalg.norm(d)
            if np.abs(E.T @ E - np.eye(3)).max() > tol or np.abs(d @ E).max() > tol:
                raise ValueError(f"edge frame at {a}{b} is not orthonormal to the edge")


def edge_frame(direction: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of ``direction``.

    Drops the coordinate axis most aligned with the edge (lowest index on
    ties) and Gram-Schmidts the remaining axes in index order.
    """
    d = direction / np.linalg.norm(direction)
    mags = np.abs(d)
    drop = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    basis = [d]
    for k in range(4):
        if k == drop:
            continue
        w = np.eye(4)[k]
        for b in basis:
            w = w - (w @ b) * b
        basis.append(w / np.linalg.norm(w))
    return np.column_stack(basis[1:])


def default_frames(t: Triangulation, r: Realization, sk: Skeleton | None = None) -> Frames:
    sk = sk or build_skeleton(t)
    vertex = {v: np.eye(4) for v in sk.vertices}
    edge = {e: edge_frame(r[e[1]] - r[e[0]]) for e in sk.edges}
    return Frames(MappingProxyType(vertex), MappingProxyType(edge))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, rr = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(rr))


def random_frames(t: Triangulation, r: Realization, rng: np.random.Generator) -> Frames:
    """Default frames rotated by random orthogonal matrices (for testing)."""
    base = default_frames(t, r)
    vertex = {v: random_orthogonal(4, rng) for v in base.vertex}
    edge = {e: E @ random_orthogonal(3, rng) for e, E in base.edge.items()}
    return Frames(MappingProxyType(vertex), MappingProxyType(edge))


def _generator(plane: int) -> np.ndarray:
    c = np.zeros(6)
    c[plane] = 1.0
    return geometry.bivector_matrix(c)


def _local_components(F: np.ndarray, ambient: np.ndarray) -> np.ndarray:
    """Bivector components in the frame whose columns are F."""
    return geometry.bivector_components(F.T @ ambient @ F)


def build_m1(t: Triangulation, r: Realization, frames: Frames, sk: Skeleton | None = None) -> np.ndarray:
    """Infinitesimal isometries -> vertex displacements (4*N0 x 10)."""
    sk = sk or build_skeleton(t)
    m = np.zeros((4 * len(sk.vertices), 10))
    for i, v in enumerate(sk.vertices):
        F = frames.vertex[v]
        rows = slice(4 * i, 4 * i + 4)
        m[rows, :4] = F.T
        for p in range(6):
            m[rows, 4 + p] = F.T @ (r[v] @ _generator(p))
    return m


def build_m2(t: Triangulation, r: Realization, frames: Frames, sk: Skeleton | None = None) -> np.ndarray:
    """Vertex displacements -> squared edge length differentials (N1 x 4*N0)."""
    sk = sk or build_skeleton(t)
    col = {v: i for i, v in enumerate(sk.vertices)}
    m = np.zeros((len(sk.edges), 4 * len(sk.vertices)))
    for j, (a, b) in enumerate(sk.edges):
        l = r[b] - r[a]
        m[j, 4 * col[b]:4 * col[b] + 4] = 2 * l @ frames.vertex[b]
        m[j, 4 * col[a]:4 * col[a] + 4] = -2 * l @ frames.vertex[a]
    return m


def simplex_weight(r: Realization, verts, sign: int) -> int:
    """Combinatorial orientation times orientation of the image."""
    return sign * (1 if r.volume(verts) > 0 else -1)


def build_m3(t: Triangulation, r: Realization, sk: Skeleton | None = None) -> np.ndarray:
    """Squared edge lengths -> deficit angles (N2 x N1), by forward-mode AD."""
    sk = sk or build_skeleton(t)
    m = np.zeros((len(sk.triangles), len(sk.edges)))
    for verts, sign in sk.simplices:
        eps = simplex_weight(r, verts, sign)
        cols = [sk.edge_index[(verts[i], verts[j])] for i, j in geometry.SIMPLEX_PAIRS]
        jac = geometry.dihedral_jacobian(r.simplex_squared_lengths(verts))
        for (l, mm), (_, grad) in jac.items():
            tri = tuple(verts[k] for k in range(5) if k not in (l, mm))
            m[sk.triangle_index[tri], cols] += eps * grad
    return m


def inplane_normal(r: Realization, edge, opposite: str) -> np.ndarray:
    """Unit normal to ``edge`` within its triangle, pointing away from ``opposite``."""
    p, q = r[edge[0]], r[edge[1]]
    d = q - p
    w = (p + q) / 2 - r[opposite]
    w = w - (w @ d) / (d @ d) * d
    return w / np.linalg.norm(w)


def build_m4(t: Triangulation, r: Realization, frames: Frames, sk: Skeleton | None = None) -> np.ndarray:
    """Edge deviations -> triangle area differentials (N2 x 3*N1)."""
    sk = sk or build_skeleton(t)
    m = np.zeros((len(sk.triangles), 3 * len(sk.edges)))
    for i, tri in enumerate(sk.triangles):
        for k, opposite in enumerate(tri):
            edge = tuple(v for v in tri if v != opposite)
            j = sk.edge_index[edge]
            n = inplane_normal(r, edge, opposite)
            length = np.sqrt(r.squared_length(*edge))
            m[i, 3 * j:3 * j + 3] = length * (n @ frames.edge[edge])
    return m


def build_m5(t: Triangulation, r: Realization, frames: Frames, sk: Skeleton | None = None) -> np.ndarray:
    """Vertex deviations -> edge deviations (3*N1 x 6*N0)."""
    sk = sk or build_skeleton(t)
    col = {v: i for i, v in enumerate(sk.vertices)}
    gens = [_generator(p) for p in range(6)]
    m = np.zeros((3 * len(sk.edges), 6 * len(sk.vertices)))
    for j, (a, b) in enumerate(sk.edges):
        l = r[b] - r[a]
        L = l @ l
        E = frames.edge[(a, b)]
        for v, s in ((a, 1.0), (b, -1.0)):
            F = frames.vertex[v]
            for p in range(6):
                dv = s * (l @ (F @ gens[p] @ F.T)) / L
                m[3 * j:3 * j + 3, 6 * col[v] + p] = dv @ E
    return m


def build_m6(t: Triangulation, r: Realization, frames: Frames | None = None, sk: Skeleton | None = None) -> np.ndarray:
    """Trivial deviations (dtau, ds) -> vertex deviations (6*N0 x 10)."""
    sk = sk or build_skeleton(t)
    eps = geometry.levi_civita4()
    m = np.zeros((6 * len(sk.vertices), 10))
    for i, v in enumerate(sk.vertices):
        F = frames.vertex[v] if frames is not None else np.eye(4)
        rows = slice(6 * i, 6 * i + 6)
        for p in range(6):
            m[rows, p] = _local_components(F, _generator(p))
        for delta in range(4):
            ambient = np.einsum("abg,g->ab", eps[:, :, :, delta], r[v])
            m[rows, 6 + delta] = _local_components(F, ambient)
    return m


@dataclass(frozen=True)
class ChainComplex:
    """Seven based spaces and the six maps between them.

    ``maps[k - 1]`` is D_k : C_{k-1} -> C_k, an array of shape
    (dim C_k, dim C_{k-1}).
    """

    labels: tuple[tuple[str, ...], ...]
    maps: tuple[np.ndarray, ...]
    frames: Frames
    skeleton: Skeleton

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.labels)

    def D(self, k: int) -> np.ndarray:
        return self.maps[k - 1]

    def composition_norms(self) -> list[float]:
        """||D_{k+1} D_k|| / (||D_k|| ||D_{k+1}||) for k = 1..5 (0 if a factor vanishes)."""
        out = []
        for k in range(1, 6):
            a, b = self.D(k), self.D(k + 1)
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            out.append(0.0 if na == 0 or nb == 0 else float(np.linalg.norm(b @ a) / (na * nb)))
        return out

    def index(self, space: int) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels[space])}


def basis_labels(sk: Skeleton) -> tuple[tuple[str, ...], ...]:
    c1 = tuple(f"d{a}_{v}" for v in sk.vertices for a in AXIS_NAMES)
    c2 = tuple(edge_label(e) for e in sk.edges)
    c3 = tuple(triangle_label(f) for f in sk.triangles)
    c4 = tuple(lab for e in sk.edges for lab in deviation_labels(e))
    c5 = tuple(f"dsigma_{v}[{p}]" for v in sk.vertices for p in PLANE_NAMES)
    return (ISOMETRY_LABELS, c1, c2, c3, c4, c5, TRIVIAL_LABELS)


def _join(face) -> str:
    return "".join(face) if all(len(x) == 1 for x in face) else "-".join(face)


def assemble_complex(
    t: Triangulation, r: Realization, frames: Frames | None = None, check: bool = True
) -> ChainComplex:
    sk = build_skeleton(t)
    if check:
        check_realization(t, r, sk)
    frames = frames or default_frames(t, r, sk)
    m1 = build_m1(t, r, frames, sk)
    m2 = build_m2(t, r, frames, sk)
    m3 = build_m3(t, r, sk)
    m4 = build_m4(t, r, frames, sk)
    m5 = build_m5(t, r, frames, sk)
    m6 = build_m6(t, r, frames, sk)
    return ChainComplex(basis_labels(sk), (m1, m2, m3, m4.T, m5.T, m6.T), frames, sk)


def edge_label(e) -> str:
    return "dL_" + _join(e)


def triangle_label(f) -> str:
    return "dw_" + _join(f)


def deviation_labels(e) -> tuple[str, str, str]:
    return tuple(f"dv_{_join(e)}[{k}]" for k in range(3))


def alternating_dimension_sum(sk: Skeleton) -> int:
    """20 - 10 N0 + 4 N1 - N2: the Euler characteristic of the dimension sequence."""
    n0, n1, n2 = len(sk.vertices), len(sk.edges), len(sk.triangles)
    return 20 - 10 * n0 + 4 * n1 - n2

