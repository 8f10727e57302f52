"""Acyclicity, minor partitions, torsion, and the manifold invariant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import (
    ChainComplex,
    Frames,
    assemble_complex,
    deviation_labels,
    edge_label,
    triangle_label,
)
from .errors import NotAcyclicError, PartitionError
from .triangulation import MoveRecord, Realization, Triangulation

RANK_TOL = 1e-9
# exponent of the minor of D_k, k = 1..6
EXPONENTS = (-1, 1, -1, 1, -1, 1)

LOG2, LOG3 = math.log(2.0), math.log(3.0)
LOG72 = math.log(72.0)
# (2^8 3^6) per vertex, 2^-16 3^-12 overall
LOG_VERTEX_FACTOR = 8 * LOG2 + 6 * LOG3
LOG_NORMALIZATION = -16 * LOG2 - 12 * LOG3


@dataclass(frozen=True)
class AcyclicityReport:
    dims: tuple[int, ...]
    ranks: tuple[int, ...]
    # exactness at C1..C5: rank D_k + rank D_{k+1} == dim C_k
    exact: tuple[bool, ...]
    acyclic: bool
    # smallest retained / largest discarded singular value, relative to the largest
    margins: tuple[tuple[float, float], ...] = ()

    def as_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "ranks": list(self.ranks),
            "exact": list(self.exact),
            "acyclic": self.acyclic,
            "margins": [list(m) for m in self.margins],
        }


def numerical_rank(m: np.ndarray, tol: float = RANK_TOL) -> tuple[int, float, float]:
    if m.size == 0:
        return 0, 1.0, 0.0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0, 1.0, 0.0
    rel = s / s[0]
    rank = int(np.count_nonzero(rel > tol))
    kept = float(rel[rank - 1]) if rank else 1.0
    dropped = float(rel[rank]) if rank < len(rel) else 0.0
    return rank, kept, dropped


def check_acyclic(c: ChainComplex, tol: float = RANK_TOL) -> AcyclicityReport:
    dims = c.dims
    info = [numerical_rank(c.D(k), tol) for k in range(1, 7)]
    ranks = tuple(i[0] for i in info)
    exact = tuple(ranks[k - 1] + ranks[k] == dims[k] for k in range(1, 6))
    acyclic = all(exact) and ranks[0] == dims[0] and ranks[5] == dims[6]
    return AcyclicityReport(dims, ranks, exact, acyclic, tuple((i[1], i[2]) for i in info))


@dataclass(frozen=True)
class MinorPartition:
    """Row set R_k (labels in C_k) and column set S_{k-1} (labels in C_{k-1})
    of the selected square minor of each D_k, k = 1..6."""

    rows: tuple[tuple[str, ...], ...]
    cols: tuple[tuple[str, ...], ...]

    def R(self, k: int) -> tuple[str, ...]:
        return self.rows[k - 1]

    def S(self, k: int) -> tuple[str, ...]:
        """Columns of D_{k+1}, a subset of C_k."""
        return self.cols[k]

    def check(self, c: ChainComplex) -> None:
        """Raise PartitionError unless the sets are complementary and square."""
        for k in range(1, 7):
            if len(self.R(k)) != len(self.S(k - 1)):
                raise PartitionError(f"minor of D{k} is not square")
        if set(self.S(0)) != set(c.labels[0]) or set(self.R(6)) != set(c.labels[6]):
            raise PartitionError("end spaces must be fully used")
        for k in range(1, 6):
            r, s = set(self.R(k)), set(self.S(k))
            if r & s or (r | s) != set(c.labels[k]) or len(r) + len(s) != c.dims[k]:
                raise PartitionError(f"R_{k} and S_{k} do not partition C_{k}")

    def as_dict(self) -> dict:
        return {f"D{k}": {"rows": list(self.R(k)), "cols": list(self.S(k - 1))} for k in range(1, 7)}


def pivot_columns(
    a: np.ndarray,
    count: int,
    tol: float = RANK_TOL,
    rng: np.random.Generator | None = None,
    spread: float = 0.25,
) -> list[int]:
    """Choose ``count`` columns of ``a`` by Gaussian elimination with full pivoting.

    Deterministic: the largest remaining entry is the pivot, ties going to the
    lowest (row, column). With ``rng`` the pivot is drawn uniformly among the
    entries within a factor ``spread`` of the largest, which yields other
    admissible choices.
    """
    work = np.array(a, dtype=float)
    if count == 0:
        return []
    if work.shape[0] < count or work.shape[1] < count:
        raise PartitionError(f"cannot pick {count} pivots from a {work.shape} block")
    scale = np.abs(work).max() if work.size else 0.0
    active_rows = np.ones(work.shape[0], bool)
    active_cols = np.ones(work.shape[1], bool)
    chosen = []
    for _ in range(count):
        sub = np.abs(work) * np.outer(active_rows, active_cols)
        best = sub.max()
        if best <= tol * scale or best == 0.0:
            raise PartitionError(
                f"pivot search failed after {len(chosen)} of {count} pivots: complex is not exact"
            )
        if rng is None:
            i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        else:
            cand = np.argwhere(sub >= spread * best)
            i, j = cand[rng.integers(len(cand))]
        chosen.append(int(j))
        piv = work[i, j]
        factors = work[:, j] / piv
        factors[i] = 0.0
        factors[~active_rows] = 0.0
        work -= np.outer(factors, work[i])
        active_rows[i] = False
        active_cols[j] = False
    return chosen


def select_partition(
    c: ChainComplex, tol: float = RANK_TOL, rng: np.random.Generator | None = None
) -> MinorPartition:
    """Greedy partition, sweeping D6 down to D1."""
    rows: list = [None] * 6
    cols: list = [None] * 6
    row_labels = list(c.labels[6])
    for k in range(6, 0, -1):
        idx = c.index(k)
        r_idx = [idx[lab] for lab in row_labels]
        block = c.D(k)[r_idx, :]
        chosen = sorted(pivot_columns(block, len(r_idx), tol, rng))
        rows[k - 1] = tuple(row_labels)
        cols[k - 1] = tuple(c.labels[k - 1][j] for j in chosen)
        used = set(cols[k - 1])
        row_labels = [lab for lab in c.labels[k - 1] if lab not in used]
    if row_labels:
        raise PartitionError(f"{len(row_labels)} isometry generators left unmatched")
    return MinorPartition(tuple(rows), tuple(cols))


def log_abs_det(m: np.ndarray) -> float:
    """log|det| via LU with partial pivoting; -inf for singular input."""
    if m.shape[0] == 0:
        return 0.0
    sign, logdet = np.linalg.slogdet(m)
    return float(logdet) if sign != 0 else -math.inf


def minor(c: ChainComplex, k: int, rows: Sequence[str], cols: Sequence[str]) -> np.ndarray:
    ri, ci = c.index(k), c.index(k - 1)
    return c.D(k)[np.ix_([ri[x] for x in rows], [ci[x] for x in cols])]


@dataclass(frozen=True)
class TorsionResult:
    abs_tau: float
    log_abs_tau: float
    partition: MinorPartition
    log_minors: tuple[float, ...]
    exponents: tuple[int, ...] = EXPONENTS

    @property
    def minors(self) -> tuple[float, ...]:
        return tuple(math.exp(x) for x in self.log_minors)

    def as_dict(self) -> dict:
        return {
            "abs_tau": self.abs_tau,
            "log_abs_tau": self.log_abs_tau,
            "minors": [
                {"map": f"D{k}", "abs_minor": m, "log_abs_minor": lm, "exponent": e, "size": len(self.partition.R(k))}
                for k, (m, lm, e) in enumerate(zip(self.minors, self.log_minors, self.exponents), start=1)
            ],
        }


def torsion(c: ChainComplex, p: MinorPartition, det_tol: float = 1e-300) -> TorsionResult:
    p.check(c)
    logs = []
    for k in range(1, 7):
        lg = log_abs_det(minor(c, k, p.R(k), p.S(k - 1)))
        if lg == -math.inf or lg < math.log(det_tol):
            raise PartitionError(f"selected minor of D{k} is singular")
        logs.append(lg)
    log_tau = sum(e * lg for e, lg in zip(EXPONENTS, logs))
    return TorsionResult(math.exp(log_tau), log_tau, p, tuple(logs))


@dataclass(frozen=True)
class GeometryProducts:
    """Logs of the products entering the invariant."""

    log_areas: float
    log_volumes: float
    log_edge_factors: float  # sum of log(72 l^5)
    n_vertices: int

    def as_dict(self) -> dict:
        return {
            "prod_S": math.exp(self.log_areas),
            "prod_V": math.exp(self.log_volumes),
            "prod_72l5": math.exp(self.log_edge_factors),
            "log_prod_S": self.log_areas,
            "log_prod_V": self.log_volumes,
            "log_prod_72l5": self.log_edge_factors,
            "n_vertices": self.n_vertices,
        }


def geometry_products(c: ChainComplex, r: Realization) -> GeometryProducts:
    sk = c.skeleton
    log_s = sum(math.log(r.area(f)) for f in sk.triangles)
    log_v = sum(math.log(abs(r.volume(v))) for v, _ in sk.simplices)
    log_e = sum(LOG72 + 2.5 * math.log(r.squared_length(*e)) for e in sk.edges)
    return GeometryProducts(log_s, log_v, log_e, len(sk.vertices))


def log_invariant(log_tau: float, g: GeometryProducts) -> float:
    return (
        LOG_NORMALIZATION
        + log_tau
        + g.log_areas
        - g.log_volumes
        - g.log_edge_factors
        + g.n_vertices * LOG_VERTEX_FACTOR
    )


@dataclass(frozen=True)
class InvariantResult:
    value: float
    log_value: float
    report: AcyclicityReport
    torsion: TorsionResult
    products: GeometryProducts
    complex: ChainComplex = field(repr=False)


def evaluate(
    t: Triangulation,
    r: Realization,
    frames: Frames | None = None,
    rank_tol: float = RANK_TOL,
    partition: MinorPartition | None = None,
) -> InvariantResult:
    """Full pipeline: complex, acyclicity, partition, torsion, invariant."""
    c = assemble_complex(t, r, frames)
    report = check_acyclic(c, rank_tol)
    if not report.acyclic:
        raise NotAcyclicError(f"complex is not acyclic (ranks {report.ranks}, dims {report.dims})", report)
    p = partition or select_partition(c, rank_tol)
    tr = torsion(c, p)
    g = geometry_products(c, r)
    log_i = log_invariant(tr.log_abs_tau, g)
    return InvariantResult(math.exp(log_i), log_i, report, tr, g, c)


def invariant(t: Triangulation, r: Realization, frames: Frames | None = None, rank_tol: float = RANK_TOL) -> float:
    return evaluate(t, r, frames, rank_tol).value


def log_predicted_ratio(m: MoveRecord) -> float:
    if m.kind is None:
        return 0.0
    edge = lambda Ls: sum(LOG72 + 2.5 * math.log(L) for L in Ls)  # noqa: E731
    logsum = lambda xs: sum(math.log(x) for x in xs)  # noqa: E731
    for name, xs in (
        ("created_lengths", m.created_lengths),
        ("created_volumes", m.created_volumes),
        ("created_areas", m.created_areas),
    ):
        if any(x <= 0 for x in xs):
            raise ValueError(f"move record has non-positive {name}")
    if not m.created_volumes and not m.deleted_volumes:
        raise ValueError("move record carries no simplex volumes")
    return (
        edge(m.created_lengths)
        - edge(m.deleted_lengths)
        + logsum(m.created_volumes)
        - logsum(m.deleted_volumes)
        + logsum(m.deleted_areas)
        - logsum(m.created_areas)
        - m.vertex_delta * LOG_VERTEX_FACTOR
    )


def predicted_ratio(m: MoveRecord) -> float:
    """Factor by which |tau| changes under the move, as forced by invariance."""
    return math.exp(log_predicted_ratio(m))


def quantity_3324(c: ChainComplex, r: Realization, p: MinorPartition) -> float:
    """minor(D3) / minor(D4) * prod V * prod 72 l^5 / prod S, for the minors in ``p``.

    Conserved under 2->4 and 3->3 when the partition is carried across the
    move as in :func:`carry_partition`.
    """
    l3 = log_abs_det(minor(c, 3, p.R(3), p.S(2)))
    l4 = log_abs_det(minor(c, 4, p.R(4), p.S(3)))
    if not (math.isfinite(l3) and math.isfinite(l4)):
        raise PartitionError("selected central minors are singular")
    g = geometry_products(c, r)
    return math.exp(l3 - l4 + g.log_volumes + g.log_edge_factors - g.log_areas)


def carry_partition(p: MinorPartition, m: MoveRecord) -> MinorPartition:
    """Extend a partition of the complex before a 2->4 or 3->3 move to the
    complex after it, touching only the minors of D3 and D4.

    2->4 (new edge AB, new triangles ABC, ABD, ABE, ABF): AB joins the
    columns of D3 and ABF its rows; ABC, ABD, ABE join the columns of D4
    and the three deviation components of AB its rows.
    3->3 (ABC -> DEF): the row ABC of the D3 minor becomes DEF, so ABC must
    be a row of that minor.
    """
    rows = [list(x) for x in p.rows]
    cols = [list(x) for x in p.cols]
    L = m.labels
    if m.kind == "2-4":
        (ab,) = m.created[1]
        tris = {frozenset(f): f for f in m.created[2]}
        abx = [tris[frozenset((L["A"], L["B"], L[x]))] for x in "CDEF"]
        cols[2].append(edge_label(ab))
        rows[2].append(triangle_label(abx[3]))
        cols[3].extend(triangle_label(f) for f in abx[:3])
        rows[3].extend(deviation_labels(ab))
    elif m.kind == "3-3":
        (old,), (new,) = m.deleted[2], m.created[2]
        lab = triangle_label(old)
        if lab not in rows[2]:
            raise PartitionError(f"{lab} is not a row of the D3 minor")
        rows[2][rows[2].index(lab)] = triangle_label(new)
    else:
        raise ValueError(f"cannot carry a partition across a {m.kind} move")
    return MinorPartition(tuple(map(tuple, rows)), tuple(map(tuple, cols)))
