"""Shared fixtures and helpers."""

from __future__ import annotations

import numpy as np
import pytest

from pl4torsion.complex import TRIVIAL_LABELS, assemble_complex, deviation_labels, edge_label
from pl4torsion.torsion import MinorPartition
from pl4torsion.triangulation import Realization, boundary_5simplex_s4, canonical_s4

AXES = "xyzt"


@pytest.fixture
def s4():
    return canonical_s4()


@pytest.fixture
def s4b():
    return boundary_5simplex_s4()


@pytest.fixture(params=["s4-canonical", "s4-boundary-5simplex"])
def builtin(request):
    return canonical_s4() if request.param == "s4-canonical" else boundary_5simplex_s4()


def jitter(r: Realization, rng: np.random.Generator, scale: float = 0.1) -> Realization:
    """Random perturbation of every vertex, plus a random rigid motion and scale."""
    q, rr = np.linalg.qr(rng.standard_normal((4, 4)))
    q = q * np.sign(np.diag(rr))
    s = rng.uniform(0.5, 2.0)
    shift = rng.standard_normal(4)
    return Realization.from_mapping(
        {v: s * q @ (p + scale * rng.standard_normal(4)) + shift for v, p in r.positions.items()}
    )


def frame_axis(frame: np.ndarray, axis: str) -> int:
    """Column of an edge frame along a coordinate axis, or 'bis' for the bisector."""
    if axis == "bis":
        pure = [k for k in range(3) if np.isclose(np.abs(frame[:, k]).max(), 1.0)]
        (k,) = set(range(3)) - set(pure)
        return k
    (k,) = [k for k in range(3) if np.isclose(abs(frame[AXES.index(axis), k]), 1.0)]
    return k


def dv_label(c, edge: str, axis: str) -> str:
    e = tuple(edge)
    return deviation_labels(e)[frame_axis(c.frames.edge[e], axis)]


def reference_partition(c) -> MinorPartition:
    """Hand-picked minors for the canonical S^4 complex with default frames."""
    lab = c.labels
    r1 = ("dx_A", "dy_A", "dz_A", "dt_A", "dy_B", "dz_B", "dt_B", "dz_C", "dt_C", "dt_D")
    s1 = tuple(x for x in lab[1] if x not in r1)
    s4 = [x for e in ("AB", "AC", "AD", "AE") for x in deviation_labels(tuple(e))]
    for e, axes in (("BD", "yt"), ("BE", "yz"), ("CD", "xt"), ("CE", "xz")):
        s4 += [dv_label(c, e, a) for a in axes]
    r4 = tuple(x for x in lab[4] if x not in s4)
    s5 = tuple(f"dsigma_A[{p}]" for p in ("xy", "xz", "xt", "yz", "yt", "zt")) + (
        "dsigma_B[zt]",
        "dsigma_C[zt]",
        "dsigma_D[xy]",
        "dsigma_E[xy]",
    )
    r5 = tuple(x for x in lab[5] if x not in s5)
    rows = (r1, tuple(lab[2]), (), r4, r5, TRIVIAL_LABELS)
    cols = (tuple(lab[0]), s1, (), tuple(lab[3]), tuple(s4), s5)
    return MinorPartition(rows, cols)


@pytest.fixture
def s4_complex(s4):
    t, r = s4
    return assemble_complex(t, r)


__all__ = ["edge_label", "jitter", "reference_partition", "dv_label", "frame_axis"]
