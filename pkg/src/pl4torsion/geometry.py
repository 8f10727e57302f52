"""Euclidean primitives in R^4.

Lengths are carried as *squared* lengths throughout; everything that is a
function of squared lengths only (areas, Cayley-Menger volumes, dihedral
angles) is written with plain arithmetic so that it accepts
:class:`~pl4torsion.dual.DualScalar` arguments as well as floats.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import dual
from .errors import DegeneracyError, NonRealizableError

# Ordering of bivector components (and of rotation generators).
BIVECTOR_PLANES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
)
AXIS_NAMES = "xyzt"

# A 4-simplex is degenerate when |V| < DEGENERACY_TOL * (longest edge)^4.
DEGENERACY_TOL = 1e-12

# Squared edge lengths of a 4-simplex on vertices 0..4, pair order.
SIMPLEX_PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(5), 2))
# Faces of a 4-simplex are named by the two vertices they omit.
FACE_PAIRS: tuple[tuple[int, int], ...] = SIMPLEX_PAIRS


def point4(coords: Sequence[float]) -> np.ndarray:
    p = np.asarray(coords, dtype=float)
    if p.shape != (4,):
        raise ValueError(f"expected 4 coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"non-finite coordinates {coords!r}")
    return p


@lru_cache(maxsize=None)
def levi_civita4() -> np.ndarray:
    """The totally antisymmetric symbol with eps[0,1,2,3] = 1."""
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        eps[perm] = permutation_sign(perm)
    eps.flags.writeable = False
    return eps


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct sortable items."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def bivector_matrix(components: Sequence[float]) -> np.ndarray:
    """Antisymmetric 4x4 matrix from the 6 components (12,13,14,23,24,34)."""
    m = np.zeros((4, 4))
    for c, (a, b) in zip(components, BIVECTOR_PLANES):
        m[a, b] = c
        m[b, a] = -c
    return m


def bivector_components(m: np.ndarray) -> np.ndarray:
    return np.array([m[a, b] for a, b in BIVECTOR_PLANES])


def bivector_apply(sigma: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """Contraction w_b = sum_a v_a sigma_ab.

    With this convention the generator with sigma_12 = 1 sends e_x to e_y
    and e_y to -e_x.
    """
    return np.asarray(v, dtype=float) @ bivector_matrix(sigma)


def squared_length(p: Sequence[float], q: Sequence[float]) -> float:
    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    return float(d @ d)


def _check_nonnegative(*lengths) -> None:
    for x in lengths:
        if dual.value(x) < 0:
            raise ValueError(f"negative squared length {dual.value(x)!r}")


def triangle_area(L1, L2, L3, rtol: float = 1e-12):
    """Area of a triangle from its three squared side lengths (Heron)."""
    _check_nonnegative(L1, L2, L3)
    disc = 2 * (L1 * L2 + L2 * L3 + L3 * L1) - (L1 * L1 + L2 * L2 + L3 * L3)
    scale = max(dual.value(L1), dual.value(L2), dual.value(L3)) ** 2
    if dual.value(disc) < -rtol * scale:
        raise NonRealizableError(
            f"squared lengths ({L1}, {L2}, {L3}) violate the triangle inequality"
        )
    if dual.value(disc) <= 0:
        return 0 * disc
    return dual.sqrt(disc) / 4


def signed_volume4(p0, p1, p2, p3, p4) -> float:
    base = np.asarray(p0, dtype=float)
    edges = np.array([np.asarray(p, dtype=float) - base for p in (p1, p2, p3, p4)])
    return float(np.linalg.det(edges)) / 24.0


def cayley_menger_volume(k: int, squared_lengths: Sequence[float], rtol: float = 1e-12) -> float:
    """Unsigned k-volume of a k-simplex from its squared edge lengths.

    ``squared_lengths`` lists the k(k+1)/2 pairs (i, j), i < j, in
    lexicographic order.
    """
    if not 1 <= k <= 4:
        raise ValueError(f"simplex dimension must be 1..4, got {k}")
    pairs = list(itertools.combinations(range(k + 1), 2))
    if len(squared_lengths) != len(pairs):
        raise ValueError(f"a {k}-simplex needs {len(pairs)} squared lengths")
    _check_nonnegative(*squared_lengths)
    cm = np.ones((k + 2, k + 2))
    cm[0, 0] = 0.0
    for (i, j), L in zip(pairs, squared_lengths):
        cm[i + 1, j + 1] = cm[j + 1, i + 1] = L
    for i in range(k + 1):
        cm[i + 1, i + 1] = 0.0
    coeff = (-1) ** (k + 1) / (2**k * math.factorial(k) ** 2)
    v2 = coeff * float(np.linalg.det(cm))
    scale = max(squared_lengths) ** k
    if v2 < -rtol * scale:
        raise NonRealizableError(f"negative squared {k}-volume {v2!r}")
    return math.sqrt(max(v2, 0.0))


def _gram(sq: Sequence, base: int, others: Sequence[int]):
    """Gram matrix of edge vectors from ``base`` to ``others`` (5 vertices)."""
    def L(i, j):
        if i == j:
            return 0.0
        a, b = (i, j) if i < j else (j, i)
        return sq[SIMPLEX_PAIRS.index((a, b))]

    return [
        [
            (L(base, i) + L(base, j) - L(i, j)) / 2 if i != j else L(base, i)
            for j in others
        ]
        for i in others
    ]


def _ldl_inverse(G):
    """Inverse of a symmetric positive definite matrix via G = L D L^T.

    Square-root free and pivot free, so it stays differentiable through
    DualScalar arithmetic. Returns (inverse, diagonal pivots).
    """
    n = len(G)
    Lo = [[0.0] * n for _ in range(n)]
    D = [0.0] * n
    for j in range(n):
        d = G[j][j]
        for k in range(j):
            d = d - Lo[j][k] * Lo[j][k] * D[k]
        if dual.value(d) <= 0:
            raise DegeneracyError("Gram matrix is not positive definite")
        D[j] = d
        Lo[j][j] = 1.0
        for i in range(j + 1, n):
            s = G[i][j]
            for k in range(j):
                s = s - Lo[i][k] * Lo[j][k] * D[k]
            Lo[i][j] = s / d
    # Unit lower-triangular inverse by forward substitution.
    Li = [[0.0] * n for _ in range(n)]
    for i in range(n):
        Li[i][i] = 1.0
        for j in range(i):
            s = 0.0
            for k in range(j, i):
                s = s - Lo[i][k] * Li[k][j]
            Li[i][j] = s
    H = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = 0.0
            for k in range(max(i, j), n):
                s = s + Li[k][i] * Li[k][j] / D[k]
            H[i][j] = s
            H[j][i] = s
    return H, D


def check_simplex_nondegenerate(sq: Sequence, tol: float = DEGENERACY_TOL) -> float:
    """Return the unsigned 4-volume, raising if below the scale-relative tolerance."""
    G = _gram(sq, 0, (1, 2, 3, 4))
    vals = [[dual.value(x) for x in row] for row in G]
    det = float(np.linalg.det(np.array(vals)))
    vol = math.sqrt(max(det, 0.0)) / 24.0
    longest = max(dual.value(x) for x in sq)
    if vol < tol * longest**2:
        raise DegeneracyError(f"degenerate 4-simplex (volume {vol:.3e})")
    return vol


def dihedral_angles(sq: Sequence, tol: float = DEGENERACY_TOL) -> dict:
    """All ten interior dihedral angles of a 4-simplex.

    Keys are the pairs (l, m) of omitted vertices: the angle sits at the
    triangle on the remaining three vertices, between the facets opposite
    l and m. With vertex 0 as base, the facet normals are the gradients of
    the barycentric coordinates, whose inner products form the inverse
    Gram matrix, so no explicit embedding is needed.
    """
    if len(sq) != 10:
        raise ValueError("a 4-simplex has 10 squared edge lengths")
    check_simplex_nondegenerate(sq, tol)
    H, _ = _ldl_inverse(_gram(sq, 0, (1, 2, 3, 4)))

    def inner(a, b):
        # gradients of barycentric coordinates; grad(lambda_0) = -sum of others
        if a == 0 and b == 0:
            s = 0.0
            for i in range(4):
                for j in range(4):
                    s = s + H[i][j]
            return s
        if a == 0 or b == 0:
            c = b if a == 0 else a
            s = 0.0
            for i in range(4):
                s = s - H[i][c - 1]
            return s
        return H[a - 1][b - 1]

    angles = {}
    for l, m in FACE_PAIRS:
        c = -inner(l, m) / dual.sqrt(inner(l, l) * inner(m, m))
        angles[(l, m)] = dual.acos(c)
    return angles


def dihedral_angle(sq: Sequence, face: tuple[int, int], tol: float = DEGENERACY_TOL):
    l, m = sorted(face)
    if l == m or not 0 <= l < 5 or not 0 <= m < 5:
        raise ValueError(f"bad face index pair {face!r}")
    return dihedral_angles(sq, tol)[(l, m)]


def simplex_squared_lengths(points: Sequence[Sequence[float]]) -> list[float]:
    return [squared_length(points[i], points[j]) for i, j in SIMPLEX_PAIRS]


def dihedral_jacobian(sq: Sequence[float], tol: float = DEGENERACY_TOL) -> dict:
    """Angles and their gradients with respect to the 10 squared lengths."""
    seeded = dual.DualScalar.seeds(list(sq))
    return {
        face: (theta.value, theta.grad)
        for face, theta in dihedral_angles(seeded, tol).items()
    }
