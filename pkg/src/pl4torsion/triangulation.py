"""Closed oriented triangulated 4-pseudomanifolds, their realizations in R^4,
and the Pachner (bistellar) moves 1<->5, 2<->4 and 3->3.

Faces of dimension 0..3 are identified by their vertex sets. 4-simplices are
identified by position in the simplex list, because the two-simplex sphere
uses the same vertex set twice (with opposite orientations).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from . import geometry
from .errors import DegeneracyError, MoveRejected, ValidationError

MOVE_KINDS = ("1-5", "5-1", "2-4", "4-2", "3-3")

# Realization thresholds, relative to the longest edge of the object checked.
EDGE_TOL = 1e-12
AREA_TOL = 1e-12


@dataclass(frozen=True)
class Triangulation:
    """Vertex identifiers plus oriented 4-simplices.

    Each simplex is stored as (vertex ids sorted by vertex order, sign); the
    sign is the orientation relative to that sorted order.
    """

    vertices: tuple[str, ...]
    simplices: tuple[tuple[tuple[str, ...], int], ...]

    @classmethod
    def from_simplices(cls, vertices: Sequence[str], simplices) -> "Triangulation":
        vertices = tuple(str(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex identifiers")
        order = {v: i for i, v in enumerate(vertices)}
        normalized = []
        for verts, sign in simplices:
            verts = tuple(str(v) for v in verts)
            if len(verts) != 5 or len(set(verts)) != 5:
                raise ValidationError(f"simplex {verts} needs 5 distinct vertices")
            if sign not in (1, -1):
                raise ValidationError(f"orientation sign must be +1 or -1, got {sign!r}")
            missing = [v for v in verts if v not in order]
            if missing:
                raise ValidationError(f"simplex {verts} references undeclared {missing}")
            keys = [order[v] for v in verts]
            parity = geometry.permutation_sign(keys)
            normalized.append((tuple(sorted(verts, key=order.__getitem__)), sign * parity))
        return cls(vertices, tuple(normalized))

    def vertex_order(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def sort_face(self, verts) -> tuple[str, ...]:
        order = self.vertex_order()
        return tuple(sorted(verts, key=order.__getitem__))

    def canonical(self) -> tuple:
        """Signed simplices as a sorted tuple, for set-style equality."""
        order = self.vertex_order()
        return tuple(
            sorted(self.simplices, key=lambda s: ([order[v] for v in s[0]], -s[1]))
        )

    def same_as(self, other: "Triangulation") -> bool:
        return set(self.vertices) == set(other.vertices) and sorted(
            (tuple(sorted(s)), g) for s, g in self.simplices
        ) == sorted((tuple(sorted(s)), g) for s, g in other.simplices)


@dataclass(frozen=True)
class Skeleton:
    """All faces with deterministic indices and the incidences between them."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    triangles: tuple[tuple[str, str, str], ...]
    tetrahedra: tuple[tuple[str, ...], ...]
    simplices: tuple[tuple[tuple[str, ...], int], ...]
    edge_index: Mapping[tuple, int]
    triangle_index: Mapping[tuple, int]
    tet_index: Mapping[tuple, int]
    # face -> indices of incident 4-simplices
    triangle_simplices: Mapping[tuple, tuple[int, ...]]
    edge_simplices: Mapping[tuple, tuple[int, ...]]
    tet_simplices: Mapping[tuple, tuple[int, ...]]
    vertex_simplices: Mapping[str, tuple[int, ...]]
    edge_triangles: Mapping[tuple, tuple[int, ...]]

    @property
    def counts(self) -> tuple[int, int, int, int, int]:
        return (
            len(self.vertices),
            len(self.edges),
            len(self.triangles),
            len(self.tetrahedra),
            len(self.simplices),
        )

    def faces(self, dim: int) -> tuple:
        return (
            tuple((v,) for v in self.vertices),
            self.edges,
            self.triangles,
            self.tetrahedra,
            tuple(s for s, _ in self.simplices),
        )[dim]


def build_skeleton(t: Triangulation) -> Skeleton:
    order = t.vertex_order()
    seen = set()
    for verts, sign in t.simplices:
        if (verts, sign) in seen:
            raise ValidationError(f"duplicate 4-simplex {verts} with sign {sign:+d}")
        seen.add((verts, sign))

    incid: list[dict] = [dict() for _ in range(5)]
    for idx, (verts, _) in enumerate(t.simplices):
        for k in range(1, 5):
            for face in itertools.combinations(verts, k):
                incid[k - 1].setdefault(face, []).append(idx)

    def key(face):
        return [order[v] for v in face]

    def sorted_faces(d):
        return tuple(sorted(d, key=key))

    edges = sorted_faces(incid[1])
    triangles = sorted_faces(incid[2])
    tets = sorted_faces(incid[3])
    edge_tris: dict = {e: [] for e in edges}
    for i, tri in enumerate(triangles):
        for e in itertools.combinations(tri, 2):
            edge_tris[e].append(i)

    freeze = lambda d: MappingProxyType({k: tuple(v) for k, v in d.items()})  # noqa: E731
    return Skeleton(
        vertices=tuple(v for v in t.vertices if (v,) in incid[0]),
        edges=edges,
        triangles=triangles,
        tetrahedra=tets,
        simplices=t.simplices,
        edge_index=MappingProxyType({e: i for i, e in enumerate(edges)}),
        triangle_index=MappingProxyType({f: i for i, f in enumerate(triangles)}),
        tet_index=MappingProxyType({f: i for i, f in enumerate(tets)}),
        triangle_simplices=freeze(incid[2]),
        edge_simplices=freeze(incid[1]),
        tet_simplices=freeze(incid[3]),
        vertex_simplices=MappingProxyType({v[0]: tuple(s) for v, s in incid[0].items()}),
        edge_triangles=freeze(edge_tris),
    )


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    problems: tuple[str, ...]
    violating_tetrahedra: tuple[tuple[str, ...], ...]


def facet_orientations(verts: Sequence[str], sign: int):
    """Induced (facet, sign) pairs of an oriented simplex with sorted vertices."""
    for i in range(len(verts)):
        yield verts[:i] + verts[i + 1:], sign * (-1) ** i


def validate_closed_oriented(t: Triangulation) -> ValidationReport:
    problems = []
    bad = []
    unused = set(t.vertices)
    seen = set()
    induced: dict = {}
    for verts, sign in t.simplices:
        unused.difference_update(verts)
        if (verts, sign) in seen:
            problems.append(f"duplicate 4-simplex {' '.join(verts)} ({sign:+d})")
        seen.add((verts, sign))
        for facet, s in facet_orientations(verts, sign):
            induced.setdefault(facet, []).append(s)
    if unused:
        problems.append(f"vertices in no simplex: {sorted(unused)}")
    if not t.simplices:
        problems.append("no simplices")
    order = t.vertex_order()
    for facet in sorted(induced, key=lambda f: [order[v] for v in f]):
        signs = induced[facet]
        if len(signs) != 2:
            bad.append(facet)
            problems.append(
                f"tetrahedron {' '.join(facet)} lies in {len(signs)} simplices (need 2): not closed"
            )
        elif signs[0] + signs[1] != 0:
            bad.append(facet)
            problems.append(
                f"tetrahedron {' '.join(facet)} has equal induced orientations: not oriented"
            )
    return ValidationReport(not problems, tuple(problems), tuple(bad))


@dataclass(frozen=True)
class Realization:
    """Vertex positions in R^4; images may overlap or fold."""

    positions: Mapping[str, np.ndarray]

    @classmethod
    def from_mapping(cls, positions: Mapping[str, Sequence[float]]) -> "Realization":
        pts = {}
        for v, p in positions.items():
            arr = geometry.point4(p)
            arr.flags.writeable = False
            pts[str(v)] = arr
        return cls(MappingProxyType(pts))

    def __getitem__(self, v: str) -> np.ndarray:
        return self.positions[v]

    def scaled(self, s: float) -> "Realization":
        return Realization.from_mapping({v: s * p for v, p in self.positions.items()})

    def squared_length(self, a: str, b: str) -> float:
        return geometry.squared_length(self[a], self[b])

    def area(self, tri: Sequence[str]) -> float:
        a, b, c = tri
        return geometry.triangle_area(
            self.squared_length(b, c), self.squared_length(a, c), self.squared_length(a, b)
        )

    def volume(self, verts: Sequence[str]) -> float:
        """Signed volume of the image with the vertices in the given order."""
        return geometry.signed_volume4(*(self[v] for v in verts))

    def simplex_squared_lengths(self, verts: Sequence[str]) -> list[float]:
        return geometry.simplex_squared_lengths([self[v] for v in verts])


def check_realization(t: Triangulation, r: Realization, sk: Skeleton | None = None) -> None:
    """Raise DegeneracyError if some edge, triangle or 4-simplex is too small."""
    sk = sk or build_skeleton(t)
    missing = [v for v in sk.vertices if v not in r.positions]
    if missing:
        raise ValidationError(f"vertices without coordinates: {missing}")
    for a, b in sk.edges:
        L = r.squared_length(a, b)
        if L <= 0.0:
            raise DegeneracyError(f"edge {a}{b} has zero length")
    for tri in sk.triangles:
        Ls = [r.squared_length(*e) for e in itertools.combinations(tri, 2)]
        if r.area(tri) < AREA_TOL * max(Ls):
            raise DegeneracyError(f"triangle {''.join(tri)} is degenerate")
    for verts, _ in sk.simplices:
        geometry.check_simplex_nondegenerate(r.simplex_squared_lengths(verts))


def canonical_s4() -> tuple[Triangulation, Realization]:
    """Two copies of the corner simplex ABCDE glued along their boundary."""
    verts = ("A", "B", "C", "D", "E")
    t = Triangulation.from_simplices(verts, [(verts, 1), (verts, -1)])
    r = Realization.from_mapping(
        {"A": (0, 0, 0, 0), "B": (1, 0, 0, 0), "C": (0, 1, 0, 0), "D": (0, 0, 1, 0), "E": (0, 0, 0, 1)}
    )
    return t, r


BOUNDARY_5SIMPLEX_COORDS = {
    "A": (0.0, 0.0, 0.0, 0.0),
    "B": (1.0, 0.1, -0.2, 0.05),
    "C": (0.15, 1.1, 0.1, -0.1),
    "D": (-0.1, 0.2, 0.9, 0.15),
    "E": (0.05, -0.15, 0.2, 1.05),
    "F": (0.7, 0.6, 0.5, 0.65),
}


def boundary_5simplex_s4() -> tuple[Triangulation, Realization]:
    """The six facets of a 5-simplex, with signs (-1)^i for the facet omitting vertex i."""
    verts = tuple(BOUNDARY_5SIMPLEX_COORDS)
    simplices = [
        (verts[:i] + verts[i + 1:], (-1) ** i) for i in range(len(verts))
    ]
    t = Triangulation.from_simplices(verts, simplices)
    r = Realization.from_mapping(BOUNDARY_5SIMPLEX_COORDS)
    check_realization(t, r)
    return t, r


@dataclass(frozen=True)
class MoveRecord:
    """One Pachner move with the geometry needed to predict the torsion ratio.

    ``labels`` maps the letters A..F to vertex ids: the removed/added
    simplices are named after the letter they omit, so ``volumes['F']`` is
    the volume of the simplex on every label except F.
    """

    kind: str | None
    labels: Mapping[str, str] = field(default_factory=dict)
    created: tuple[tuple[tuple[str, ...], ...], ...] = ((), (), (), (), ())
    deleted: tuple[tuple[tuple[str, ...], ...], ...] = ((), (), (), (), ())
    created_simplices: tuple[tuple[tuple[str, ...], int], ...] = ()
    deleted_simplices: tuple[tuple[tuple[str, ...], int], ...] = ()
    # |V| of created / deleted 4-simplices, in the order above
    created_volumes: tuple[float, ...] = ()
    deleted_volumes: tuple[float, ...] = ()
    # squared lengths of created / deleted edges
    created_lengths: tuple[float, ...] = ()
    deleted_lengths: tuple[float, ...] = ()
    created_areas: tuple[float, ...] = ()
    deleted_areas: tuple[float, ...] = ()
    volumes: Mapping[str, float] = field(default_factory=dict)
    vertex_delta: int = 0

    @classmethod
    def identity(cls) -> "MoveRecord":
        return cls(kind=None)

    def inverse(self) -> "MoveRecord":
        inv = {"1-5": "5-1", "5-1": "1-5", "2-4": "4-2", "4-2": "2-4", "3-3": "3-3", None: None}
        return MoveRecord(
            kind=inv[self.kind],
            labels=self.labels,
            created=self.deleted,
            deleted=self.created,
            created_simplices=self.deleted_simplices,
            deleted_simplices=self.created_simplices,
            created_volumes=self.deleted_volumes,
            deleted_volumes=self.created_volumes,
            created_lengths=self.deleted_lengths,
            deleted_lengths=self.created_lengths,
            created_areas=self.deleted_areas,
            deleted_areas=self.created_areas,
            volumes=self.volumes,
            vertex_delta=-self.vertex_delta,
        )

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "labels": dict(self.labels),
            "created": [[list(f) for f in fs] for fs in self.created],
            "deleted": [[list(f) for f in fs] for fs in self.deleted],
            "created_volumes": list(self.created_volumes),
            "deleted_volumes": list(self.deleted_volumes),
            "created_lengths": list(self.created_lengths),
            "deleted_lengths": list(self.deleted_lengths),
            "created_areas": list(self.created_areas),
            "deleted_areas": list(self.deleted_areas),
        }


def _faces_of(simplices, dim: int) -> set:
    out = set()
    for verts in simplices:
        out.update(frozenset(f) for f in itertools.combinations(verts, dim + 1))
    return out


def _bistellar(
    t: Triangulation,
    r: Realization,
    kind: str,
    sigma: Sequence[str],
    tau: Sequence[str],
    old_indices: Sequence[int],
    label_order: Sequence[str],
    new_position: np.ndarray | None = None,
    min_quality: float = geometry.DEGENERACY_TOL,
) -> tuple[Triangulation, Realization, MoveRecord]:
    """Replace the simplices of the 5-simplex boundary that contain ``sigma``
    (those at ``old_indices``) by the ones that contain ``tau``."""
    delta = tuple(sigma) + tuple(tau)
    if len(set(delta)) != 6:
        raise MoveRejected("move needs six distinct vertices")

    vertices = list(t.vertices)
    if new_position is not None:
        vertices.append(tau[0])
    order = {v: i for i, v in enumerate(vertices)}
    delta_sorted = sorted(delta, key=order.__getitem__)
    pos = {v: i for i, v in enumerate(delta_sorted)}

    # Sign of each old simplex against the boundary orientation of delta.
    eps = None
    for idx in old_indices:
        verts, sign = t.simplices[idx]
        (omitted,) = set(delta) - set(verts)
        e = sign * (-1) ** pos[omitted]
        if eps is None:
            eps = e
        elif e != eps:
            raise MoveRejected("old simplices are not coherently oriented")

    new_simplices = []
    for s in sigma:
        verts = tuple(v for v in delta_sorted if v != s)
        new_simplices.append((verts, -eps * (-1) ** pos[s]))

    kept = [s for i, s in enumerate(t.simplices) if i not in set(old_indices)]
    old = [t.simplices[i] for i in old_indices]

    removed_vertex = sigma[0] if len(sigma) == 1 else None
    if removed_vertex is not None:
        if any(removed_vertex in verts for verts, _ in kept):
            raise MoveRejected(f"vertex {removed_vertex} is not confined to the star")
        vertices.remove(removed_vertex)

    t2 = Triangulation(tuple(vertices), tuple(kept) + tuple(new_simplices))
    positions = dict(r.positions)
    if new_position is not None:
        positions[tau[0]] = new_position
    if removed_vertex is not None:
        del positions[removed_vertex]
    r2 = Realization.from_mapping(positions)

    report = validate_closed_oriented(t2)
    if not report.valid:
        raise MoveRejected("move would break closedness: " + "; ".join(report.problems[:3]))

    # Geometry of the new pieces.
    try:
        for verts, _ in new_simplices:
            geometry.check_simplex_nondegenerate(r2.simplex_squared_lengths(verts), min_quality)
    except DegeneracyError as exc:
        raise MoveRejected(f"degenerate new simplex: {exc}") from exc

    before = [s for s, _ in t.simplices]
    after = [s for s, _ in t2.simplices]
    created, deleted = [], []
    for dim in range(4):
        fb, fa = _faces_of(before, dim), _faces_of(after, dim)
        created.append(tuple(sorted((t2.sort_face(f) for f in fa - fb), key=lambda f: [order[v] for v in f])))
        deleted.append(tuple(sorted((t.sort_face(f) for f in fb - fa), key=lambda f: [order[v] for v in f])))
    created.append(tuple(v for v, _ in new_simplices))
    deleted.append(tuple(v for v, _ in old))

    for tri in created[2]:
        Ls = [r2.squared_length(*e) for e in itertools.combinations(tri, 2)]
        if r2.area(tri) < AREA_TOL * max(Ls):
            raise MoveRejected(f"degenerate new triangle {''.join(tri)}")

    labels = dict(zip("ABCDEF", label_order))
    hat = {}
    for letter, v in labels.items():
        verts = tuple(u for u in delta_sorted if u != v)
        rr = r2 if all(u in r2.positions for u in verts) else r
        hat[letter] = abs(rr.volume(verts))

    record = MoveRecord(
        kind=kind,
        labels=MappingProxyType(labels),
        created=tuple(created),
        deleted=tuple(deleted),
        created_simplices=tuple(new_simplices),
        deleted_simplices=tuple(old),
        created_volumes=tuple(abs(r2.volume(v)) for v, _ in new_simplices),
        deleted_volumes=tuple(abs(r.volume(v)) for v, _ in old),
        created_lengths=tuple(r2.squared_length(*e) for e in created[1]),
        deleted_lengths=tuple(r.squared_length(*e) for e in deleted[1]),
        created_areas=tuple(r2.area(f) for f in created[2]),
        deleted_areas=tuple(r.area(f) for f in deleted[2]),
        volumes=MappingProxyType(hat),
        vertex_delta=len(created[0]) - len(deleted[0]),
    )
    return t2, r2, record


def _fresh_vertex_name(t: Triangulation) -> str:
    used = set(t.vertices)
    for i in itertools.count(len(t.vertices)):
        name = f"v{i}"
        if name not in used:
            return name
    raise AssertionError  # unreachable


def move_1_5(
    t: Triangulation,
    r: Realization,
    simplex: int,
    barycentric: Sequence[float],
    name: str | None = None,
    min_quality: float = geometry.DEGENERACY_TOL,
) -> tuple[Triangulation, Realization, MoveRecord]:
    """Insert a new vertex at the given barycentric point of one simplex."""
    if not 0 <= simplex < len(t.simplices):
        raise MoveRejected(f"no simplex with index {simplex}")
    bary = np.asarray(barycentric, dtype=float)
    if bary.shape != (5,) or np.any(bary <= 0) or not math.isclose(bary.sum(), 1.0, abs_tol=1e-12):
        raise MoveRejected("barycentric coordinates must be 5 positive reals summing to 1")
    verts, _ = t.simplices[simplex]
    name = name or _fresh_vertex_name(t)
    if name in t.vertices:
        raise MoveRejected(f"vertex {name} already exists")
    p = sum(b * r[v] for b, v in zip(bary, verts))
    return _bistellar(t, r, "1-5", verts, (name,), [simplex], tuple(verts) + (name,), new_position=p, min_quality=min_quality)


def move_5_1(t: Triangulation, r: Realization, vertex: str, min_quality: float = geometry.DEGENERACY_TOL) -> tuple[Triangulation, Realization, MoveRecord]:
    """Remove a vertex whose star is five simplices forming a subdivided simplex."""
    sk = build_skeleton(t)
    star = sk.vertex_simplices.get(vertex, ())
    if len(star) != 5:
        raise MoveRejected(f"vertex {vertex} lies in {len(star)} simplices, need 5")
    link = set()
    for i in star:
        link.update(t.simplices[i][0])
    link.discard(vertex)
    if len(link) != 5:
        raise MoveRejected(f"link of {vertex} is not the boundary of a 4-simplex")
    tau = t.sort_face(link)
    if {(set(link) - set(t.simplices[i][0])).pop() for i in star} != link:
        raise MoveRejected(f"link of {vertex} is not the boundary of a 4-simplex")
    return _bistellar(t, r, "5-1", (vertex,), tau, list(star), tuple(tau) + (vertex,), min_quality=min_quality)


def move_2_4(t: Triangulation, r: Realization, tet: Sequence[str], min_quality: float = geometry.DEGENERACY_TOL) -> tuple[Triangulation, Realization, MoveRecord]:
    """Replace the two simplices around a tetrahedron CDEF by four around the new edge AB."""
    sk = build_skeleton(t)
    tet = t.sort_face(tet)
    star = sk.tet_simplices.get(tet)
    if star is None or len(star) != 2:
        raise MoveRejected(f"tetrahedron {tet} is not shared by exactly two simplices")
    apexes = [(set(t.simplices[i][0]) - set(tet)).pop() for i in star]
    if apexes[0] == apexes[1]:
        raise MoveRejected("both simplices have the same apex")
    ab = t.sort_face(apexes)
    if ab in sk.edge_index:
        raise MoveRejected(f"edge {''.join(ab)} already exists")
    return _bistellar(t, r, "2-4", tet, ab, list(star), tuple(ab) + tuple(tet), min_quality=min_quality)


def move_4_2(t: Triangulation, r: Realization, edge: Sequence[str], min_quality: float = geometry.DEGENERACY_TOL) -> tuple[Triangulation, Realization, MoveRecord]:
    """Remove an edge AB of degree four, leaving two simplices on the tetrahedron CDEF."""
    sk = build_skeleton(t)
    edge = t.sort_face(edge)
    star = sk.edge_simplices.get(edge)
    if star is None or len(star) != 4:
        raise MoveRejected(f"edge {edge} does not lie in exactly four simplices")
    link = set()
    for i in star:
        link.update(t.simplices[i][0])
    link -= set(edge)
    if len(link) != 4:
        raise MoveRejected(f"simplices around {''.join(edge)} do not span six vertices")
    tau = t.sort_face(link)
    if tau in sk.tet_index:
        raise MoveRejected(f"tetrahedron {''.join(tau)} already exists")
    return _bistellar(t, r, "4-2", edge, tau, list(star), tuple(edge) + tuple(tau), min_quality=min_quality)


def move_3_3(t: Triangulation, r: Realization, triangle: Sequence[str], min_quality: float = geometry.DEGENERACY_TOL) -> tuple[Triangulation, Realization, MoveRecord]:
    """Replace the three simplices around ABC by three around the link triangle DEF."""
    sk = build_skeleton(t)
    tri = t.sort_face(triangle)
    star = sk.triangle_simplices.get(tri)
    if star is None or len(star) != 3:
        raise MoveRejected(f"triangle {tri} does not lie in exactly three simplices")
    link = set()
    for i in star:
        link.update(t.simplices[i][0])
    link -= set(tri)
    if len(link) != 3:
        raise MoveRejected(f"simplices around {''.join(tri)} do not span six vertices")
    tau = t.sort_face(link)
    if tau in sk.triangle_index:
        raise MoveRejected(f"triangle {''.join(tau)} already exists")
    return _bistellar(t, r, "3-3", tri, tau, list(star), tuple(tri) + tuple(tau), min_quality=min_quality)


def move_candidates(t: Triangulation) -> dict[str, list]:
    """Move arguments whose combinatorial preconditions hold, per kind, in
    lexicographic order.

    Geometric preconditions (nondegenerate new simplices) are only checked
    when a move is applied.
    """
    sk = build_skeleton(t)
    out: dict[str, list] = {k: [] for k in MOVE_KINDS}
    out["1-5"] = list(range(len(t.simplices)))

    def span(star, face):
        link = set()
        for i in star:
            link.update(t.simplices[i][0])
        return t.sort_face(link - set(face))

    for v in sk.vertices:
        star = sk.vertex_simplices[v]
        if len(star) == 5 and len(span(star, (v,))) == 5:
            out["5-1"].append(v)
    for tet in sk.tetrahedra:
        apexes = span(sk.tet_simplices[tet], tet)
        if len(apexes) == 2 and apexes not in sk.edge_index:
            out["2-4"].append(tet)
    for e in sk.edges:
        star = sk.edge_simplices[e]
        if len(star) == 4:
            link = span(star, e)
            if len(link) == 4 and link not in sk.tet_index:
                out["4-2"].append(e)
    for tri in sk.triangles:
        star = sk.triangle_simplices[tri]
        if len(star) == 3:
            link = span(star, tri)
            if len(link) == 3 and link not in sk.triangle_index:
                out["3-3"].append(tri)
    return out


def apply_move(
    t: Triangulation,
    r: Realization,
    kind: str,
    arg,
    rng: np.random.Generator | None = None,
    min_quality: float = geometry.DEGENERACY_TOL,
    max_tries: int = 50,
):
    """Dispatch a move by kind.

    For 1-5 the insertion point is drawn uniformly from the simplex
    interior and redrawn while some child simplex fails ``min_quality``
    (volume relative to the fourth power of its longest edge).
    """
    if kind == "1-5":
        rng = rng or np.random.default_rng(0)
        last = None
        for _ in range(max_tries):
            bary = rng.dirichlet(np.ones(5))
            try:
                return move_1_5(t, r, arg, bary, min_quality=min_quality)
            except MoveRejected as exc:
                last = exc
        raise MoveRejected(f"no acceptable insertion point found: {last}")
    moves = {"5-1": move_5_1, "2-4": move_2_4, "4-2": move_4_2, "3-3": move_3_3}
    if kind not in moves:
        raise ValueError(f"unknown move kind {kind!r}")
    return moves[kind](t, r, arg, min_quality=min_quality)
