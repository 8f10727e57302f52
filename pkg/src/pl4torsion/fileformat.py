"""Line-oriented text format for realized triangulations.

::

    pl4-triangulation 1
    # comments and blank lines are ignored
    vertex A 0 0 0 0
    simplex +1 A B C D E
    vertex-frame A <16 numbers, row-major 4x4, columns are the axes>
    edge-frame A B <12 numbers, row-major 4x3>

Coordinates are written with ``repr`` so that binary64 values round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .complex import Frames, default_frames
from .errors import ParseError, ValidationError
from .triangulation import Realization, Triangulation

MAGIC = "pl4-triangulation"
VERSION = 1


@dataclass(frozen=True)
class TriangulationFile:
    triangulation: Triangulation
    realization: Realization
    vertex_frames: dict = field(default_factory=dict)
    edge_frames: dict = field(default_factory=dict)

    def frames(self) -> Frames | None:
        """Default frames with the file's overrides applied, or None if there are none."""
        if not self.vertex_frames and not self.edge_frames:
            return None
        base = default_frames(self.triangulation, self.realization)
        vertex = dict(base.vertex)
        edge = dict(base.edge)
        for v, F in self.vertex_frames.items():
            if v not in vertex:
                raise ValidationError(f"frame given for unknown vertex {v}")
            vertex[v] = F
        for e, E in self.edge_frames.items():
            key = self.triangulation.sort_face(e)
            if key not in edge:
                raise ValidationError(f"frame given for unknown edge {''.join(e)}")
            # the frame spans the complement, so edge direction does not matter
            edge[key] = E
        frames = Frames(MappingProxyType(vertex), MappingProxyType(edge))
        try:
            frames.check(self.realization, tol=1e-9)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
        return frames


def _floats(tokens, n, lineno):
    if len(tokens) != n:
        raise ParseError(f"line {lineno}: expected {n} numbers, got {len(tokens)}")
    try:
        vals = [float(x) for x in tokens]
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise ParseError(f"line {lineno}: non-finite number")
    return vals


def parse(text: str) -> TriangulationFile:
    lines = [
        (i, ln.split("#", 1)[0].split())
        for i, ln in enumerate(text.splitlines(), start=1)
    ]
    lines = [(i, toks) for i, toks in lines if toks]
    if not lines or lines[0][1][0] != MAGIC:
        raise ParseError(f"missing '{MAGIC} <version>' header")
    i0, header = lines[0]
    if len(header) != 2 or header[1] != str(VERSION):
        raise ParseError(f"line {i0}: unsupported format version {header[1:]}")

    coords: dict = {}
    simplices = []
    vframes: dict = {}
    eframes: dict = {}
    for lineno, toks in lines[1:]:
        kind, rest = toks[0], toks[1:]
        if kind == "vertex":
            if len(rest) != 5:
                raise ParseError(f"line {lineno}: vertex needs an id and 4 coordinates")
            if rest[0] in coords:
                raise ParseError(f"line {lineno}: duplicate vertex {rest[0]}")
            coords[rest[0]] = _floats(rest[1:], 4, lineno)
        elif kind == "simplex":
            if len(rest) != 6 or rest[0] not in ("+1", "-1", "1"):
                raise ParseError(f"line {lineno}: simplex needs a sign (+1/-1) and 5 vertex ids")
            simplices.append((tuple(rest[1:]), int(rest[0])))
        elif kind == "vertex-frame":
            if not rest:
                raise ParseError(f"line {lineno}: vertex-frame needs a vertex id")
            vframes[rest[0]] = np.array(_floats(rest[1:], 16, lineno)).reshape(4, 4)
        elif kind == "edge-frame":
            if len(rest) < 2:
                raise ParseError(f"line {lineno}: edge-frame needs two vertex ids")
            eframes[(rest[0], rest[1])] = np.array(_floats(rest[2:], 12, lineno)).reshape(4, 3)
        else:
            raise ParseError(f"line {lineno}: unknown record '{kind}'")

    try:
        t = Triangulation.from_simplices(list(coords), simplices)
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
    r = Realization.from_mapping(coords)
    return TriangulationFile(t, r, vframes, eframes)


def read(path) -> TriangulationFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dumps(t: Triangulation, r: Realization, frames: Frames | None = None, comment: str | None = None) -> str:
    out = [f"{MAGIC} {VERSION}"]
    if comment:
        out.extend(f"# {ln}" for ln in comment.splitlines())
    for v in t.vertices:
        out.append("vertex " + v + " " + " ".join(repr(float(x)) for x in r[v]))
    for verts, sign in t.canonical():
        out.append(f"simplex {sign:+d} " + " ".join(verts))
    if frames is not None:
        for v, F in frames.vertex.items():
            out.append(f"vertex-frame {v} " + " ".join(repr(float(x)) for x in F.ravel()))
        for (a, b), E in frames.edge.items():
            out.append(f"edge-frame {a} {b} " + " ".join(repr(float(x)) for x in E.ravel()))
    return "\n".join(out) + "\n"
