"""Closed oriented surfaces glued from triangles.

A surface with ``N`` triangles is a fixed-point-free involution on the
``3N`` triangle sides.  Side ``3t + i`` of triangle ``t`` runs from corner
``i`` to corner ``i + 1 (mod 3)`` in the triangle's positive orientation,
and glued sides are traversed in opposite directions, so every pairing
gives an oriented surface.

Edges are numbered by the position of their side pair in the sorted list
of pairs.  A *dart* is a directed edge: ``2e`` runs along the smaller side
of edge ``e``, ``2e + 1`` along the larger one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from . import kernels


class SurfaceError(ValueError):
    """Raised for malformed gluings."""


@dataclass(frozen=True)
class Gluing:
    n_triangles: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        n = self.n_triangles
        if n <= 0 or n % 2:
            raise SurfaceError(f"number of triangles must be even and positive, got {n}")
        p = self.pairing
        if len(p) != 3 * n:
            raise SurfaceError(f"pairing must cover {3 * n} sides, got {len(p)}")
        for s, b in enumerate(p):
            if not 0 <= b < 3 * n:
                raise SurfaceError(f"side {b} out of range [0, {3 * n})")
            if b == s:
                raise SurfaceError(f"side {s} is glued to itself")
            if p[b] != s:
                raise SurfaceError(f"pairing is not an involution at side {s}")

    @classmethod
    def from_pairs(cls, n_triangles: int, pairs: Iterable[Sequence[int]]) -> "Gluing":
        m = 3 * n_triangles
        if n_triangles <= 0 or n_triangles % 2:
            raise SurfaceError(f"number of triangles must be even and positive, got {n_triangles}")
        p = [-1] * m
        for a, b in pairs:
            for x in (a, b):
                if not 0 <= x < m:
                    raise SurfaceError(f"side {x} out of range [0, {m})")
            if a == b:
                raise SurfaceError(f"side {a} is glued to itself")
            if p[a] != -1 or p[b] != -1:
                raise SurfaceError(f"side used twice in pair ({a}, {b})")
            p[a], p[b] = b, a
        if -1 in p:
            raise SurfaceError(f"side {p.index(-1)} is not glued")
        return cls(n_triangles, tuple(p))

    def pairs(self) -> list[tuple[int, int]]:
        return sorted((s, b) for s, b in enumerate(self.pairing) if s < b)


class Topology(NamedTuple):
    euler: tuple[int, ...]
    genus: tuple[int, ...]
    n_components: int


@dataclass(frozen=True)
class TrivalentGraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True, eq=False)
class CombSurface:
    """A gluing together with its derived cell structure."""

    gluing: Gluing
    corner_vertex: tuple[int, ...] = field(repr=False)
    n_vertices: int
    triangle_component: tuple[int, ...] = field(repr=False)
    n_components: int
    vertex_component: tuple[int, ...] = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, CombSurface) and self.gluing == other.gluing

    def __hash__(self):
        return hash(self.gluing)

    @property
    def n_triangles(self) -> int:
        return self.gluing.n_triangles

    @property
    def pairing(self) -> tuple[int, ...]:
        return self.gluing.pairing

    @property
    def n_edges(self) -> int:
        return 3 * self.n_triangles // 2

    @cached_property
    def edge_sides(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.gluing.pairs())

    @cached_property
    def side_edge(self) -> tuple[int, ...]:
        out = [0] * (3 * self.n_triangles)
        for e, (a, b) in enumerate(self.edge_sides):
            out[a] = out[b] = e
        return tuple(out)

    def side_dart(self, s: int) -> int:
        e = self.side_edge[s]
        return 2 * e + (0 if self.edge_sides[e][0] == s else 1)

    def dart_side(self, d: int) -> int:
        return self.edge_sides[d >> 1][d & 1]

    def side_tail(self, s: int) -> int:
        return self.corner_vertex[s]

    def side_head(self, s: int) -> int:
        return self.corner_vertex[s - s % 3 + (s % 3 + 1) % 3]

    def dart_tail(self, d: int) -> int:
        return self.side_tail(self.dart_side(d))

    def dart_head(self, d: int) -> int:
        return self.side_head(self.dart_side(d))

    @cached_property
    def component_counts(self) -> tuple[tuple[int, int, int], ...]:
        """Per component ``(V, E, F)``."""
        F = [0] * self.n_components
        for c in self.triangle_component:
            F[c] += 1
        V = [0] * self.n_components
        for c in self.vertex_component:
            V[c] += 1
        return tuple((V[c], 3 * F[c] // 2, F[c]) for c in range(self.n_components))

    @cached_property
    def euler(self) -> tuple[int, ...]:
        return tuple(v - e + f for v, e, f in self.component_counts)

    @cached_property
    def genus(self) -> tuple[int, ...]:
        return tuple((2 - chi) // 2 for chi in self.euler)

    @property
    def is_connected(self) -> bool:
        return self.n_components == 1

    @cached_property
    def vertex_degree(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for v in self.corner_vertex:
            deg[v] += 1
        return tuple(deg)

    def to_dict(self) -> dict:
        return {"n": self.n_triangles, "pairs": [list(p) for p in self.edge_sides]}

    def dumps(self) -> str:
        return dumps_surface(self)


def build_surface(n_triangles: int, pairs: Iterable[Sequence[int]]) -> CombSurface:
    """Build a surface from ``N`` triangles and a list of glued side pairs."""
    return from_gluing(Gluing.from_pairs(n_triangles, pairs))


def from_gluing(gluing: Gluing) -> CombSurface:
    labels, nv = kernels.vertex_labels(gluing.pairing)
    comp, nc = kernels.component_labels(gluing.pairing)
    vcomp = [0] * nv
    for s, v in enumerate(labels):
        vcomp[v] = comp[s // 3]
    return CombSurface(
        gluing=gluing,
        corner_vertex=tuple(labels),
        n_vertices=nv,
        triangle_component=tuple(comp),
        n_components=nc,
        vertex_component=tuple(vcomp),
    )


def from_pairing(pairing: Sequence[int]) -> CombSurface:
    return from_gluing(Gluing(len(pairing) // 3, tuple(int(x) for x in pairing)))


def surface_topology(s: CombSurface) -> Topology:
    return Topology(s.euler, s.genus, s.n_components)


def dual_graph(s: CombSurface) -> TrivalentGraph:
    """One vertex per triangle, one edge per glued side pair."""
    edges = tuple(sorted((min(a // 3, b // 3), max(a // 3, b // 3)) for a, b in s.edge_sides))
    return TrivalentGraph(s.n_triangles, edges)


def relabel(s: CombSurface, perm: Sequence[int], rotations: Sequence[int]) -> CombSurface:
    """Move triangle ``t`` to ``perm[t]`` and rotate its corners by ``rotations[t]``.

    Old side ``3t + i`` becomes new side ``3 perm[t] + (i - rotations[t]) mod 3``.
    """
    n = s.n_triangles

    def new(x):
        t, i = divmod(x, 3)
        return 3 * perm[t] + (i - rotations[t]) % 3

    p = [0] * (3 * n)
    for x, y in enumerate(s.pairing):
        p[new(x)] = new(y)
    return from_pairing(p)


def mirror_pairing(pairing: Sequence[int]) -> list[int]:
    """Pairing of the orientation-reversed surface (local sides 0 and 2 swap)."""
    swap = (2, 1, 0)

    def m(x):
        return x - x % 3 + swap[x % 3]

    out = [0] * len(pairing)
    for x, y in enumerate(pairing):
        out[m(x)] = m(y)
    return out


def mirror(s: CombSurface) -> CombSurface:
    return from_pairing(mirror_pairing(s.pairing))


def disjoint_union(*surfaces: CombSurface) -> CombSurface:
    p = []
    offset = 0
    for s in surfaces:
        p.extend(x + offset for x in s.pairing)
        offset += 3 * s.n_triangles
    return from_pairing(p)


def from_triangles(triangles: Sequence[Sequence[int]]) -> CombSurface:
    """Glue oriented vertex triples along matching edges.

    Every directed edge ``(a, b)`` must occur exactly once and its reverse
    exactly once.  Convenient for hand-made fixtures.
    """
    where = {}
    for t, tri in enumerate(triangles):
        if len(tri) != 3:
            raise SurfaceError("triangles must be vertex triples")
        for i in range(3):
            key = (tri[i], tri[(i + 1) % 3])
            if key in where:
                raise SurfaceError(f"directed edge {key} occurs twice")
            where[key] = 3 * t + i
    p = [0] * (3 * len(triangles))
    for (a, b), s in where.items():
        if (b, a) not in where:
            raise SurfaceError(f"edge {(a, b)} has no partner")
        p[s] = where[(b, a)]
    return from_pairing(p)


def pillow() -> CombSurface:
    """Two triangles glued along their boundaries: a sphere with 3 vertices."""
    return build_surface(2, [(0, 3), (1, 5), (2, 4)])


def torus2() -> CombSurface:
    """The square with a diagonal, opposite sides identified."""
    return build_surface(2, [(0, 3), (1, 4), (2, 5)])


def grid_torus(width: int, height: int) -> CombSurface:
    """A ``width x height`` grid of squares split by diagonals, on a torus.

    Both sides must be at least 3 so that no directed edge repeats.
    """
    if width < 3 or height < 3:
        raise SurfaceError("grid torus needs width and height at least 3")
    def v(i, j):
        return (i % width) + width * (j % height)

    tris = []
    for j in range(height):
        for i in range(width):
            a, b, c, d = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return from_triangles(tris)


def dumps_surface(s: CombSurface) -> str:
    return json.dumps(s.to_dict(), separators=(",", ":"))


def loads_surface(text: str) -> CombSurface:
    data = json.loads(text)
    return surface_from_dict(data)


def surface_from_dict(data: dict) -> CombSurface:
    try:
        n = int(data["n"])
        pairs = [(int(a), int(b)) for a, b in data["pairs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SurfaceError(f"malformed surface record: {exc}") from None
    return build_surface(n, pairs)


def read_surface(path) -> CombSurface:
    with open(path) as fh:
        return loads_surface(fh.read())


def write_surface(s: CombSurface, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_surface(s) + "\n")
