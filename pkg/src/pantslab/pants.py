"""Combinatorial pants decompositions.

A :class:`CombPants` is a complex of triangles and stranded edges with
three boundary cycles.  Edge ``e`` runs from ``edges[e][0]`` to
``edges[e][1]``; dart ``2e`` traverses it forwards and ``2e + 1``
backwards, and each dart stands for one side of its edge.  Triangles list
their three darts with the triangle on the left; boundary cycles list
darts with the hole on the left.  Every dart is used exactly once.

Decompositions are produced on the blow-up of the surface, where curves
may run along parallel copies of an edge, and then collapsed back: the
rectangles between parallel copies become edges, the vertex polygons
become vertices.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Sequence

from .canonical import canonical_code
from .curves import (
    LONG, RING, SHORT, CutInvariantError, EdgeCycle, NoEssentialCycle, PolySurface, RefinedSurface, blow_up,
    cut_along, shortest_essential_cycle,
)
from .surface import CombSurface, Gluing, from_gluing


class PantsError(ValueError):
    """A complex that is not a combinatorial pair of pants."""


class DecompositionError(RuntimeError):
    """The surface has no pants decomposition or the construction failed."""


class SlideError(ValueError):
    """A slide whose preconditions do not hold."""


class TightenError(RuntimeError):
    """Tightening did not finish within the step cap."""

    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace or []


# --- pants ---------------------------------------------------------------------


@dataclass(frozen=True)
class CombPants:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]
    boundaries: tuple[tuple[int, ...], ...]
    vertex_label: tuple[int, ...] | None = None
    edge_label: tuple[int, ...] | None = None      # source side under dart 2e
    triangle_label: tuple[int, ...] | None = None  # source triangle; dart k lies on side 3T + k

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    @property
    def n_darts(self) -> int:
        return 2 * len(self.edges)

    @property
    def area(self) -> int:
        return len(self.triangles)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.boundaries)

    def triangle_darts(self) -> set[int]:
        return {d for t in self.triangles for d in t}

    def stranded_edges(self) -> list[int]:
        used = self.triangle_darts()
        return [e for e in range(len(self.edges)) if 2 * e not in used and 2 * e + 1 not in used]

    def faces(self):
        yield from self.triangles
        yield from self.boundaries

    def validate(self) -> None:
        """Check the ribbon structure; a valid pants caps off to a sphere."""
        m = self.n_darts
        if len(self.boundaries) != 3:
            raise PantsError(f"a pair of pants has 3 boundary cycles, got {len(self.boundaries)}")
        if any(len(b) == 0 for b in self.boundaries):
            raise PantsError("empty boundary cycle")
        use = [0] * m
        phi = [-1] * m
        for f in self.faces():
            for k, d in enumerate(f):
                if not 0 <= d < m:
                    raise PantsError(f"dart {d} out of range")
                use[d] += 1
                nxt = f[(k + 1) % len(f)]
                if self.head(d) != self.tail(nxt):
                    raise PantsError(f"darts {d} and {nxt} do not meet")
                phi[d] = nxt
        if any(u != 1 for u in use):
            raise PantsError("every edge side must be used exactly once")
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise PantsError("edge endpoint out of range")
        # vertex rotations: each declared vertex must be one disk
        seen = [False] * m
        orbits = 0
        for d in range(m):
            if seen[d]:
                continue
            orbits += 1
            x = d
            while not seen[x]:
                seen[x] = True
                x = phi[x ^ 1]
        touched = {v for e in self.edges for v in e}
        if len(touched) != self.n_vertices or orbits != self.n_vertices:
            raise PantsError("some vertex is pinched or isolated")
        chi = self.n_vertices - len(self.edges) + len(self.triangles) + 3
        if chi != 2:
            raise PantsError(f"capped complex has Euler characteristic {chi}, expected 2")
        # connected
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        if len({find(v) for v in range(self.n_vertices)}) != 1:
            raise PantsError("pants complex is disconnected")

    def to_dict(self) -> dict:
        out = {
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "triangles": [list(t) for t in self.triangles],
            "boundaries": [list(b) for b in self.boundaries],
        }
        if self.vertex_label is not None:
            out["vertex_label"] = list(self.vertex_label)
            out["edge_label"] = list(self.edge_label)
            out["triangle_label"] = list(self.triangle_label)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CombPants":
        def tup(x):
            return None if x is None else tuple(x)

        return cls(
            int(d["vertices"]),
            tuple(tuple(e) for e in d["edges"]),
            tuple(tuple(t) for t in d["triangles"]),
            tuple(tuple(b) for b in d["boundaries"]),
            tup(d.get("vertex_label")), tup(d.get("edge_label")), tup(d.get("triangle_label")),
        )


def pants_from_names(edges: dict, triangles: Sequence[Sequence[str]],
                     boundaries: Sequence[Sequence[str]]) -> CombPants:
    """Build pants from named edges; ``"x"`` is edge ``x`` forwards, ``"-x"`` backwards."""
    vnames: dict = {}
    enames = list(edges)
    eidx = {n: i for i, n in enumerate(enames)}
    elist = []
    for n in enames:
        u, v = edges[n]
        elist.append((vnames.setdefault(u, len(vnames)), vnames.setdefault(v, len(vnames))))

    def dart(tok: str) -> int:
        return 2 * eidx[tok[1:]] + 1 if tok.startswith("-") else 2 * eidx[tok]

    p = CombPants(len(vnames), tuple(elist),
                  tuple(tuple(dart(x) for x in t) for t in triangles),
                  tuple(tuple(dart(x) for x in b) for b in boundaries))
    p.validate()
    return p


# --- cluster graphs --------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    kind: str            # "disk" | "cylinder" | "pants"
    degenerate: bool
    triangles: tuple[int, ...]
    vertices: tuple[int, ...]
    betti: int
    degree: int


@dataclass(frozen=True)
class Strand:
    ends: tuple[int, int]      # cluster indices
    attach: tuple[int, int]    # pants vertices where the strand meets each cluster
    edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ClusterGraph:
    clusters: tuple[Cluster, ...]
    strands: tuple[Strand, ...]
    components: int

    @property
    def betti(self) -> int:
        b = sum(c.betti for c in self.clusters)
        return b + len(self.strands) - len(self.clusters) + self.components

    def to_dict(self) -> dict:
        return {
            "clusters": [
                {"kind": c.kind, "degenerate": c.degenerate, "triangles": list(c.triangles),
                 "betti": c.betti, "degree": c.degree} for c in self.clusters],
            "strands": [{"ends": list(s.ends), "length": s.length} for s in self.strands],
            "betti": self.betti,
        }


def cluster_graph(p: CombPants, check: bool = True) -> ClusterGraph:
    """Clusters of triangles joined by strands of stranded edges.

    A vertex whose link has more than one interval is replaced by a star
    whose centre is a degenerate cluster.  Paths through points of degree
    two are shrunk to single strands, and triangles glued along edges are
    shrunk to single clusters.
    """
    nT = len(p.triangles)
    where = {}
    for t, tri in enumerate(p.triangles):
        for k, d in enumerate(tri):
            where[d] = (t, k)
    stranded = set(p.stranded_edges())
    # link components at each vertex: triangle corners and strand ends
    corner_parent: dict = {}

    def find(x):
        while corner_parent[x] != x:
            corner_parent[x] = corner_parent[corner_parent[x]]
            x = corner_parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            corner_parent[ra] = rb

    at_vertex = defaultdict(list)
    for t, tri in enumerate(p.triangles):
        for k, d in enumerate(tri):
            key = ("c", t, k)  # corner at the tail of dart k
            corner_parent[key] = key
            at_vertex[p.tail(d)].append(key)
    for e in sorted(stranded):
        for end in (0, 1):
            key = ("s", e, end)
            corner_parent[key] = key
            at_vertex[p.edges[e][end]].append(key)
    for t, tri in enumerate(p.triangles):
        for k, d in enumerate(tri):
            if d ^ 1 in where:
                t2, k2 = where[d ^ 1]
                union(("c", t, k), ("c", t2, (k2 + 1) % 3))
    # graph nodes
    node_of = {}
    node_vertex = []
    star_edges = []
    centres = []
    for v in range(p.n_vertices):
        comps = defaultdict(list)
        for key in at_vertex[v]:
            comps[find(key)].append(key)
        tri_comps = [c for c in comps.values() if any(k[0] == "c" for k in c)]
        if len(tri_comps) > 1:
            centre = len(node_vertex)
            node_vertex.append(v)
            centres.append(centre)
            for comp in sorted(comps.values()):
                nid = len(node_vertex)
                node_vertex.append(v)
                for key in comp:
                    node_of[key] = nid
                star_edges.append((centre, nid))
        else:
            nid = len(node_vertex)
            node_vertex.append(v)
            for key in at_vertex[v]:
                node_of[key] = nid
    n_nodes = len(node_vertex)
    # triangle groups
    tparent = list(range(nT))

    def tfind(x):
        while tparent[x] != x:
            tparent[x] = tparent[tparent[x]]
            x = tparent[x]
        return x

    for t, tri in enumerate(p.triangles):
        for d in tri:
            if d ^ 1 in where:
                a, b = tfind(t), tfind(where[d ^ 1][0])
                if a != b:
                    tparent[a] = b
    groups: dict[int, list[int]] = defaultdict(list)
    for t in range(nT):
        groups[tfind(t)].append(t)
    group_list = sorted(groups.values())
    node_cluster = [-1] * n_nodes
    clusters_raw = []  # (triangles, nodes)
    for gi, tris in enumerate(group_list):
        nodes = set()
        for t in tris:
            for k in range(3):
                nodes.add(node_of[("c", t, k)])
        for n in nodes:
            node_cluster[n] = gi
        clusters_raw.append((tuple(tris), nodes))
    # graph edges: stranded edges and star edges, between nodes
    gedges = []  # (node a, node b, stranded edge or None)
    for e in sorted(stranded):
        gedges.append((node_of[("s", e, 0)], node_of[("s", e, 1)], e))
    for a, b in star_edges:
        gedges.append((a, b, None))
    incident = defaultdict(list)
    for i, (a, b, _) in enumerate(gedges):
        incident[a].append(i)
        incident[b].append(i)
    # point nodes of degree other than 2 become degenerate clusters
    cluster_of_node = list(node_cluster)
    for n in range(n_nodes):
        if cluster_of_node[n] < 0 and len(incident[n]) != 2:
            cluster_of_node[n] = len(clusters_raw)
            clusters_raw.append(((), {n}))
    # strands: walk from cluster nodes through degree-2 points
    used = [False] * len(gedges)
    strands_raw = []

    def walk(start_node, ei):
        path = []
        cur = start_node
        while True:
            used[ei] = True
            a, b, e = gedges[ei]
            nxt = b if a == cur else a
            if e is not None:
                path.append(e)
            if cluster_of_node[nxt] >= 0:
                return nxt, path
            nxt_edges = [x for x in incident[nxt] if x != ei or incident[nxt].count(ei) > 1]
            nei = next((x for x in nxt_edges if not used[x]), None)
            if nei is None:
                return nxt, path
            cur, ei = nxt, nei

    for n in range(n_nodes):
        if cluster_of_node[n] < 0:
            continue
        for ei in incident[n]:
            if used[ei]:
                continue
            end, path = walk(n, ei)
            strands_raw.append((n, end, tuple(path)))
    # circles of degree-2 points with no cluster at all
    for i in range(len(gedges)):
        if not used[i]:
            n = gedges[i][0]
            cluster_of_node[n] = len(clusters_raw)
            clusters_raw.append(((), {n}))
            for ei in incident[n]:
                if not used[ei]:
                    end, path = walk(n, ei)
                    strands_raw.append((n, end, tuple(path)))
    # clusters
    degree = [0] * len(clusters_raw)
    strands = []
    for a, b, path in strands_raw:
        ca, cb = cluster_of_node[a], cluster_of_node[b]
        degree[ca] += 1
        degree[cb] += 1
        strands.append(Strand((ca, cb), (node_vertex[a], node_vertex[b]), path))
    clusters = []
    for ci, (tris, nodes) in enumerate(clusters_raw):
        if tris:
            tri_edges = {d >> 1 for t in tris for d in p.triangles[t]}
            chi = len(nodes) - len(tri_edges) + len(tris)
            betti = 1 - chi
        else:
            betti = 0
        kind = {0: "disk", 1: "cylinder", 2: "pants"}.get(betti, f"betti{betti}")
        verts = tuple(sorted({node_vertex[n] for n in nodes}))
        clusters.append(Cluster(kind, not tris, tris, verts, betti, degree[ci]))
    # components of the cluster graph
    cparent = list(range(len(clusters)))

    def cfind(x):
        while cparent[x] != x:
            cparent[x] = cparent[cparent[x]]
            x = cparent[x]
        return x

    for s in strands:
        cparent[cfind(s.ends[0])] = cfind(s.ends[1])
    ncomp = len({cfind(c) for c in range(len(clusters))})
    g = ClusterGraph(tuple(clusters), tuple(strands), ncomp)
    if check and g.betti != 2:
        raise PantsError(f"first Betti number is {g.betti}, not 2: {g.to_dict()}")
    return g


@dataclass(frozen=True)
class LooseDisk:
    cluster: int
    triangles: tuple[int, ...]
    attach: tuple[int, int]
    arcs: tuple[tuple[int, int, int], ...] | None  # (boundary, start, length) for c and c'


def _disk_arcs(p: CombPants, tris: Sequence[int]):
    tri_darts = p.triangle_darts()
    mine = {d for t in tris for d in p.triangles[t]}
    outer = {d ^ 1 for d in mine if d ^ 1 not in tri_darts}
    runs = []
    for bi, cyc in enumerate(p.boundaries):
        n = len(cyc)
        flags = [d in outer for d in cyc]
        if all(flags):
            runs.append((bi, 0, n))
            continue
        for k in range(n):
            if flags[k] and not flags[k - 1]:
                ln = 0
                while flags[(k + ln) % n]:
                    ln += 1
                runs.append((bi, k, ln))
    return tuple(runs)


def is_tight(p: CombPants) -> tuple[bool, list[LooseDisk]]:
    """Tight unless some disk-type cluster has degree 2."""
    g = cluster_graph(p)
    loose = []
    for ci, c in enumerate(g.clusters):
        if c.kind == "disk" and c.degree == 2 and not c.degenerate:
            att = [s.attach[k] for s in g.strands for k in (0, 1) if s.ends[k] == ci]
            runs = _disk_arcs(p, c.triangles)
            loose.append(LooseDisk(ci, c.triangles, (att[0], att[1]),
                                   runs if len(runs) == 2 else None))
    return not loose, loose


# --- decompositions --------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    """Boundary ``a`` of pants ``i`` glued to boundary ``b`` of pants ``j``.

    Position ``k`` of the first cycle meets position ``(twist - k) mod l``
    of the second, both cycles being basepoint-normalised.
    """

    i: int
    a: int
    j: int
    b: int
    twist: int


@dataclass(frozen=True)
class PantsDecomposition:
    surface: CombSurface
    pants: tuple[CombPants, ...]
    pairings: tuple[Pairing, ...]

    @property
    def curve_lengths(self) -> tuple[int, ...]:
        return tuple(len(self.pants[q.i].boundaries[q.a]) for q in self.pairings)

    @property
    def total_length(self) -> int:
        return sum(self.curve_lengths)

    def partner(self, i: int, a: int) -> tuple[Pairing, bool]:
        for q in self.pairings:
            if (q.i, q.a) == (i, a):
                return q, True
            if (q.j, q.b) == (i, a):
                return q, False
        raise SlideError(f"boundary {a} of pants {i} is not glued")

    def curves(self) -> list[EdgeCycle]:
        """Curves on the source surface, read off the first side of each pairing."""
        out = []
        for q in self.pairings:
            p = self.pants[q.i]
            sides = []
            for d in p.boundaries[q.a]:
                side = p.edge_label[d >> 1]
                sides.append(self.surface.pairing[side] if d & 1 else side)
            out.append(EdgeCycle(tuple(sides)))
        return out

    def to_dict(self) -> dict:
        return {
            "surface": self.surface.to_dict(),
            "pants": [p.to_dict() for p in self.pants],
            "pairings": [[q.i, q.a, q.j, q.b] for q in self.pairings],
            "twists": [q.twist for q in self.pairings],
            "curve_lengths": list(self.curve_lengths),
            "total_length": self.total_length,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def total_pants_length(d: PantsDecomposition | Sequence[int]) -> int:
    if isinstance(d, PantsDecomposition):
        return d.total_length
    return sum(int(x) for x in d)


def decomposition_from_dict(data: dict) -> PantsDecomposition:
    from .surface import surface_from_dict

    s = surface_from_dict(data["surface"])
    pants = tuple(CombPants.from_dict(p) for p in data["pants"])
    pairings = tuple(Pairing(*row, t) for row, t in zip(data["pairings"], data["twists"]))
    return PantsDecomposition(s, pants, pairings)


def _basepoint(p: CombPants, cyc: Sequence[int]) -> int:
    labels = p.vertex_label or tuple(range(p.n_vertices))
    seq = [labels[p.tail(d)] for d in cyc]
    n = len(seq)
    return min(range(n), key=lambda r: (seq[r:] + seq[:r], r))


def _normalise(p: CombPants) -> tuple[CombPants, tuple[int, ...]]:
    rots = tuple(_basepoint(p, b) for b in p.boundaries)
    bnd = tuple(tuple(b[r:] + b[:r]) for b, r in zip(p.boundaries, rots))
    return replace(p, boundaries=bnd), rots


# --- construction from curves on the blow-up -------------------------------------


def _collapse_piece(r: RefinedSurface, cut: PolySurface, piece_darts: list[int],
                    circles: list[tuple[int, ...]]):
    """Collapse one piece of the cut blow-up to a pants complex.

    Returns the pants and, for every long dart on its boundary, the pants
    dart standing for the hole side of that dart.
    """
    s = r.source
    alpha, phi = cut.alpha, cut.phi
    fid, _ = r.poly.face
    S = set(piece_darts)
    parent = {d: d for d in piece_darts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for d in piece_darts:
        if alpha[d] >= 0:
            union(d, phi[alpha[d]])
        if r.kind[d] != LONG:
            union(d, phi[d])
    eparent = {d: d for d in piece_darts if r.kind[d] == LONG}

    def efind(x):
        while eparent[x] != x:
            eparent[x] = eparent[eparent[x]]
            x = eparent[x]
        return x

    for d in eparent:
        if alpha[d] >= 0:
            eparent[efind(d)] = efind(alpha[d])
        if r.face_kind[fid[d]] == "rectangle":
            eparent[efind(d)] = efind(phi[phi[d]])
    ends = defaultdict(list)
    for d in sorted(eparent):
        if r.face_kind[fid[d]] == "triangle":
            ends[efind(d)].append((d, 0))
        if alpha[d] < 0:
            ends[efind(d)].append((d, 1))
    vid: dict[int, int] = {}
    vlabel = []

    def vertex(x):
        root = find(x)
        if root not in vid:
            vid[root] = len(vid)
            vlabel.append(r.proj_vertex[r.poly.tail(x)])
        return vid[root]

    def end_tail_head(end):
        d, hole = end
        t, h = vertex(d), vertex(phi[d])
        return (h, t) if hole else (t, h)

    def end_label(end):
        d, hole = end
        return s.pairing[r.proj[d]] if hole else r.proj[d]

    edges, elabel = [], []
    dart_of = {}
    for root in sorted(ends, key=lambda x: min(ends[x])):
        es = sorted(ends[root])
        if len(es) != 2:
            raise DecompositionError("collapsed edge without exactly two sides")
        e = len(edges)
        edges.append(end_tail_head(es[0]))
        elabel.append(end_label(es[0]))
        dart_of[es[0]] = 2 * e
        dart_of[es[1]] = 2 * e + 1
    triangles, tlabel = [], []
    seen_faces = set()
    for d in sorted(piece_darts):
        f = fid[d]
        if r.face_kind[f] != "triangle" or f in seen_faces:
            continue
        seen_faces.add(f)
        longs = []
        x = d
        while True:
            if r.kind[x] == LONG:
                longs.append(x)
            x = phi[x]
            if x == d:
                break
        longs.sort(key=lambda y: r.proj[y] % 3)
        triangles.append(tuple(dart_of[(y, 0)] for y in longs))
        tlabel.append(r.face_source[f])
    boundaries = []
    for circ in circles:
        longs = [x for x in circ if r.kind[x] == LONG]
        boundaries.append(tuple(dart_of[(x, 1)] for x in reversed(longs)))
    p = CombPants(len(vid), tuple(edges), tuple(triangles), tuple(boundaries),
                  tuple(vlabel), tuple(elabel), tuple(tlabel))
    hole_dart = {x: dart_of[(x, 1)] for circ in circles for x in circ if r.kind[x] == LONG}
    return p, hole_dart


def decomposition_from_curves(r: RefinedSurface, curves: Sequence[EdgeCycle]) -> PantsDecomposition:
    """Cut the blow-up along ``curves`` and collapse each piece to pants."""
    res = cut_along(r.poly, curves)
    for pc in res.pieces:
        if pc.euler != -1 or pc.genus != 0 or pc.boundaries != 3:
            raise DecompositionError(f"piece with chi={pc.euler}, genus={pc.genus}, "
                                     f"{pc.boundaries} boundaries is not a pair of pants")
    by_piece = defaultdict(list)
    for d, pc in enumerate(res.dart_piece):
        by_piece[pc].append(d)
    circles_of = defaultdict(list)
    for ci, pc in enumerate(res.circle_piece):
        circles_of[pc].append(ci)
    pants = []
    locate = {}  # circle -> (pants, boundary)
    hole = {}
    for pc in range(len(res.pieces)):
        circ_ids = circles_of[pc]
        p, hd = _collapse_piece(r, res.surface, by_piece[pc], [res.circles[c] for c in circ_ids])
        p.validate()
        p, rots = _normalise(p)
        for bi, c in enumerate(circ_ids):
            locate[c] = (len(pants), bi)
        hole.update({x: (len(pants), d) for x, d in hd.items()})
        pants.append(p)
    pairings = []
    for c, (left, right) in zip(curves, res.curve_circles):
        (i, a), (j, b) = locate[left], locate[right]
        g = next(x for x in c.darts if r.kind[x] == LONG)
        k = pants[i].boundaries[a].index(hole[g][1])
        m = pants[j].boundaries[b].index(hole[r.poly.alpha[g]][1])
        pairings.append(Pairing(i, a, j, b, (k + m) % len(pants[i].boundaries[a])))
    return PantsDecomposition(r.source, tuple(pants), tuple(pairings))


class _Bench:
    """Working surface for the greedy search.

    After each cut both new boundary circles get a collar of quadrilaterals,
    so the vertices of the curve become interior again and later curves
    can run alongside it.  A collar is an annulus glued along a circle, so
    the topology of every piece is unchanged.
    """

    def __init__(self, r: RefinedSurface):
        pol = r.poly
        n = pol.n_darts
        fid, _ = pol.face
        vtx, _ = pol.vertex
        self.source = r.source
        self.base = r
        self.alpha = list(pol.alpha)
        self.phi = list(pol.phi)
        self.weight = list(pol.weight)
        self.kind = list(r.kind)
        self.proj = list(r.proj)
        self.fkind = [r.face_kind[fid[d]] for d in range(n)]
        self.fsrc = [r.face_source[fid[d]] for d in range(n)]
        self.vsrc = [r.proj_vertex[vtx[d]] for d in range(n)]
        self.curves: list[tuple[list[int], list[int]]] = []
        self._poly = pol

    @property
    def poly(self) -> PolySurface:
        if self._poly is None:
            self._poly = PolySurface(tuple(self.alpha), tuple(self.phi), tuple(self.weight))
        return self._poly

    def _new(self, kind, proj, weight, fkind, fsrc, vsrc) -> int:
        d = len(self.alpha)
        self.alpha.append(-1)
        self.phi.append(-1)
        self.weight.append(weight)
        self.kind.append(kind)
        self.proj.append(proj)
        self.fkind.append(fkind)
        self.fsrc.append(fsrc)
        self.vsrc.append(vsrc)
        return d

    def _collar(self, circle: list[int]) -> list[int]:
        """Glue a collar to the boundary circle ``circle`` (face order)."""
        n = len(circle)
        pairing = self.source.pairing
        side_edge = self.source.side_edge
        quads = []
        for i, x in enumerate(circle):
            nx = circle[(i + 1) % n]
            if self.kind[x] == LONG:
                fk, fs = "rectangle", side_edge[self.proj[x]]
                u = self._new(LONG, pairing[self.proj[x]], 1, fk, fs, self.vsrc[nx])
                z = self._new(LONG, self.proj[x], 1, fk, fs, self.vsrc[x])
            else:
                fk, fs = "ring", self.vsrc[x]
                u = self._new(RING, -1, 0, fk, fs, self.vsrc[nx])
                z = self._new(RING, -1, 0, fk, fs, self.vsrc[x])
            s = self._new(SHORT, -1, 0, fk, fs, self.vsrc[x])
            t = self._new(SHORT, -1, 0, fk, fs, self.vsrc[nx])
            self.alpha[x], self.alpha[u] = u, x
            self.phi[u], self.phi[s], self.phi[z], self.phi[t] = s, z, t, u
            quads.append((u, s, z, t))
        for i in range(n):
            t = quads[i][3]
            s_next = quads[(i + 1) % n][1]
            self.alpha[t], self.alpha[s_next] = s_next, t
        return [q[2] for q in quads]

    def cut(self, c: EdgeCycle) -> None:
        before = sum(self.poly.euler())
        circles_before = len(self.poly.boundary_circles())
        darts = list(c.darts)
        partners = [self.alpha[d] for d in darts]
        for d, a in zip(darts, partners):
            self.alpha[d] = self.alpha[a] = -1
        left = self._collar(darts)
        right = self._collar(partners[::-1])[::-1]
        self.curves.append((left, right))
        self._poly = None
        after = sum(self.poly.euler())
        circles_after = len(self.poly.boundary_circles())
        if after != before:
            raise CutInvariantError(f"Euler characteristic {before} became {after}")
        if circles_after != circles_before + 2:
            raise CutInvariantError(f"cut left {circles_after - circles_before} new boundary circles")

    def assemble(self) -> tuple[RefinedSurface, list[EdgeCycle]]:
        """Glue the collars back together; return the refined surface and curves."""
        alpha = list(self.alpha)
        for left, right in self.curves:
            for a, b in zip(left, right):
                alpha[a], alpha[b] = b, a
        pol = PolySurface(tuple(alpha), tuple(self.phi), tuple(self.weight))
        fid, nf = pol.face
        vtx, nv = pol.vertex
        face_kind = [""] * nf
        face_src = [0] * nf
        pv = [0] * nv
        for d in range(pol.n_darts):
            face_kind[fid[d]] = self.fkind[d]
            face_src[fid[d]] = self.fsrc[d]
            pv[vtx[d]] = self.vsrc[d]
        r = RefinedSurface(
            source=self.source, poly=pol, multiplicity=self.base.multiplicity,
            kind=tuple(self.kind), proj=tuple(self.proj), face_kind=tuple(face_kind),
            face_source=tuple(face_src), proj_vertex=tuple(pv), depth=self.base.depth,
        )
        return r, [EdgeCycle(tuple(left)) for left, _ in self.curves]


def greedy_curves(r: RefinedSurface) -> tuple[RefinedSurface, list[EdgeCycle]]:
    """Repeatedly cut along the shortest essential, non-peripheral cycle.

    Returns the collared surface together with the curves on it.
    """
    bench = _Bench(r)
    while True:
        cur = bench.poly
        comp, nc, V, E, F, B = cur.topology()
        todo = set()
        for c in range(nc):
            chi = V[c] - E[c] + F[c]
            if chi < -1 or (chi == -1 and B[c] != 3):
                todo.add(c)
        if not todo:
            return bench.assemble()
        active = [comp[d] in todo for d in range(cur.n_darts)]
        bench.cut(shortest_essential_cycle(cur, active))


def greedy_decomposition(s: CombSurface, multiplicity: int = 2,
                         max_multiplicity: int = 4) -> PantsDecomposition:
    """Greedy pants decomposition built on the blow-up.

    Parallel copies of each edge and concentric rings round each vertex
    (``multiplicity`` of each) let several curves share a source edge or
    pass the same vertex.  If the search gets stuck the multiplicity is
    raised, up to ``max_multiplicity``.
    """
    if s.n_components != 1:
        raise DecompositionError("surface is not connected")
    g = s.genus[0]
    if g < 2:
        raise DecompositionError(f"genus {g} surface has no pants decomposition")
    last = None
    for mult in range(multiplicity, max_multiplicity + 1):
        r = blow_up(s, mult, depth=mult)
        try:
            r2, curves = greedy_curves(r)
        except NoEssentialCycle as exc:
            last = exc
            continue
        if len(curves) != 3 * g - 3:
            raise DecompositionError(f"found {len(curves)} curves, expected {3 * g - 3}")
        return decomposition_from_curves(r2, curves)
    raise DecompositionError(f"greedy search got stuck: {last}")


# --- validation ----------------------------------------------------------------------


def _aligned(dec: PantsDecomposition, q: Pairing):
    A = dec.pants[q.i].boundaries[q.a]
    B = dec.pants[q.j].boundaries[q.b]
    if len(A) != len(B):
        raise DecompositionError("glued boundaries have different lengths")
    return A, B


def reassemble(dec: PantsDecomposition) -> CombSurface:
    """Glue the pants back together and return the resulting triangle gluing."""
    nodes = [(i, e) for i, p in enumerate(dec.pants) for e in range(len(p.edges))]
    parent = {x: x for x in nodes}
    parity = {x: 0 for x in nodes}

    def find(x):
        if parent[x] == x:
            return x, 0
        root, par = find(parent[x])
        parent[x] = root
        parity[x] ^= par
        return root, parity[x]

    def union(x, y, rel):
        (rx, px), (ry, py) = find(x), find(y)
        if rx == ry:
            if px ^ py != rel:
                raise DecompositionError("inconsistent edge orientations in the gluing")
            return
        parent[rx] = ry
        parity[rx] = px ^ py ^ rel

    vparent = {(i, v): (i, v) for i, p in enumerate(dec.pants) for v in range(p.n_vertices)}

    def vfind(x):
        while vparent[x] != x:
            vparent[x] = vparent[vparent[x]]
            x = vparent[x]
        return x

    def vunion(a, b):
        ra, rb = vfind(a), vfind(b)
        if ra != rb:
            vparent[ra] = rb

    used = set()
    for q in dec.pairings:
        for key in ((q.i, q.a), (q.j, q.b)):
            if key in used:
                raise DecompositionError(f"boundary {key} glued twice")
            used.add(key)
        A, B = _aligned(dec, q)
        P, Q = dec.pants[q.i], dec.pants[q.j]
        n = len(A)
        for k in range(n):
            x, y = A[k], B[(q.twist - k) % n]
            union((q.i, x >> 1), (q.j, y >> 1), (x & 1) ^ (y & 1) ^ 1)
            vunion((q.i, P.tail(x)), (q.j, Q.head(y)))
            vunion((q.i, P.head(x)), (q.j, Q.tail(y)))
    if len(used) != 3 * len(dec.pants):
        raise DecompositionError("some boundary is not glued")
    sides = defaultdict(list)
    tri_index = {}
    for i, p in enumerate(dec.pants):
        for t, tri in enumerate(p.triangles):
            tri_index[(i, t)] = len(tri_index)
            for k, d in enumerate(tri):
                root, par = find((i, d >> 1))
                sides[root].append((3 * tri_index[(i, t)] + k, (d & 1) ^ par))
    n_tri = len(tri_index)
    pairing = [-1] * (3 * n_tri)
    for root, lst in sides.items():
        if len(lst) != 2 or lst[0][1] == lst[1][1]:
            raise DecompositionError("an edge does not border exactly two triangles")
        (a, _), (b, _) = lst
        pairing[a], pairing[b] = b, a
    roots = {find(x)[0] for x in nodes}
    if len(roots) != len(sides):
        raise DecompositionError("an edge of the reassembled complex borders no triangle")
    out = from_gluing(Gluing(n_tri, tuple(pairing)))
    nv = len({vfind(x) for x in vparent})
    if nv != out.n_vertices:
        raise DecompositionError(f"reassembly has {nv} vertices, the gluing {out.n_vertices}")
    return out


def validate_decomposition(dec: PantsDecomposition) -> None:
    s = dec.surface
    g = s.genus[0]
    if len(dec.pants) != 2 * g - 2 or len(dec.pairings) != 3 * g - 3:
        raise DecompositionError(
            f"{len(dec.pants)} pants and {len(dec.pairings)} curves for genus {g}")
    for p in dec.pants:
        p.validate()
        cluster_graph(p)
    chi = sum(len(p.triangles) - len(p.edges) + p.n_vertices for p in dec.pants)
    # each pants retracts onto a graph with first Betti number 2
    if chi != 2 - 2 * g:
        raise DecompositionError(f"pants Euler characteristics sum to {chi}")
    back = reassemble(dec)
    if canonical_code(back, oriented=True) != canonical_code(s, oriented=True):
        raise DecompositionError("reassembled surface is not isomorphic to the source")


# --- slides ------------------------------------------------------------------------


class _Builder:
    """Mutable pants under construction, keyed by arbitrary hashables.

    Only edges, faces and labels are kept; vertices are recomputed from the
    face cycles when the pants is built, so cutting or gluing never has to
    track which corners meet.
    """

    def __init__(self):
        self.edges: dict = {}        # key -> (tail label, head label, edge label)
        self.triangles: list = []
        self.boundaries: list = []

    @classmethod
    def of(cls, p: CombPants, tag) -> "_Builder":
        b = cls()
        lab = p.vertex_label or (None,) * p.n_vertices
        elab = p.edge_label or (None,) * len(p.edges)
        tlab = p.triangle_label or (None,) * len(p.triangles)
        for e, (u, v) in enumerate(p.edges):
            b.edges[(tag, e)] = (lab[u], lab[v], elab[e])
        for t, tri in enumerate(p.triangles):
            b.triangles.append(([((tag, d >> 1), d & 1) for d in tri], tlab[t]))
        for cyc in p.boundaries:
            b.boundaries.append([((tag, d >> 1), d & 1) for d in cyc])
        return b

    def build(self) -> CombPants:
        ei = {k: i for i, k in enumerate(self.edges)}

        def dart(x):
            return 2 * ei[x[0]] + x[1]

        tris = [tuple(dart(x) for x in tri) for tri, _ in self.triangles]
        bnds = [tuple(dart(x) for x in cyc) for cyc in self.boundaries]
        m = 2 * len(ei)
        phi = [-1] * m
        for f in tris + bnds:
            for k, d in enumerate(f):
                if phi[d] >= 0:
                    raise PantsError(f"dart {d} used twice")
                phi[d] = f[(k + 1) % len(f)]
        if -1 in phi:
            raise PantsError("some edge side is in no face")
        labels = [0] * m
        for k, (u, v, _) in enumerate(self.edges.values()):
            labels[2 * k], labels[2 * k + 1] = u, v
        vid = [-1] * m
        vlabel = []
        for d in range(m):
            if vid[d] >= 0:
                continue
            x = d
            while vid[x] < 0:
                if labels[x] != labels[d] and None not in (labels[x], labels[d]):
                    raise PantsError("corners with different source vertices meet")
                vid[x] = len(vlabel)
                x = phi[x ^ 1]
            vlabel.append(labels[d])
        elab = tuple(x[2] for x in self.edges.values())
        tlab = tuple(lab for _, lab in self.triangles)
        labelled = None not in vlabel and None not in elab and None not in tlab
        return CombPants(
            len(vlabel),
            tuple((vid[2 * k], vid[2 * k + 1]) for k in range(len(ei))),
            tuple(tris), tuple(bnds),
            *((tuple(vlabel), elab, tlab) if labelled else (None, None, None)),
        )


@dataclass(frozen=True)
class SlideRecord:
    """One slide: the disk left pants ``pants`` across its boundary ``boundary``.

    It landed in pants ``into`` next to boundary ``into_boundary``, where it
    now has triangles ``disk_triangles``; ``landed`` lists the darts of
    that boundary that run along the disk.
    """

    pants: int
    boundary: int
    into: int
    into_boundary: int
    arc_length: int
    other_length: int
    disk_triangles: tuple[int, ...]
    landed: tuple[int, ...]


def slide(dec: PantsDecomposition, i: int, disk: LooseDisk, arc: int = 0,
          allow_shortening: bool = False) -> tuple[PantsDecomposition, SlideRecord]:
    """Slide loose disk ``disk`` of pants ``i`` across the curve carrying arc ``arc``.

    Calling that arc ``c`` and the other one ``c'``: the disk leaves its
    pants, which keeps ``c'`` as stranded edges, and is glued to the
    neighbouring pants along ``c``.  Both arcs must have the same length
    unless ``allow_shortening`` is set, in which case ``c`` may be the
    longer one and the curve gets shorter.
    """
    P = dec.pants[i]
    if disk not in is_tight(P)[1]:
        raise SlideError("disk is not a loose disk of this pants")
    if disk.arcs is None:
        raise SlideError("disk boundary does not split into two arcs")
    (bn, st, ln), (bn2, st2, ln2) = disk.arcs[arc], disk.arcs[1 - arc]
    if ln != ln2 and not (allow_shortening and ln > ln2):
        raise SlideError(f"arcs of lengths {ln} and {ln2} cannot be exchanged")
    q, first = dec.partner(i, bn)
    j, bm = (q.j, q.b) if first else (q.i, q.a)
    Q = dec.pants[j]
    L = len(P.boundaries[bn])
    cyc = P.boundaries[bn]
    c_darts = [cyc[(st + k) % L] for k in range(ln)]
    cyc2 = P.boundaries[bn2]
    c2_darts = [cyc2[(st2 + k) % len(cyc2)] for k in range(ln2)]
    D = set(disk.triangles)
    d_edges = {d >> 1 for t in D for d in P.triangles[t]}
    c_edges = {d >> 1 for d in c_darts}
    c2_edges = {d >> 1 for d in c2_darts}
    if c_edges & c2_edges:
        raise SlideError("the two arcs of the disk share an edge")
    # P loses the disk and keeps c' as stranded edges; its curve now runs
    # along the disk side of c'
    bP = _Builder.of(P, "P")
    orig_edges, orig_tris = dict(bP.edges), list(bP.triangles)
    for e in d_edges - c2_edges:
        del bP.edges[("P", e)]
    bP.triangles = [x for t, x in enumerate(bP.triangles) if t not in D]
    old = bP.boundaries[bn]
    bP.boundaries[bn] = ([(("P", d >> 1), (d & 1) ^ 1) for d in reversed(c2_darts)]
                         + [old[(st + k) % L] for k in range(ln, L)])
    # the disk is glued to Q along the segment opposite c: with the twist
    # convention, c[k] meets Q's dart at (twist - st - k) mod L
    same = j == i
    bQ = bP if same else _Builder.of(Q, "Q")
    qtag = "P" if same else "Q"
    qcyc = Q.boundaries[bm]
    qstart = (q.twist - st - ln + 1) % L
    emap = {}
    for k in range(ln):
        pd = c_darts[k] ^ 1          # disk side of c, same direction as qd
        qd = qcyc[(qstart + ln - 1 - k) % L]
        emap[pd >> 1] = ((qtag, qd >> 1), (pd & 1) ^ (qd & 1))
    for e in sorted(d_edges - c_edges):
        bQ.edges[("D", e)] = orig_edges[("P", e)]
        emap[e] = (("D", e), 0)

    def qdart(d):
        key, flip = emap[d >> 1]
        return (key, (d & 1) ^ flip)

    first_tri = len(bQ.triangles)
    for t in sorted(D):
        bQ.triangles.append(([qdart(d) for d in P.triangles[t]], orig_tris[t][1]))
    # Q's curve now runs along the outer side of c'
    qold = bQ.boundaries[bm]
    bQ.boundaries[bm] = ([qdart(d) for d in c2_darts]
                         + [qold[(qstart + k) % L] for k in range(ln, L)])
    try:
        newP = bP.build()
        newQ = newP if same else bQ.build()
        for x in {newP, newQ}:
            x.validate()
            cluster_graph(x)
    except PantsError as exc:
        raise SlideError(f"slide does not give valid pants: {exc}") from exc
    pants = list(dec.pants)
    pants[i] = newP
    pants[j] = newQ
    rots = {}
    for idx in {i, j}:
        pants[idx], rots[idx] = _normalise(pants[idx])
    # raw frames: P[bn][k] meets Q[bm][(ln2 - 1 - k) mod L'], both starting
    # with the new segment
    L2 = len(newP.boundaries[bn])
    twist = (ln2 - 1 - rots[i][bn] - rots[j][bm]) % L2
    pairings = []
    for x in dec.pairings:
        if x == q:
            pairings.append(replace(x, twist=twist))
            continue
        t = x.twist
        if x.i in rots:
            t -= rots[x.i][x.a]
        if x.j in rots:
            t -= rots[x.j][x.b]
        pairings.append(replace(x, twist=t % len(pants[x.i].boundaries[x.a])))
    rb = rots[j][bm]
    landed = tuple(pants[j].boundaries[bm][(k - rb) % L2] for k in range(ln2))
    rec = SlideRecord(i, bn, j, bm, ln, ln2,
                      tuple(range(first_tri, first_tri + len(D))), landed)
    return PantsDecomposition(dec.surface, tuple(pants), tuple(pairings)), rec


def loose_disks(dec: PantsDecomposition) -> list[tuple[int, LooseDisk]]:
    out = []
    for i, p in enumerate(dec.pants):
        out.extend((i, d) for d in is_tight(p)[1])
    return out


def step_cap(dec: PantsDecomposition) -> int:
    return 12 * dec.surface.n_edges * max(1, len(dec.pairings))


def tighten(dec: PantsDecomposition, allow_shortening: bool = False,
            trace: list | None = None) -> PantsDecomposition:
    """Slide loose disks until every pair of pants is tight.

    A disk that lands on a strand of its new pants is loose there again;
    it is slid on at once, across the arc that does not run along the
    curve it just crossed, until it joins a cluster.  Each slide is
    appended to ``trace`` as a :class:`SlideRecord`.
    """
    if dec.surface.genus[0] < 2:
        raise DecompositionError("tightening needs genus at least 2")
    cap = step_cap(dec)
    trace = [] if trace is None else trace
    last: SlideRecord | None = None
    steps = 0
    while True:
        loose = loose_disks(dec)
        if not loose:
            return dec
        if steps >= cap:
            raise TightenError(f"no tight decomposition after {cap} slides", trace)
        pick, arc = None, 0
        if last is not None:
            # the disk just moved, if it is still loose
            for i, d in loose:
                if i == last.into and set(last.disk_triangles) <= set(d.triangles) \
                        and d.arcs is not None:
                    pick = (i, d)
                    P = dec.pants[i]
                    landed = set(last.landed)
                    bn, st, ln = d.arcs[0]
                    cyc = P.boundaries[bn]
                    if bn == last.into_boundary and any(
                            cyc[(st + k) % len(cyc)] in landed for k in range(ln)):
                        arc = 1
                    break
        if pick is None:
            pick = next(((i, d) for i, d in loose if d.arcs is not None), None)
            if pick is None:
                raise SlideError("loose disk whose boundary does not split into two arcs")
        dec, last = slide(dec, pick[0], pick[1], arc, allow_shortening)
        trace.append(last)
        steps += 1
