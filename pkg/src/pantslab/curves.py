"""Curves on combinatorial surfaces: straightening, blow-up and cutting.

Everything here works on a :class:`PolySurface`, a map given by two
permutations on darts.  ``phi`` steps to the next dart around the face on
the left, ``alpha`` to the same edge traversed the other way, or ``-1``
on the boundary.  A triangle gluing is the special case where darts are
triangle sides, ``alpha`` is the pairing and every face is a triangle.

Only darts of weight 1 count towards length.  The blow-up adds weight-0
darts around vertices, so a curve there may walk around a vertex for
free.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import kernels
from .surface import CombSurface

TOL = 1e-12


class CurveError(ValueError):
    """Malformed, non-simple or non-disjoint curves."""


class NoEssentialCycle(RuntimeError):
    """The search found no cycle meeting the requirements."""


class CutInvariantError(AssertionError):
    """Cutting broke Euler characteristic or boundary bookkeeping."""


def _next_side(b: int) -> int:
    return b - b % 3 + (b % 3 + 1) % 3


def _prev_side(b: int) -> int:
    return b - b % 3 + (b % 3 + 2) % 3


# --- polygonal maps ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolySurface:
    alpha: tuple[int, ...]
    phi: tuple[int, ...]
    weight: tuple[int, ...]

    @classmethod
    def from_comb(cls, s: CombSurface) -> "PolySurface":
        m = 3 * s.n_triangles
        return cls(tuple(s.pairing), tuple(_next_side(d) for d in range(m)), (1,) * m)

    @property
    def n_darts(self) -> int:
        return len(self.alpha)

    @cached_property
    def phi_inv(self) -> tuple[int, ...]:
        out = [0] * self.n_darts
        for d, x in enumerate(self.phi):
            out[x] = d
        return tuple(out)

    @cached_property
    def face(self) -> tuple[tuple[int, ...], int]:
        f = [-1] * self.n_darts
        nf = 0
        for d in range(self.n_darts):
            if f[d] < 0:
                x = d
                while f[x] < 0:
                    f[x] = nf
                    x = self.phi[x]
                nf += 1
        return tuple(f), nf

    @cached_property
    def face_darts(self) -> tuple[tuple[int, ...], ...]:
        fid, nf = self.face
        out: list[list[int]] = [[] for _ in range(nf)]
        for d in range(self.n_darts):
            out[fid[d]].append(d)
        return tuple(tuple(x) for x in out)

    @cached_property
    def dual_graph(self):
        """Faces joined across interior edges, as kernel-ready CSR arrays.

        Returns ``(start, darts, head, tail)``: the darts leaving face ``f``
        are ``darts[start[f]:start[f + 1]]``, and dart ``d`` goes from face
        ``tail[d]`` to face ``head[d]``.
        """
        fid, nf = self.face
        start = [0] * (nf + 1)
        flat = []
        for f, ds in enumerate(self.face_darts):
            flat.extend(d for d in ds if self.alpha[d] >= 0)
            start[f + 1] = len(flat)
        head = [fid[a] if a >= 0 else -1 for a in self.alpha]
        arr = kernels.as_array
        return arr(start), arr(flat), arr(head), arr(fid)

    @cached_property
    def vertex(self) -> tuple[tuple[int, ...], int]:
        """Tail vertex of every dart, labelled by first appearance."""
        parent = list(range(self.n_darts))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d, a in enumerate(self.alpha):
            if a >= 0:
                ra, rb = find(d), find(self.phi[a])
                if ra != rb:
                    parent[ra] = rb
        ids: dict[int, int] = {}
        out = tuple(ids.setdefault(find(d), len(ids)) for d in range(self.n_darts))
        return out, len(ids)

    def tail(self, d: int) -> int:
        return self.vertex[0][d]

    def head(self, d: int) -> int:
        return self.vertex[0][self.phi[d]]

    def topology(self):
        """``(dart_comp, n_comp, V, E, F, B)`` per component."""
        return kernels.cut_topology(self.alpha, self.phi, [0] * self.n_darts)

    def euler(self) -> list[int]:
        _, nc, V, E, F, _ = self.topology()
        return [V[c] - E[c] + F[c] for c in range(nc)]

    def cut(self, darts) -> "PolySurface":
        a = list(self.alpha)
        for d in darts:
            if a[d] < 0:
                raise CurveError(f"dart {d} already lies on the boundary")
            a[a[d]] = -1
            a[d] = -1
        return PolySurface(tuple(a), self.phi, self.weight)

    def boundary_circles(self) -> list[tuple[int, ...]]:
        """Boundary darts grouped into circles, each in face order."""
        seen = [False] * self.n_darts
        out = []
        for d in range(self.n_darts):
            if self.alpha[d] >= 0 or seen[d]:
                continue
            circle = []
            x = d
            while not seen[x]:
                seen[x] = True
                circle.append(x)
                y = self.phi[x]
                while self.alpha[y] >= 0:
                    y = self.phi[self.alpha[y]]
                x = y
            out.append(tuple(circle))
        return out


# --- edge cycles --------------------------------------------------------------


@dataclass(frozen=True)
class EdgeCycle:
    """A closed walk along darts; consecutive darts share a vertex."""

    darts: tuple[int, ...]

    def length(self, surface: PolySurface) -> int:
        return sum(surface.weight[d] for d in self.darts)

    def validate(self, surface: PolySurface) -> None:
        k = len(self.darts)
        for i, d in enumerate(self.darts):
            if not 0 <= d < surface.n_darts:
                raise CurveError(f"dart {d} out of range")
            if surface.alpha[d] < 0:
                raise CurveError(f"dart {d} lies on the boundary")
            if surface.head(d) != surface.tail(self.darts[(i + 1) % k]):
                raise CurveError(f"darts {d} and {self.darts[(i + 1) % k]} do not meet")

    def is_vertex_simple(self, surface: PolySurface) -> bool:
        tails = [surface.tail(d) for d in self.darts]
        return len(set(tails)) == len(tails)

    def reversed(self, surface: PolySurface) -> "EdgeCycle":
        return EdgeCycle(tuple(surface.alpha[d] for d in reversed(self.darts)))

    def has_backtracking(self, surface: PolySurface) -> bool:
        k = len(self.darts)
        return any(surface.alpha[self.darts[i]] == self.darts[(i + 1) % k]
                   for i in range(k)) if k > 1 else False


def canonical_darts(darts: Sequence[int], surface: PolySurface) -> tuple[int, ...]:
    """Minimal rotation of the cycle or of its reverse."""
    rev = [surface.alpha[d] for d in reversed(darts)]
    if len(set(darts)) == len(darts):
        # distinct darts: each orientation has one rotation starting at its minimum
        out = []
        for seq in (list(darts), rev):
            i = seq.index(min(seq))
            out.append(tuple(seq[i:] + seq[:i]))
        return min(out)
    best = None
    for seq in (list(darts), rev):
        for r in range(len(seq)):
            cand = tuple(seq[r:] + seq[:r])
            if best is None or cand < best:
                best = cand
    return best or ()


def edge_cycle_to_json(s: CombSurface, c: EdgeCycle) -> str:
    """Signed 1-based edge ids: ``+(e+1)`` along dart ``2e``, ``-(e+1)`` along ``2e+1``."""
    out = []
    for side in c.darts:
        d = s.side_dart(side)
        out.append((d >> 1) + 1 if d % 2 == 0 else -((d >> 1) + 1))
    return json.dumps({"edges": out}, separators=(",", ":"))


def edge_cycle_from_json(s: CombSurface, text: str) -> EdgeCycle:
    data = json.loads(text)
    darts = []
    for x in data["edges"]:
        x = int(x)
        if x == 0 or abs(x) > s.n_edges:
            raise CurveError(f"edge id {x} out of range")
        darts.append(s.dart_side(2 * (abs(x) - 1) + (0 if x > 0 else 1)))
    c = EdgeCycle(tuple(darts))
    c.validate(PolySurface.from_comb(s))
    return c


# --- transversal curves and straightening -------------------------------------

_CORNERS = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2))


def _point(local_side: int, u: float) -> tuple[float, float]:
    (x0, y0), (x1, y1) = _CORNERS[local_side], _CORNERS[(local_side + 1) % 3]
    return x0 + u * (x1 - x0), y0 + u * (y1 - y0)


@dataclass(frozen=True)
class TransversalCurve:
    """A closed curve crossing edges transversally, away from vertices.

    ``exits[k]`` is the triangle side through which arc ``k`` leaves its
    triangle; the next arc enters through the glued side.  ``positions[k]``
    is the crossing point on ``exits[k]`` measured from the side's tail.
    """

    exits: tuple[int, ...]
    positions: tuple[float, ...]

    def validate(self, s: CombSurface) -> None:
        k = len(self.exits)
        if k < 1 or len(self.positions) != k:
            raise CurveError("a transversal curve needs at least one crossing")
        p = s.pairing
        for i in range(k):
            if not 0 < self.positions[i] < 1:
                raise CurveError("crossing positions must lie strictly inside (0, 1)")
            entry = p[self.exits[i - 1]]
            x = self.exits[i]
            if x // 3 != entry // 3 or x == entry:
                raise CurveError(f"arc {i} does not join two sides of one triangle")

    def arcs(self, s: CombSurface):
        """``(entry side, entry param, exit side, exit param)`` per arc."""
        p = s.pairing
        k = len(self.exits)
        for i in range(k):
            prev = self.exits[i - 1]
            yield p[prev], 1.0 - self.positions[i - 1], self.exits[i], self.positions[i]

    def length(self, s: CombSurface) -> float:
        total = 0.0
        for a, ua, b, ub in self.arcs(s):
            (x0, y0), (x1, y1) = _point(a % 3, ua), _point(b % 3, ub)
            total += math.hypot(x1 - x0, y1 - y0)
        return total

    def to_json(self, s: CombSurface) -> str:
        rows = []
        for x, u in zip(self.exits, self.positions):
            e = s.side_edge[x]
            small = s.edge_sides[e][0] == x
            rows.append([e, u if small else 1.0 - u])
        return json.dumps({"crossings": rows, "sides": list(self.exits)}, separators=(",", ":"))

    @classmethod
    def from_json(cls, s: CombSurface, text: str) -> "TransversalCurve":
        data = json.loads(text)
        rows = data["crossings"]
        if "sides" in data:
            exits = [int(x) for x in data["sides"]]
        else:
            exits = _resolve_exits(s, [int(e) for e, _ in rows])
        pos = []
        for (e, u), x in zip(rows, exits):
            if s.side_edge[x] != int(e):
                raise CurveError(f"side {x} is not on edge {e}")
            pos.append(float(u) if s.edge_sides[int(e)][0] == x else 1.0 - float(u))
        c = cls(tuple(exits), tuple(pos))
        c.validate(s)
        return c


def _resolve_exits(s: CombSurface, edges: list[int]) -> list[int]:
    """Pick exit sides for a list of crossed edges; smallest choice wins."""
    p = s.pairing
    k = len(edges)
    sols = []

    def rec(i, chosen):
        if i == k:
            first, last = chosen[0], chosen[-1]
            if first // 3 == p[last] // 3 and first != p[last]:
                sols.append(list(chosen))
            return
        for x in s.edge_sides[edges[i]]:
            if i and (x // 3 != p[chosen[-1]] // 3 or x == p[chosen[-1]]):
                continue
            chosen.append(x)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    if not sols:
        raise CurveError("crossed edges do not form a closed transversal curve")
    return min(sols)


def random_transversal_curve(s: CombSurface, rng: random.Random, steps: int = 8,
                             margin: float = 0.01) -> TransversalCurve:
    """Random walk through triangles, closed up by a shortest return path."""
    p = s.pairing
    for _ in range(100):
        x0 = rng.randrange(3 * s.n_triangles)
        exits = [x0]
        for _ in range(max(0, steps - 1)):
            entry = p[exits[-1]]
            exits.append(rng.choice([y for y in _sides_of(entry) if y != entry]))
        tail = _close_walk(s, p[exits[-1]], x0)
        if tail is None:
            continue
        exits += tail
        pos = tuple(rng.uniform(margin, 1 - margin) for _ in exits)
        c = TransversalCurve(tuple(exits), pos)
        c.validate(s)
        return c
    raise CurveError("could not close a random walk on this surface")


def _sides_of(side: int):
    t = side // 3
    return (3 * t, 3 * t + 1, 3 * t + 2)


def _close_walk(s: CombSurface, entry: int, x0: int):
    """Exit sides leading from ``entry`` back into the triangle of ``x0``."""
    from collections import deque

    p = s.pairing
    if entry // 3 == x0 // 3 and entry != x0:
        return []
    prev = {entry: None}
    dq = deque([entry])
    while dq:
        e = dq.popleft()
        for x in _sides_of(e):
            if x == e:
                continue
            nxt = p[x]
            if nxt in prev:
                continue
            prev[nxt] = (e, x)
            if nxt // 3 == x0 // 3 and nxt != x0:
                path = []
                cur = nxt
                while prev[cur] is not None:
                    e_, x_ = prev[cur]
                    path.append(x_)
                    cur = e_
                return path[::-1]
            dq.append(nxt)
    return None


def _free_reduce(darts: list[int], pairing) -> list[int]:
    out: list[int] = []
    for d in darts:
        if out and pairing[out[-1]] == d:
            out.pop()
        else:
            out.append(d)
    while len(out) >= 2 and pairing[out[-1]] == out[0]:
        out.pop()
        out.pop(0)
    return out


@dataclass(frozen=True)
class Straightened:
    cycle: EdgeCycle
    input_length: float
    boundary_length: float  # total of the chosen boundary paths, before cancellation

    @property
    def length(self) -> int:
        return len(self.cycle.darts)


def straighten(s: CombSurface, alpha: TransversalCurve) -> Straightened:
    """Replace each arc by the shorter boundary path and cancel backtracking.

    An arc from side ``a`` to side ``b`` of a triangle either turns round
    their shared corner or runs along the third side.  Endpoints are
    recorded relative to the crossed side (0 = tail, 1 = head); where two
    consecutive arcs leave a crossing from the same endpoint nothing is
    traversed, otherwise the whole crossed edge is.
    """
    alpha.validate(s)
    p = s.pairing
    k = len(alpha.exits)
    pieces = []  # per arc: (start endpoint wrt previous exit, darts, end endpoint wrt this exit)
    bound = 0.0
    for i, (a, ua, b, ub) in enumerate(alpha.arcs(s)):
        t = a // 3
        la, lb = a % 3, b % 3
        if lb == (la + 1) % 3:
            s1 = (1.0 - ua) + ub
            short = (0, (), 0)
            long = (1, (p[3 * t + (la + 2) % 3],), 1)
        else:
            s1 = ua + (1.0 - ub)
            short = (1, (), 1)
            long = (0, (3 * t + (la + 1) % 3,), 0)
        if s1 <= 3.0 - s1 + TOL:
            pieces.append(short)
            bound += s1
        else:
            pieces.append(long)
            bound += 3.0 - s1
    darts: list[int] = []
    for i in range(k):
        start, body, end = pieces[i]
        darts.extend(body)
        nxt_start = pieces[(i + 1) % k][0]
        if end != nxt_start:
            x = alpha.exits[i]
            darts.append(x if end == 0 else p[x])
    cycle = EdgeCycle(tuple(_free_reduce(darts, p)))
    return Straightened(cycle, alpha.length(s), bound)


# --- mod 2 homology oracle ---------------------------------------------------


def _gf2_nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of ``{x : r . x = 0 for all rows}`` over GF(2), bitmask encoded."""
    pivots: dict[int, int] = {}
    for r in rows:
        for col, pr in pivots.items():
            if r >> col & 1:
                r ^= pr
        if r:
            col = r.bit_length() - 1
            for c2 in list(pivots):
                if pivots[c2] >> col & 1:
                    pivots[c2] ^= r
            pivots[col] = r
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = 1 << f
        for col, pr in pivots.items():
            if pr >> f & 1:
                x |= 1 << col
        basis.append(x)
    return basis


def cocycle_basis(s: CombSurface) -> list[list[int]]:
    """Edge functions mod 2 summing to zero round every triangle."""
    rows = []
    for t in range(s.n_triangles):
        r = 0
        for i in range(3):
            r ^= 1 << s.side_edge[3 * t + i]
        rows.append(r)
    return [[x >> e & 1 for e in range(s.n_edges)] for x in _gf2_nullspace(rows, s.n_edges)]


def cycle_class(s: CombSurface, c: EdgeCycle, basis=None) -> tuple[int, ...]:
    basis = cocycle_basis(s) if basis is None else basis
    return tuple(sum(phi[s.side_edge[d]] for d in c.darts) % 2 for phi in basis)


def transversal_class(s: CombSurface, a: TransversalCurve, basis=None) -> tuple[int, ...]:
    """Evaluate each cocycle on ``a`` through per-triangle potentials.

    On triangle ``t`` write the cocycle as ``f_t(i+1) - f_t(i)``; each
    crossing from side ``i`` of ``t`` into side ``j`` of ``u`` contributes
    the jump ``f_u(j+1) - f_t(i)`` at the shared vertex.
    """
    basis = cocycle_basis(s) if basis is None else basis
    p = s.pairing
    out = []
    for phi in basis:
        pot = []
        for t in range(s.n_triangles):
            f0 = 0
            f1 = phi[s.side_edge[3 * t]]
            f2 = (f1 + phi[s.side_edge[3 * t + 1]]) % 2
            pot.append((f0, f1, f2))
        total = 0
        for x in a.exits:
            y = p[x]
            total += pot[y // 3][(y % 3 + 1) % 3] - pot[x // 3][x % 3]
        out.append(total % 2)
    return tuple(out)


# --- blow-up -----------------------------------------------------------------

LONG, SHORT, POLY, RING = 0, 1, 2, 3


@dataclass(frozen=True, eq=False)
class RefinedSurface:
    """The blown-up surface with its projection to the source.

    Every source edge of multiplicity ``n >= 2`` becomes ``n`` parallel long
    edges with ``n - 1`` rectangles between them, and every vertex of
    degree ``d`` becomes a ``d``-gon.  Long darts have weight 1; the short
    darts cutting off corners and the polygon darts have weight 0.
    """

    source: CombSurface
    poly: PolySurface
    multiplicity: tuple[int, ...]
    kind: tuple[int, ...]
    proj: tuple[int, ...]          # long dart -> source side, else -1
    face_kind: tuple[str, ...]     # "triangle" | "rectangle" | "ring" | "polygon"
    face_source: tuple[int, ...]   # triangle index, edge index or vertex index
    proj_vertex: tuple[int, ...]   # refined vertex -> source vertex
    depth: int = 1

    @property
    def n_long_edges(self) -> int:
        return sum(1 for k in self.kind if k == LONG) // 2

    def project(self, c: EdgeCycle) -> EdgeCycle:
        return EdgeCycle(tuple(self.proj[d] for d in c.darts if self.kind[d] == LONG))

    def polygon_darts(self, source_vertex: int) -> list[int]:
        fid, _ = self.poly.face
        return [d for d in range(self.poly.n_darts)
                if self.kind[d] == POLY and self.face_source[fid[d]] == source_vertex]


def blow_up(s: CombSurface, multiplicity: Sequence[int] | int = 1,
            depth: int = 1) -> RefinedSurface:
    """Blow up ``s``: parallel copies of edges and concentric vertex rings.

    With ``depth = k`` every vertex polygon is surrounded by ``k - 1``
    further rings of quadrilaterals, so up to ``k`` disjoint curves can
    pass round the same vertex at different distances from it.
    """
    E = s.n_edges
    if isinstance(multiplicity, int):
        multiplicity = [multiplicity] * E
    if len(multiplicity) != E:
        raise ValueError(f"need one multiplicity per edge ({E})")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    mult = tuple(max(1, int(x)) for x in multiplicity)
    p = s.pairing
    base = 3 * s.n_triangles
    alpha = list(p)
    phi = [_next_side(d) for d in range(base)]
    proj = list(range(base))
    for e, (a, b) in enumerate(s.edge_sides):
        n = mult[e]
        if n < 2:
            continue
        prev = a
        for _ in range(n - 1):
            u, v = len(alpha), len(alpha) + 1
            alpha += [prev, -2]
            phi += [v, u]
            proj += [b, a]
            alpha[prev] = u
            prev = v
        alpha[prev] = b
        alpha[b] = prev
    m = len(alpha)
    mphi_inv = [0] * m
    for d, x in enumerate(phi):
        mphi_inv[x] = d
    # refined darts: L(d) = d, K(d) = m + d, P(d) = 2m + d
    ralpha = [0] * (3 * m)
    rphi = [0] * (3 * m)
    for d in range(m):
        ralpha[d] = alpha[d]
        ralpha[m + d] = 2 * m + d
        ralpha[2 * m + d] = m + d
        rphi[d] = m + d
        rphi[m + d] = phi[d]
        rphi[2 * m + d] = 2 * m + mphi_inv[alpha[d]]
    kind = [LONG] * m + [SHORT] * m + [POLY] * m
    base_vertex = s.corner_vertex
    ring_vertex = {}  # first dart of each polygon -> source vertex
    seen = [False] * (3 * m)
    rings = []
    for d in range(m):
        x = 2 * m + d
        if not seen[x]:
            ring = []
            while not seen[x]:
                seen[x] = True
                ring.append(x)
                x = rphi[x]
            rings.append(ring)
        ring_vertex.setdefault(2 * m + d, base_vertex[_next_side(proj[d])])
    # concentric rings: each pass turns the innermost polygon into quads
    quad_darts = set()
    for _ in range(depth - 1):
        new_rings = []
        for ring in rings:
            src = ring_vertex[ring[0]]
            n = len(ring)
            k0 = len(ralpha)
            # per position i: radial r_i, its reverse r'_i, quad side q_i, inner side y_i
            for _i in range(n):
                ralpha += [0, 0, 0, 0]
                rphi += [0, 0, 0, 0]
                kind += [RING] * 4
            r_ = [k0 + 4 * i for i in range(n)]
            rr = [k0 + 4 * i + 1 for i in range(n)]
            q_ = [k0 + 4 * i + 2 for i in range(n)]
            y_ = [k0 + 4 * i + 3 for i in range(n)]
            for i in range(n):
                j = (i + 1) % n
                ralpha[r_[i]], ralpha[rr[i]] = rr[i], r_[i]
                ralpha[q_[i]], ralpha[y_[i]] = y_[i], q_[i]
                rphi[ring[i]] = r_[j]
                rphi[r_[j]] = q_[i]
                rphi[q_[i]] = rr[i]
                rphi[rr[i]] = ring[i]
                rphi[y_[i]] = y_[j]
                quad_darts.update((ring[i], r_[j], q_[i], rr[i]))
            new_rings.append(y_)
            ring_vertex[y_[0]] = src
        rings = new_rings
    total = len(ralpha)
    weight = [1] * m + [0] * (total - m)
    poly = PolySurface(tuple(ralpha), tuple(rphi), tuple(weight))
    # face labels
    fid, nf = poly.face
    face_kind = [""] * nf
    face_src = [0] * nf
    for d in range(m):
        f = fid[d]
        if d < base:
            face_kind[f], face_src[f] = "triangle", d // 3
        else:
            face_kind[f], face_src[f] = "rectangle", s.side_edge[proj[d]]
    for ring in rings:
        f = fid[ring[0]]
        face_kind[f], face_src[f] = "polygon", ring_vertex[ring[0]]
    vtx, nv = poly.vertex
    pv = [-1] * nv
    for d in range(m):
        pv[vtx[d]] = base_vertex[proj[d]]
    # vertices of the inner rings inherit the vertex of their polygon
    changed = True
    while changed:
        changed = False
        for d in range(total):
            a, b = vtx[d], vtx[poly.phi[d]]
            if pv[a] < 0 and pv[b] >= 0 and kind[d] != LONG:
                pv[a] = pv[b]
                changed = True
            elif pv[b] < 0 and pv[a] >= 0 and kind[d] != LONG:
                pv[b] = pv[a]
                changed = True
    for f in range(nf):
        if face_kind[f] == "":
            face_kind[f] = "ring"
    for d in range(total):
        if face_kind[fid[d]] == "ring":
            face_src[fid[d]] = pv[vtx[d]]
    return RefinedSurface(
        source=s, poly=poly, multiplicity=mult, kind=tuple(kind),
        proj=tuple(proj) + (-1,) * (total - m), face_kind=tuple(face_kind),
        face_source=tuple(face_src), proj_vertex=tuple(pv), depth=depth,
    )


def lift_cycle(r: RefinedSurface, base: EdgeCycle, copies: Sequence[int] | None = None,
               turns: Sequence[int] | None = None) -> EdgeCycle:
    """Lift a source cycle to the blow-up.

    ``copies[k]`` picks which parallel long edge carries the ``k``-th step
    (0 is the copy next to the smaller side) and ``turns[k]`` which way to
    walk round the vertex polygon between steps ``k`` and ``k + 1``
    (0 = along the polygon, 1 = against it).
    """
    k = len(base.darts)
    copies = [0] * k if copies is None else list(copies)
    turns = [0] * k if turns is None else list(turns)
    longs = [_long_copy(r, d, copies[i]) for i, d in enumerate(base.darts)]
    out = []
    pol = r.poly
    for i in range(k):
        x, y = longs[i], longs[(i + 1) % k]
        out.append(x)
        out.extend(_polygon_path(r, x, y, turns[i]))
    c = EdgeCycle(tuple(out))
    c.validate(pol)
    return c


def _long_copy(r: RefinedSurface, side: int, copy: int) -> int:
    """Long dart projecting to ``side`` on parallel copy ``copy``."""
    s = r.source
    e = s.side_edge[side]
    a, b = s.edge_sides[e]
    chain = [a]  # long darts on the a-side of each parallel copy, in order
    x = a
    while r.poly.alpha[x] != b:
        u = r.poly.alpha[x]
        v = r.poly.phi[r.poly.phi[u]]  # across the rectangle
        chain.append(v)
        x = v
    n = len(chain)
    if not 0 <= copy < n:
        raise CurveError(f"edge {e} has only {n} parallel copies")
    d = chain[copy]
    return d if side == a else r.poly.alpha[d]


def _ring_next(r: RefinedSurface, x: int) -> int:
    pol = r.poly
    y = pol.phi[x]
    return y if r.kind[y] == POLY else pol.phi[pol.alpha[y]]


def _ring_prev(r: RefinedSurface, x: int) -> int:
    pol = r.poly
    y = pol.phi_inv[x]
    return y if r.kind[y] == POLY else pol.phi_inv[pol.alpha[y]]


def _polygon_path(r: RefinedSurface, x: int, y: int, turn: int) -> list[int]:
    """Outer ring darts from the head of long dart ``x`` to the tail of ``y``."""
    pol = r.poly
    start, goal = pol.head(x), pol.tail(y)
    if start == goal:
        return []
    cands = [d for d in range(pol.n_darts) if r.kind[d] == POLY and pol.tail(d) == start]
    if len(cands) != 1:
        raise CurveError("blow-up vertex without a unique polygon dart")
    d = cands[0]
    limit = pol.n_darts
    path = []
    if turn == 0:
        while pol.tail(d) != goal:
            path.append(d)
            d = _ring_next(r, d)
            if len(path) > limit:
                raise CurveError("polygon walk did not close")
        return path
    d = _ring_prev(r, d)
    # walking backwards: reversed polygon darts are the short darts
    cur = start
    while cur != goal:
        rev = pol.alpha[d]
        path.append(rev)
        cur = pol.head(rev)
        d = _ring_prev(r, d)
        if len(path) > limit:
            raise CurveError("polygon walk did not close")
    return path


# --- cutting -------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    V: int
    E: int
    F: int
    boundaries: int

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.boundaries) // 2


@dataclass(frozen=True, eq=False)
class CutResult:
    surface: PolySurface
    pieces: tuple[Piece, ...]
    dart_piece: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    circle_piece: tuple[int, ...]
    curve_circles: tuple[tuple[int, int], ...]  # per curve: circle on its left, circle on its right

    @property
    def euler(self) -> int:
        return sum(p.euler for p in self.pieces)


def check_disjoint(surface: PolySurface, curves: Sequence[EdgeCycle]) -> None:
    seen_edges: set[int] = set()
    seen_vertices: set[int] = set()
    for c in curves:
        if not c.darts:
            raise CurveError("empty curve")
        c.validate(surface)
        if not c.is_vertex_simple(surface):
            raise CurveError("curve is not vertex-simple")
        vs = {surface.tail(d) for d in c.darts}
        if vs & seen_vertices:
            raise CurveError("curves share a vertex")
        seen_vertices |= vs
        for d in c.darts:
            key = min(d, surface.alpha[d])
            if key in seen_edges:
                raise CurveError("curves share an edge")
            seen_edges.add(key)


def _topology_pieces(surface: PolySurface):
    comp, nc, V, E, F, B = surface.topology()
    return comp, tuple(Piece(V[c], E[c], F[c], B[c]) for c in range(nc))


def cut_along(surface: PolySurface, curves: Sequence[EdgeCycle], check: bool = True) -> CutResult:
    """Cut along disjoint simple cycles; the invariants are asserted."""
    if check:
        check_disjoint(surface, curves)
    before_chi = sum(surface.euler())
    before_circles = len(surface.boundary_circles())
    cut = surface.cut([d for c in curves for d in c.darts])
    comp, pieces = _topology_pieces(cut)
    circles = cut.boundary_circles()
    where = {}
    for i, circ in enumerate(circles):
        for d in circ:
            where[d] = i
    curve_circles = tuple((where[c.darts[0]], where[surface.alpha[c.darts[0]]]) for c in curves)
    result = CutResult(cut, pieces, tuple(comp), tuple(circles),
                       tuple(comp[c[0]] for c in circles), curve_circles)
    if result.euler != before_chi:
        raise CutInvariantError(f"Euler characteristic {before_chi} became {result.euler}")
    if len(circles) != before_circles + 2 * len(curves):
        raise CutInvariantError(
            f"{len(curves)} curves turned {before_circles} boundary circles into {len(circles)}")
    for c in curve_circles:
        if c[0] == c[1]:
            raise CutInvariantError("a cut curve left a single boundary circle")
    return result


@dataclass(frozen=True)
class CycleClass:
    disk_bounding: bool
    separating: bool
    peripheral: bool          # cobounds an annulus with an existing boundary circle
    parallel_to: tuple[int, ...]  # indices into ``others`` cobounding an annulus

    @property
    def essential(self) -> bool:
        return not self.disk_bounding


def classify_cycle(surface: PolySurface, c: EdgeCycle, others: Sequence[EdgeCycle] = ()) -> CycleClass:
    check_disjoint(surface, [c])
    comp0, _ = _topology_pieces(surface)
    res = cut_along(surface, [c], check=False)
    left, right = res.curve_circles[0]
    pl, pr = res.circle_piece[left], res.circle_piece[right]
    separating = pl != pr
    disk = peripheral = False
    if separating:
        for pc in (pl, pr):
            piece = res.pieces[pc]
            if piece.euler == 1 and piece.boundaries == 1:
                disk = True
            if piece.euler == 0 and piece.boundaries == 2 and piece.genus == 0:
                peripheral = True
    parallel = []
    mine_edges = {min(d, surface.alpha[d]) for d in c.darts}
    for i, o in enumerate(others):
        if {min(d, surface.alpha[d]) for d in o.darts} == mine_edges:
            parallel.append(i)
            continue
        try:
            both = cut_along(surface, [c, o])
        except CurveError:
            continue
        mine = set(both.curve_circles[0])
        theirs = set(both.curve_circles[1])
        for pc, piece in enumerate(both.pieces):
            if piece.euler == 0 and piece.boundaries == 2 and piece.genus == 0:
                circ = {k for k, q in enumerate(both.circle_piece) if q == pc}
                if circ & mine and circ & theirs:
                    parallel.append(i)
                    break
    return CycleClass(disk, separating, peripheral, tuple(parallel))


def _qualifies(surface: PolySurface, darts: Sequence[int]) -> bool:
    """Essential and not parallel to a boundary circle of ``surface``."""
    cut = surface.cut(darts)
    comp, nc, V, E, F, B = cut.topology()
    a, b = comp[darts[0]], comp[surface.alpha[darts[0]]]
    if a != b:
        for pc in (a, b):
            chi = V[pc] - E[pc] + F[pc]
            if (chi == 1 and B[pc] == 1) or (chi == 0 and B[pc] == 2):
                return False
    return True


def _boundary_vertices(surface: PolySurface) -> list[bool]:
    """Vertices touching the boundary; new curves must avoid them."""
    vtx, nv = surface.vertex
    out = [False] * nv
    for d in range(surface.n_darts):
        if surface.alpha[d] < 0:
            out[vtx[d]] = True
            out[vtx[surface.phi[d]]] = True
    return out


class _Pool:
    """Fundamental cycles of shortest-path trees, kept as tree references.

    Records are ``(weight, n_darts, key, tree, dart)``; ``key`` hashes the
    edge set, so the many copies of one cycle found from different roots
    are merged before any of them is rebuilt.  Two different cycles with
    the same weight, length and 64-bit key would be merged as well; we
    accept that risk.
    """

    def __init__(self, surface: PolySurface):
        self.surface = surface
        vtx, nv = surface.vertex
        arr = kernels.as_array
        blocked = _boundary_vertices(surface)
        self.tail = arr(vtx)
        self.head = arr([vtx[surface.phi[d]] for d in range(surface.n_darts)])
        self.alpha = arr(surface.alpha)
        self.weight = arr(surface.weight)
        self.allowed = arr([0 if b else 1 for b in blocked])
        self.trees: list = []
        self.records: list[tuple[int, int, int, int, int]] = []

    def grow(self, active=None, all_roots: bool = False, max_weight: int = -1) -> None:
        if active is None:
            active = [1] * self.surface.n_darts
        pars, recs = kernels.forest_cycles(self.head, self.tail, self.weight, self.alpha,
                                           kernels.as_array(active), self.allowed,
                                           all_roots, max_weight)
        shift = len(self.trees)
        self.trees.extend(pars)
        if shift:
            recs = [(w, n, h, t + shift, d) for w, n, h, t, d in recs]
        self.records.extend(recs)

    def groups(self, upto=None):
        """Yield ``((weight, n_darts), cycles)`` in increasing order.

        Cycles within a group are distinct dart lists in no useful order.
        """
        buckets: dict[tuple[int, int], dict[int, tuple[int, int]]] = {}
        for w, n, h, t, d in self.records:
            if upto is None or (w, n) <= upto:
                buckets.setdefault((w, n), {}).setdefault(h, (t, d))
        cycle_darts = kernels.cycle_darts
        for key in sorted(buckets):
            yield key, [cycle_darts(self.trees[t], self.tail, self.head, self.alpha, d)
                        for t, d in buckets[key].values()]


def candidate_cycles(surface: PolySurface, active_darts=None,
                     all_roots: bool = False) -> list[tuple[int, tuple[int, ...]]]:
    """Fundamental cycles of shortest-path trees, as ``(weight, darts)``.

    Trees are rooted at one vertex of each class of vertices joined by
    weight-0 edges (every vertex with ``all_roots``); vertices on the
    boundary are avoided, cycles of weight 0 are dropped and duplicates
    merged.
    """
    pool = _Pool(surface)
    pool.grow(active_darts, all_roots)
    return sorted((w, canonical_darts(c, surface)) for (w, _), cs in pool.groups() for c in cs)


class _Classifier:
    """Fast test for "essential and not peripheral" on one surface.

    A tree-cotree split of the surface with its holes capped off leaves
    ``2g`` edges, and a cycle is non-separating exactly when it uses an
    odd number of one of them.  For separating cycles, the parity of
    crossings with a path of faces from a base hole to hole ``k`` tells
    whether ``k`` lies on the far side.  The rare cases that this does
    not decide are settled by flooding the faces of the smaller side.
    """

    def __init__(self, surface: PolySurface):
        s = surface
        self.surface = s
        m = s.n_darts
        alpha = s.alpha
        comp, nc, V, E, F, B = s.topology()
        self.comp = comp
        self.chi = [V[c] - E[c] + F[c] for c in range(nc)]
        self.holes = list(B)
        self.genus = [(2 - self.chi[c] - B[c]) // 2 for c in range(nc)]
        vtx, nv = s.vertex
        fid, nf = s.face
        circles = s.boundary_circles()
        self.circle = [-1] * m
        for k, circ in enumerate(circles):
            for d in circ:
                self.circle[d] = k
        # primal tree over every edge of the capped surface
        adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
        for d in range(m):
            u, v = vtx[d], vtx[s.phi[d]]
            adj[u].append((v, d))
            if alpha[d] < 0:
                adj[v].append((u, d))
        in_tree = [False] * m
        seen = [False] * nv
        for r in range(nv):
            if seen[r]:
                continue
            seen[r] = True
            queue = [r]
            for u in queue:
                for v, d in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        in_tree[min(d, alpha[d]) if alpha[d] >= 0 else d] = True
                        queue.append(v)
        # dual graph: faces, then one cap per boundary circle
        dual: list[list[tuple[int, int]]] = [[] for _ in range(nf + len(circles))]
        for d in range(m):
            a = alpha[d]
            if a < 0:
                f, g = fid[d], nf + self.circle[d]
                dual[f].append((g, d))
                dual[g].append((f, d))
            elif d < a:
                dual[fid[d]].append((fid[a], d))
                dual[fid[a]].append((fid[d], d))
        in_cotree = [False] * m
        up = [-1] * len(dual)
        order = []
        seen = [False] * len(dual)
        for r in range(len(dual)):
            if seen[r]:
                continue
            seen[r] = True
            queue = [r]
            for f in queue:
                order.append(f)
                for g, e in dual[f]:
                    if not seen[g] and not in_tree[e]:
                        seen[g] = True
                        in_cotree[e] = True
                        up[g] = e
                        queue.append(g)
        # each leftover edge closes a loop in the cotree; a cycle's class
        # is its crossing parity with those loops
        self.hbit = [0] * m
        val = [0] * len(dual)
        k = 0
        for d in range(m):
            a = alpha[d]
            if (a > d or a < 0) and not in_tree[d] and not in_cotree[d]:
                self.hbit[d] = 1 << k
                val[fid[d]] ^= 1 << k
                val[fid[a] if a >= 0 else nf + self.circle[d]] ^= 1 << k
                k += 1
        for f in reversed(order):
            e = up[f]
            if e < 0:
                continue
            self.hbit[e] ^= val[f]
            a = alpha[e]
            if a >= 0:
                parent = fid[a] if fid[e] == f else fid[e]
            else:
                parent = nf + self.circle[e] if fid[e] == f else fid[e]
            val[parent] ^= val[f]
        for d in range(m):
            if alpha[d] > d:
                self.hbit[alpha[d]] = self.hbit[d]
        # paths of faces from the first hole of each component to the others
        self.cross = [0] * m
        base: dict[int, int] = {}
        for k, circ in enumerate(circles):
            base.setdefault(comp[circ[0]], k)
        prev: dict[int, int] = {}
        for c, k0 in base.items():
            root = nf + k0
            prev[root] = -1
            queue = [root]
            for f in queue:
                for g, e in dual[f]:
                    if g not in prev:
                        prev[g] = e
                        queue.append(g)
        for k, circ in enumerate(circles):
            f = nf + k
            bit = 1 << k
            while prev[f] >= 0:
                e = prev[f]
                self.cross[e] ^= bit
                if alpha[e] >= 0:
                    self.cross[alpha[e]] ^= bit
                    f = fid[e] if fid[alpha[e]] == f else fid[alpha[e]]
                else:
                    f = nf + self.circle[e] if f == fid[e] else fid[e]
        self.face_darts = s.face_darts

    def qualifies(self, darts: Sequence[int]) -> bool:
        h = 0
        x = 0
        for d in darts:
            h ^= self.hbit[d]
            x ^= self.cross[d]
        if h:
            return True
        c = self.comp[darts[0]]
        pop = bin(x).count("1")
        if 2 <= pop <= self.holes[c] - 2:
            return True
        if self.genus[c] == 0:
            return False
        return self._flood(darts, c)

    def _flood(self, darts: Sequence[int], c: int) -> bool:
        s = self.surface
        alpha = s.alpha
        fid, _ = s.face
        vtx, _ = s.vertex
        on_cycle = set()
        cyc_v = set()
        for d in darts:
            on_cycle.add(d)
            on_cycle.add(alpha[d])
            cyc_v.add(vtx[d])
        sides = [{fid[d] for d in darts}, {fid[alpha[d]] for d in darts}]
        queues = [list(sides[0]), list(sides[1])]
        pos = [0, 0]
        while True:
            done = -1
            for i in (0, 1):
                if pos[i] >= len(queues[i]):
                    done = i
                    break
                f = queues[i][pos[i]]
                pos[i] += 1
                for d in self.face_darts[f]:
                    a = alpha[d]
                    if a >= 0 and d not in on_cycle and fid[a] not in sides[i]:
                        sides[i].add(fid[a])
                        queues[i].append(fid[a])
            if done >= 0:
                break
        faces = sides[done]
        n_int = n_bd = 0
        verts = set()
        holes = set()
        for f in faces:
            for d in self.face_darts[f]:
                if alpha[d] < 0:
                    n_bd += 1
                    holes.add(self.circle[d])
                elif d not in on_cycle:
                    n_int += 1
                if vtx[d] not in cyc_v:
                    verts.add(vtx[d])
        chi = len(verts) + len(darts) - (n_int // 2 + len(darts) + n_bd) + len(faces)
        b = len(holes) + 1
        for chi_p, b_p in ((chi, b), (self.chi[c] - chi, self.holes[c] - len(holes) + 1)):
            if (chi_p == 1 and b_p == 1) or (chi_p == 0 and b_p == 2):
                return False
        return True


MAX_HOLE_PAIRS = 16


def _dual_arc(surface: PolySurface, src: set[int], dst: set[int], banned: set[int]):
    """Shortest path of faces from ``src`` to ``dst`` avoiding ``banned``.

    Returns the darts of the crossed edges, both directions, or ``None``.
    """
    start, flat, head, tail = surface.dual_graph
    path = kernels.dual_path(start, flat, head, tail, src, dst, banned)
    if path is None:
        return None
    out = []
    for d in path:
        out += [d, surface.alpha[d]]
    return out


def _pair_masks(surface: PolySurface, active=None):
    """Active-dart masks of the annuli used by the pair search."""
    m = surface.n_darts
    if active is None:
        active = [1] * m
    comp, nc, V, E, F, B = surface.topology()
    fid, _ = surface.face
    by_comp: dict[int, list[tuple[int, ...]]] = {}
    for circ in surface.boundary_circles():
        if active[circ[0]]:
            by_comp.setdefault(comp[circ[0]], []).append(circ)
    for c, holes in sorted(by_comp.items()):
        nb = len(holes)
        if nb < 4 or V[c] - E[c] + F[c] + nb != 2:
            continue
        hf = [{fid[d] for d in h} for h in holes]
        arcs = []
        for i in range(nb):
            for j in range(i + 1, nb):
                p = _dual_arc(surface, hf[i], hf[j], set())
                if p is not None:
                    arcs.append((len(p), i, j, p))
        # holes close together are the likeliest to have a short curve round them
        arcs.sort(key=lambda x: x[:3])
        for _, i, j, p in arcs[:MAX_HOLE_PAIRS]:
            crossed = set(p)
            used_faces = {fid[d] for d in p} | hf[i] | hf[j]
            rest = [k for k in range(nb) if k not in (i, j)]
            reached = set(hf[rest[0]])
            ok = True
            for k in rest[1:]:
                q = _dual_arc(surface, reached, hf[k], used_faces - reached - hf[k])
                if q is None:
                    ok = False
                    break
                crossed.update(q)
                reached |= hf[k] | {fid[d] for d in q}
            if ok:
                yield [1 if active[d] and comp[d] == c and d not in crossed else 0
                       for d in range(m)]


def pair_separating_cycles(surface: PolySurface, active_darts=None) -> list[tuple[int, tuple[int, ...]]]:
    """Cycles round two boundary circles of a planar component.

    For holes ``i`` and ``j`` of a genus-0 component with at least four
    holes, draw an arc through the faces from ``i`` to ``j`` and arcs
    joining all other holes.  Cycles that cross none of the arcs live in
    an annulus, and the non-contractible ones separate ``{i, j}`` from
    the rest.  Fundamental cycles avoiding the crossed edges are returned
    as ``(weight, darts)``; contractible ones are left for the caller to
    filter out.
    """
    pool = _Pool(surface)
    for mask in _pair_masks(surface, active_darts):
        pool.grow(mask)
    return sorted((w, canonical_darts(c, surface)) for (w, _), cs in pool.groups() for c in cs)


def shortest_essential_cycle(surface: PolySurface | CombSurface, active_darts=None,
                             forbidden: Sequence[EdgeCycle] = ()) -> EdgeCycle:
    """Shortest candidate cycle that is essential and not peripheral.

    Candidates are the tree cycles of :func:`candidate_cycles` and of
    :func:`pair_separating_cycles`.  Cycles parallel to anything in
    ``forbidden`` are skipped.  Ties go to the cycle with fewer darts,
    then to the lexicographically smallest canonical dart sequence.
    """
    if isinstance(surface, CombSurface):
        surface = PolySurface.from_comb(surface)
    clf = _Classifier(surface)

    def first(pool, upto=None):
        for key, cycles in pool.groups(upto):
            good = sorted(canonical_darts(c, surface) for c in cycles if clf.qualifies(c))
            for darts in good:
                c = EdgeCycle(darts)
                if forbidden and classify_cycle(surface, c, forbidden).parallel_to:
                    continue
                return key, c
        return None

    pool = _Pool(surface)
    pool.grow(active_darts)
    best = first(pool)
    masks = list(_pair_masks(surface, active_darts))
    if masks:
        # annulus cycles only matter when they can beat the best so far
        for mask in masks:
            pool.grow(mask, max_weight=best[0][0] if best else -1)
        best = first(pool, best[0] if best else None)
    if best is None:
        raise NoEssentialCycle("no essential cycle")
    return best[1]


def all_simple_cycles(surface: PolySurface, max_len: int | None = None):
    """Every vertex-simple cycle, each once (small surfaces only)."""
    vtx, nv = surface.vertex
    out = {}
    m = surface.n_darts
    limit = max_len or nv

    def rec(darts, visited):
        v = surface.head(darts[-1])
        if v == vtx[darts[0]]:
            key = canonical_darts(darts, surface)
            out.setdefault(key, EdgeCycle(key))
            return
        if len(darts) >= limit or v in visited:
            return
        visited.add(v)
        for d in range(m):
            # walking straight back along the same edge is not a cycle
            if surface.alpha[d] >= 0 and vtx[d] == v and surface.alpha[d] != darts[-1]:
                rec(darts + [d], visited)
        visited.discard(v)

    for d in range(m):
        if surface.alpha[d] >= 0:
            rec([d], {vtx[d]})
    return list(out.values())
