"""Exhaustive enumerations used to check the closed-form counts.

Nothing here calls the formulas in :mod:`pantslab.bounds`; the two sides
only meet in the verification tables.
"""

from __future__ import annotations

import itertools
from collections import Counter

import networkx as nx
import numpy as np


def count_matchings(m: int) -> int:
    """Number of perfect matchings of ``m`` points, by explicit recursion."""
    def rec(items):
        if not items:
            return 1
        first, rest = items[0], items[1:]
        return sum(rec(rest[:k] + rest[k + 1:]) for k in range(len(rest)))

    if m % 2:
        return 0
    return rec(tuple(range(m)))


# --- rooted disk triangulations -------------------------------------------


def _disk_profile(n, status):
    """Vertex labels and checks for a complete rooted gluing of ``n`` triangles."""
    m = 3 * n
    parent = list(range(m))  # corners

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def nxt(c):
        return c - c % 3 + (c % 3 + 1) % 3

    for a in range(m):
        b = status[a]
        if b > a:
            # side a: corner a -> nxt(a); reversed onto b
            for x, y in ((a, nxt(b)), (nxt(a), b)):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
    roots = {}
    vert = [roots.setdefault(find(c), len(roots)) for c in range(m)]
    n_boundary = sum(1 for s in range(m) if status[s] == -1)
    n_edges = (m - n_boundary) // 2 + n_boundary
    chi = len(roots) - n_edges + n
    return vert, chi, n_boundary


def _boundary_circles(n, status):
    m = 3 * n
    seen = set()
    circles = 0

    def nxt(c):
        return c - c % 3 + (c % 3 + 1) % 3

    for s in range(m):
        if status[s] != -1 or s in seen:
            continue
        circles += 1
        x = s
        while x not in seen:
            seen.add(x)
            y = nxt(x)
            while status[y] != -1:
                y = nxt(status[y])
            x = y
    return circles


def _is_simplicial(n, status, vert):
    edges = set()
    for t in range(n):
        a, b, c = vert[3 * t], vert[3 * t + 1], vert[3 * t + 2]
        if len({a, b, c}) < 3:
            return False
    for s in range(3 * n):
        b = status[s]
        if b != -1 and b < s:
            continue
        t, i = divmod(s, 3)
        u, v = vert[s], vert[3 * t + (i + 1) % 3]
        key = (min(u, v), max(u, v))
        if key in edges:
            return False
        edges.add(key)
    faces = set()
    for t in range(n):
        key = frozenset(vert[3 * t:3 * t + 3])
        if key in faces:
            return False
        faces.add(key)
    return True


def rooted_disks(n: int, simplicial: bool = True) -> Counter:
    """Count rooted triangulated disks with ``n`` triangles by boundary length.

    The root is side 0 of triangle 0, kept on the boundary.  Sides are
    decided in order; a side either stays on the boundary, is glued to a
    later undecided side, or is glued to side 0 of a fresh triangle.  This
    labels every rooted disk in exactly one way.  Returns a Counter keyed
    by ``(boundary_vertices, interior_vertices)``.
    """
    m = 3 * n
    status = [-2] * m
    status[0] = -1
    out: Counter = Counter()
    created = [1]

    def rec(pos):
        T = created[0]
        while pos < 3 * T and status[pos] != -2:
            pos += 1
        if pos == 3 * T:
            if T != n:
                return
            vert, chi, nb = _disk_profile(n, status)
            if chi != 1 or _boundary_circles(n, status) != 1:
                return
            if simplicial and not _is_simplicial(n, status, vert):
                return
            nv = max(vert) + 1
            out[(nb, nv - nb)] += 1
            return
        s = pos
        status[s] = -1
        rec(pos + 1)
        for b in range(s + 1, 3 * T):
            if status[b] != -2:
                continue
            if simplicial and b // 3 == s // 3:
                continue  # folds a triangle onto itself
            status[s], status[b] = b, s
            rec(pos + 1)
            status[b] = -2
        if T < n:
            nb = 3 * T
            status[s], status[nb] = nb, s
            created[0] = T + 1
            rec(pos + 1)
            created[0] = T
            status[nb] = -2
        status[s] = -2

    rec(1)
    return out


def rooted_simplicial_disks(n: int, j: int) -> int:
    """Rooted simplicial disks with ``n`` triangles and ``j + 3`` boundary vertices."""
    return sum(c for (nb, _), c in rooted_disks(n).items() if nb == j + 3)


# --- trivalent multigraphs --------------------------------------------------


def _trivalent_labelled(n_vertices: int):
    """Multigraphs on labelled tripods, generated in discovery order.

    Half-edge ``3v + k``.  The smallest open half-edge of a touched vertex
    is always paired next, either with another open half-edge of a touched
    vertex or with the first half-edge of the next untouched vertex.  Every
    isomorphism class appears at least once.
    """
    m = 3 * n_vertices
    partner = [-1] * m
    touched = [1]
    seen = set()

    def rec():
        T = touched[0]
        a = next((h for h in range(3 * T) if partner[h] == -1), None)
        if a is None:
            if T == n_vertices:
                key = tuple(sorted((min(h // 3, partner[h] // 3), max(h // 3, partner[h] // 3))
                                   for h in range(m) if h < partner[h]))
                if key not in seen:
                    seen.add(key)
                    yield key
                return
            touched[0] = T + 1
            yield from rec()
            touched[0] = T
            return
        for b in range(a + 1, 3 * T):
            if partner[b] == -1:
                partner[a], partner[b] = b, a
                yield from rec()
                partner[a] = partner[b] = -1
        if T < n_vertices:
            b = 3 * T
            partner[a], partner[b] = b, a
            touched[0] = T + 1
            yield from rec()
            touched[0] = T
            partner[a] = partner[b] = -1

    yield from rec()


def _vertex_invariants(n_vertices, edges):
    a = np.zeros((n_vertices, n_vertices), dtype=np.int64)
    for u, v in edges:
        a[u, v] += 1
        if u != v:
            a[v, u] += 1
    walks = []
    p = np.eye(n_vertices, dtype=np.int64)
    for _ in range(n_vertices):
        p = p @ a
        walks.append(np.diag(p))
    colour = [tuple(int(w[v]) for w in walks) for v in range(n_vertices)]
    # colour refinement on the weighted adjacency
    for _ in range(n_vertices):
        new = [(colour[v], tuple(sorted((colour[u], int(a[v, u])) for u in range(n_vertices)
                                        if a[v, u])))
               for v in range(n_vertices)]
        if len(set(new)) == len(set(colour)):
            break
        colour = new
    return colour, a


def _canonical_multigraph(n_vertices, edges):
    """Canonical form: minimal edge list over colour-respecting relabellings."""
    colour, a = _vertex_invariants(n_vertices, edges)
    order = sorted(set(colour))
    classes = [[v for v in range(n_vertices) if colour[v] == c] for c in order]
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
        new = {}
        for part in parts:
            for v in part:
                new[v] = len(new)
        form = tuple(sorted((min(new[u], new[v]), max(new[u], new[v])) for u, v in edges))
        if best is None or form < best:
            best = form
    return (tuple(order), best)


def trivalent_classes(n_vertices: int) -> dict:
    """Isomorphism classes of trivalent multigraphs (loops allowed).

    Returns ``{"all": count, "connected": count, "representatives": [...]}``.
    """
    if n_vertices % 2:
        return {"all": 0, "connected": 0, "representatives": []}
    forms = {}
    for edges in _trivalent_labelled(n_vertices):
        forms.setdefault(_canonical_multigraph(n_vertices, edges), edges)
    reps = list(forms.values())
    connected = 0
    for edges in reps:
        h = nx.MultiGraph()
        h.add_nodes_from(range(n_vertices))
        h.add_edges_from(edges)
        connected += nx.is_connected(h)
    return {"all": len(reps), "connected": connected, "representatives": reps}
