"""Pure-Python reference kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and the same output; ``pantslab.kernels`` picks one at import.
Inputs are plain sequences of ints so both backends accept lists or
numpy arrays.
"""

from __future__ import annotations


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def vertex_labels(pairing):
    """Label the corners ``3t+i`` of a triangle gluing by vertex.

    The rotation around a vertex sends corner ``s`` to ``next(pairing[s])``
    where ``next`` steps to the following corner of the same triangle.
    Labels are assigned in order of first appearance of each orbit.
    """
    m = len(pairing)
    labels = [-1] * m
    nv = 0
    for s in range(m):
        if labels[s] >= 0:
            continue
        c = s
        while labels[c] < 0:
            labels[c] = nv
            b = pairing[c]
            c = b - b % 3 + (b % 3 + 1) % 3
        nv += 1
    return labels, nv


def component_labels(pairing):
    """Connected components of the triangles, labelled by first appearance."""
    n = len(pairing) // 3
    comp = [-1] * n
    nc = 0
    for t0 in range(n):
        if comp[t0] >= 0:
            continue
        comp[t0] = nc
        stack = [t0]
        while stack:
            t = stack.pop()
            for i in range(3):
                u = pairing[3 * t + i] // 3
                if comp[u] < 0:
                    comp[u] = nc
                    stack.append(u)
        nc += 1
    return comp, nc


def min_word(pairing, triangles):
    """Lexicographically minimal traversal word of one connected component.

    ``triangles`` lists the triangles of the component.  Each start side
    seeds a breadth-first relabelling in which a newly reached triangle is
    rotated so that its entry side becomes local side 0; the word records,
    for every local side in order, the new label and local side of its
    partner.
    """
    best = None
    size = len(triangles)
    for t0 in triangles:
        for r0 in range(3):
            label = {t0: 0}
            rot = {t0: r0}
            order = [t0]
            word = []
            status = 0 if best is None else 2  # 2: still tied with best
            pos = 0
            for t in order:
                rt = rot[t]
                for k in range(3):
                    b = pairing[3 * t + (rt + k) % 3]
                    u = b // 3
                    j = b % 3
                    if u not in label:
                        label[u] = len(order)
                        rot[u] = j
                        order.append(u)
                    x = label[u]
                    y = (j - rot[u]) % 3
                    if status == 2:
                        bx = best[pos]
                        by = best[pos + 1]
                        if x > bx or (x == bx and y > by):
                            status = 3
                            break
                        if x < bx or y < by:
                            status = 1
                    word.append(x)
                    word.append(y)
                    pos += 2
                if status == 3:
                    break
            if status == 3:
                continue
            if status != 2:
                best = word
            if len(order) != size:
                raise ValueError("triangle list is not a single component")
    return best


def cut_topology(alpha, phi, cut):
    """Topology of a polygonal map after detaching the darts in ``cut``.

    ``alpha[d]`` is the opposite dart or -1 on the boundary, ``phi`` the
    face successor.  Darts with ``cut[d]`` true are treated as boundary.
    Returns ``(face_comp, ncomp, V, E, F, B)`` where the last four are
    per-component lists of vertex, edge, face and boundary-circle counts.
    """
    m = len(alpha)
    a = [(-1 if cut[d] else alpha[d]) for d in range(m)]
    # faces
    face = [-1] * m
    nf = 0
    for d in range(m):
        if face[d] < 0:
            x = d
            while face[x] < 0:
                face[x] = nf
                x = phi[x]
            nf += 1
    # components over faces
    parent = list(range(nf))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in range(m):
        if a[d] >= 0:
            ra, rb = find(face[d]), find(face[a[d]])
            if ra != rb:
                parent[ra] = rb
    comp_of_root = {}
    face_comp = [0] * nf
    for f in range(nf):
        r = find(f)
        if r not in comp_of_root:
            comp_of_root[r] = len(comp_of_root)
        face_comp[f] = comp_of_root[r]
    nc = len(comp_of_root)
    V = [0] * nc
    E = [0] * nc
    F = [0] * nc
    B = [0] * nc
    for f in range(nf):
        F[face_comp[f]] += 1
    # vertices: tails of darts joined through d -> phi(a[d])
    vpar = list(range(m))

    def vfind(x):
        while vpar[x] != x:
            vpar[x] = vpar[vpar[x]]
            x = vpar[x]
        return x

    for d in range(m):
        if a[d] >= 0:
            ra, rb = vfind(d), vfind(phi[a[d]])
            if ra != rb:
                vpar[ra] = rb
    seen = set()
    for d in range(m):
        r = vfind(d)
        if r not in seen:
            seen.add(r)
            V[face_comp[face[d]]] += 1
        # interior darts are half an edge, boundary darts a whole one
        E[face_comp[face[d]]] += 1 if a[d] >= 0 else 2
    for c in range(nc):
        E[c] //= 2
    # boundary circles
    bseen = [False] * m
    for d in range(m):
        if a[d] >= 0 or bseen[d]:
            continue
        x = d
        while not bseen[x]:
            bseen[x] = True
            y = phi[x]
            while a[y] >= 0:
                y = phi[a[y]]
            x = y
        B[face_comp[face[d]]] += 1
    return [face_comp[face[d]] for d in range(m)], nc, V, E, F, B


def bfs01(adj_start, adj_dart, head, weight, allowed, root):
    """0-1 breadth-first search on a dart graph.

    ``adj_start``/``adj_dart`` is a CSR list of outgoing darts per vertex,
    ``head[d]`` the target vertex, ``weight[d]`` in {0, 1}; only vertices
    with ``allowed[v]`` are entered.  Returns ``(dist, parent_dart)`` with
    -1 for unreachable vertices and for the root's parent.
    """
    from collections import deque

    nv = len(adj_start) - 1
    inf = 1 << 60
    dist = [inf] * nv
    par = [-1] * nv
    dist[root] = 0
    dq = deque([root])
    done = [False] * nv
    while dq:
        v = dq.popleft()
        if done[v]:
            continue
        done[v] = True
        dv = dist[v]
        for k in range(adj_start[v], adj_start[v + 1]):
            d = adj_dart[k]
            w = head[d]
            if not allowed[w]:
                continue
            nd = dv + weight[d]
            if nd < dist[w]:
                dist[w] = nd
                par[w] = d
                if weight[d] == 0:
                    dq.appendleft(w)
                else:
                    dq.append(w)
    return [(-1 if x == inf else x) for x in dist], par


def as_array(seq):
    """Integer sequence in the layout the kernels read without copying."""
    return list(seq)


_MASK = (1 << 64) - 1


def edge_hash(e):
    """64-bit mix of an edge id; cycle keys are sums of these mod 2**64."""
    z = (e + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _tree_records(dist, par, head, tail, weight, alpha, active, root, max_weight, tree):
    nv = len(dist)
    in_tree = set(par[v] for v in range(nv) if par[v] >= 0)
    depth = [-1] * nv
    depth[root] = 0
    for v in range(nv):
        if dist[v] < 0 or depth[v] >= 0:
            continue
        stack = []
        x = v
        while depth[x] < 0:
            stack.append(x)
            x = tail[par[x]]
        k = depth[x]
        while stack:
            k += 1
            depth[stack.pop()] = k
    out = []
    for d in range(len(alpha)):
        a = alpha[d]
        if a < 0 or not active[d] or d > a or d in in_tree or a in in_tree:
            continue
        u, w = tail[d], head[d]
        if dist[u] < 0 or dist[w] < 0:
            continue
        # climb to the lowest common ancestor
        x, y = u, w
        n = 1
        wt = weight[d]
        h = edge_hash(d)
        while depth[x] > depth[y]:
            e = par[x]
            wt += weight[e]
            h += edge_hash(min(e, alpha[e]))
            x = tail[e]
            n += 1
        while depth[y] > depth[x]:
            e = par[y]
            wt += weight[e]
            h += edge_hash(min(e, alpha[e]))
            y = tail[e]
            n += 1
        while x != y:
            e, f = par[x], par[y]
            wt += weight[e] + weight[f]
            h += edge_hash(min(e, alpha[e])) + edge_hash(min(f, alpha[f]))
            x = tail[e]
            y = tail[f]
            n += 2
        if wt == 0 or (max_weight >= 0 and wt > max_weight):
            continue
        out.append((wt, n, h & _MASK, tree, d))
    return out


def tree_cycles(adj_start, adj_dart, head, tail, weight, alpha, active, allowed, root,
                max_weight=-1):
    """Fundamental cycles of the 0-1 shortest-path tree grown from ``root``.

    One cycle per non-tree edge ``{d, alpha[d]}`` (taken along its smaller
    dart) with both ends reached: the tree path to ``tail[d]``, then ``d``,
    then back along the tree to the root, with the common part removed.
    Returns ``(parent_dart, records)`` where each record is
    ``(weight, n_darts, d)``.  Cycles of weight 0 are skipped, and so are
    cycles heavier than ``max_weight`` when it is not negative.
    """
    dist, par = bfs01(adj_start, adj_dart, head, weight, allowed, root)
    recs = _tree_records(dist, par, head, tail, weight, alpha, active, root, max_weight, 0)
    return par, [(w, n, d) for w, n, _, _, d in recs]


def forest_cycles(head, tail, weight, alpha, active, allowed, all_roots=False,
                  max_weight=-1):
    """Tree cycles from one root per class of vertices joined by weight-0 edges.

    Only interior darts with ``active`` set are used, and only vertices
    with ``allowed`` set are entered.  The root of a class is its smallest
    vertex; with ``all_roots`` every usable vertex is a root.  Returns
    ``(parents, records)``: one parent-dart array per tree and records
    ``(weight, n_darts, key, tree, d)``, where ``key`` is the sum of
    :func:`edge_hash` over the cycle's edges.
    """
    m = len(alpha)
    nv = len(allowed)
    buckets = [[] for _ in range(nv)]
    for d in range(m):
        if alpha[d] >= 0 and active[d]:
            buckets[tail[d]].append(d)
    start = [0]
    flat = []
    for b in buckets:
        flat.extend(b)
        start.append(len(flat))
    parent = list(range(nv))
    used = [False] * nv
    for d in range(m):
        u, v = tail[d], head[d]
        if alpha[d] >= 0 and active[d] and allowed[u] and allowed[v]:
            used[u] = True
            if weight[d] == 0:
                ra, rb = _find(parent, u), _find(parent, v)
                if ra != rb:
                    parent[ra] = rb
    if all_roots:
        roots = [v for v in range(nv) if used[v]]
    else:
        roots = []
        taken = set()
        for v in range(nv):
            if used[v] and _find(parent, v) not in taken:
                taken.add(_find(parent, v))
                roots.append(v)
    pars = []
    recs = []
    for root in roots:
        dist, par = bfs01(start, flat, head, weight, allowed, root)
        recs.extend(_tree_records(dist, par, head, tail, weight, alpha, active, root,
                                  max_weight, len(pars)))
        pars.append(par)
    return pars, recs


def dual_path(adj_start, adj_dart, head, tail, sources, targets, banned):
    """Fewest-step path from any of ``sources`` to any of ``targets``.

    Nodes in ``banned`` are never entered (a banned source is dropped).
    Returns the darts used, in order, or ``None``.  Ties go to the
    smallest source and then to the first dart in adjacency order.
    """
    nv = len(adj_start) - 1
    bad = [False] * nv
    for v in banned:
        bad[v] = True
    goal = [False] * nv
    for v in targets:
        goal[v] = True
    prev = [-2] * nv
    queue = []
    for v in sorted(set(sources)):
        if not bad[v]:
            prev[v] = -1
            queue.append(v)
    for v in queue:
        if goal[v]:
            out = []
            while prev[v] >= 0:
                d = prev[v]
                out.append(d)
                v = tail[d]
            return out[::-1]
        for k in range(adj_start[v], adj_start[v + 1]):
            d = adj_dart[k]
            w = head[d]
            if prev[w] == -2 and not bad[w]:
                prev[w] = d
                queue.append(w)
    return None


def cycle_darts(par, tail, head, alpha, d):
    """Darts of the fundamental cycle of the non-tree dart ``d``."""
    x = tail[d]
    above = {x}
    while par[x] >= 0:
        x = tail[par[x]]
        above.add(x)
    right = []
    y = head[d]
    while y not in above:
        right.append(par[y])
        y = tail[par[y]]
    left = []
    x = tail[d]
    while x != y:
        left.append(par[x])
        x = tail[par[x]]
    return left[::-1] + [d] + [alpha[z] for z in right]
