# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same functions and outputs as ``_pykernels``."""

from libc.stdlib cimport malloc, free

import numpy as np


cdef inline int _find(int* parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def vertex_labels(pairing):
    cdef Py_ssize_t m = len(pairing)
    cdef int[:] p = _ints(pairing)
    labels = [-1] * m
    cdef int* lab = <int*>malloc(max(m, 1) * sizeof(int))
    cdef Py_ssize_t s
    cdef int c, b, nv = 0
    try:
        for s in range(m):
            lab[s] = -1
        for s in range(m):
            if lab[s] >= 0:
                continue
            c = <int>s
            while lab[c] < 0:
                lab[c] = nv
                b = p[c]
                c = b - b % 3 + (b % 3 + 1) % 3
            nv += 1
        for s in range(m):
            labels[s] = lab[s]
    finally:
        free(lab)
    return labels, nv


def component_labels(pairing):
    cdef int[:] p = _ints(pairing)
    cdef Py_ssize_t n = len(pairing) // 3
    cdef int* comp = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* stack = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int nc = 0, top, t, u, i
    cdef Py_ssize_t t0
    try:
        for t0 in range(n):
            comp[t0] = -1
        for t0 in range(n):
            if comp[t0] >= 0:
                continue
            comp[t0] = nc
            top = 0
            stack[top] = <int>t0
            top += 1
            while top:
                top -= 1
                t = stack[top]
                for i in range(3):
                    u = p[3 * t + i] // 3
                    if comp[u] < 0:
                        comp[u] = nc
                        stack[top] = u
                        top += 1
            nc += 1
        out = [comp[t0] for t0 in range(n)]
    finally:
        free(comp)
        free(stack)
    return out, nc


def min_word(pairing, triangles):
    cdef int[:] p = _ints(pairing)
    cdef Py_ssize_t n = len(pairing) // 3
    cdef Py_ssize_t size = len(triangles)
    cdef int* label = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* rot = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* order = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* word = <int*>malloc(max(6 * n, 1) * sizeof(int))
    cdef int* best = <int*>malloc(max(6 * n, 1) * sizeof(int))
    cdef int have_best = 0, status, pos, norder, oi, t, rt, k, b, u, j, x, y, r0, t0
    cdef Py_ssize_t i
    try:
        for i in range(n):
            label[i] = -1
        for t0 in triangles:
            for r0 in range(3):
                label[t0] = 0
                rot[t0] = r0
                order[0] = t0
                norder = 1
                status = 2 if have_best else 0
                pos = 0
                oi = 0
                while oi < norder:
                    t = order[oi]
                    oi += 1
                    rt = rot[t]
                    for k in range(3):
                        b = p[3 * t + (rt + k) % 3]
                        u = b // 3
                        j = b % 3
                        if label[u] < 0:
                            label[u] = norder
                            rot[u] = j
                            order[norder] = u
                            norder += 1
                        x = label[u]
                        y = (j - rot[u] + 3) % 3
                        if status == 2:
                            if x > best[pos] or (x == best[pos] and y > best[pos + 1]):
                                status = 3
                                break
                            if x < best[pos] or y < best[pos + 1]:
                                status = 1
                        word[pos] = x
                        word[pos + 1] = y
                        pos += 2
                    if status == 3:
                        break
                for i in range(norder):
                    label[order[i]] = -1
                if status == 3:
                    continue
                if norder != size:
                    raise ValueError("triangle list is not a single component")
                if status != 2:
                    for i in range(pos):
                        best[i] = word[i]
                    have_best = 1
        if not have_best:
            return None
        return [best[i] for i in range(6 * size)]
    finally:
        free(label)
        free(rot)
        free(order)
        free(word)
        free(best)


cdef int[:] _ints(seq):
    return np.ascontiguousarray(seq, dtype=np.intc)


def as_array(seq):
    """Integer sequence in the layout the kernels read without copying."""
    return np.ascontiguousarray(seq, dtype=np.intc)


def cut_topology(alpha, phi, cut):
    cdef Py_ssize_t m = len(alpha)
    cdef int[:] al = _ints(alpha)
    cdef int[:] ph = _ints(phi)
    cdef int[:] ct = _ints(cut)
    cdef int* a = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* face = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* fpar = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* vpar = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* fcomp = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* mark = <int*>malloc(max(m, 1) * sizeof(int))
    cdef Py_ssize_t d
    cdef int nf = 0, x, y, ra, rb, nc = 0, f, c
    try:
        for d in range(m):
            a[d] = -1 if ct[d] else al[d]
            face[d] = -1
        for d in range(m):
            if face[d] < 0:
                x = <int>d
                while face[x] < 0:
                    face[x] = nf
                    x = ph[x]
                nf += 1
        for f in range(nf):
            fpar[f] = f
        for d in range(m):
            if a[d] >= 0:
                ra = _find(fpar, face[d])
                rb = _find(fpar, face[a[d]])
                if ra != rb:
                    fpar[ra] = rb
        for f in range(nf):
            mark[f] = -1
        for f in range(nf):
            ra = _find(fpar, f)
            if mark[ra] < 0:
                mark[ra] = nc
                nc += 1
            fcomp[f] = mark[ra]
        V = [0] * nc
        E = [0] * nc
        F = [0] * nc
        B = [0] * nc
        for f in range(nf):
            F[fcomp[f]] += 1
        for d in range(m):
            vpar[d] = <int>d
        for d in range(m):
            if a[d] >= 0:
                ra = _find(vpar, <int>d)
                rb = _find(vpar, ph[a[d]])
                if ra != rb:
                    vpar[ra] = rb
        for d in range(m):
            mark[d] = 0
        for d in range(m):
            c = fcomp[face[d]]
            ra = _find(vpar, <int>d)
            if not mark[ra]:
                mark[ra] = 1
                V[c] += 1
            E[c] += 1 if a[d] >= 0 else 2
        for c in range(nc):
            E[c] //= 2
        for d in range(m):
            mark[d] = 0
        for d in range(m):
            if a[d] >= 0 or mark[d]:
                continue
            x = <int>d
            while not mark[x]:
                mark[x] = 1
                y = ph[x]
                while a[y] >= 0:
                    y = ph[a[y]]
                x = y
            B[fcomp[face[d]]] += 1
        out = [fcomp[face[d]] for d in range(m)]
    finally:
        free(a)
        free(face)
        free(fpar)
        free(vpar)
        free(fcomp)
        free(mark)
    return out, nc, V, E, F, B


cdef void _bfs01(int nv, int[:] start, int[:] flat, int[:] head, int[:] weight,
                 int[:] allowed, int root, long long* dist, int* par, int* dq) nogil:
    # deque in a ring buffer of size 2 * nv + 2; each vertex is pushed at most deg times,
    # so the buffer is sized by the caller to the number of darts plus vertices
    cdef long long inf = 1LL << 60
    cdef int v, k, d, w, lo, hi, cap
    cdef long long nd
    cdef int* done = par + nv
    for v in range(nv):
        dist[v] = inf
        par[v] = -1
        done[v] = 0
    cap = dq[0]
    dist[root] = 0
    lo = 1
    hi = 2
    dq[1] = root
    while lo != hi:
        v = dq[lo]
        lo += 1
        if lo == cap:
            lo = 1
        if done[v]:
            continue
        done[v] = 1
        for k in range(start[v], start[v + 1]):
            d = flat[k]
            w = head[d]
            if not allowed[w]:
                continue
            nd = dist[v] + weight[d]
            if nd < dist[w]:
                dist[w] = nd
                par[w] = d
                if weight[d] == 0:
                    lo -= 1
                    if lo == 0:
                        lo = cap - 1
                    dq[lo] = w
                else:
                    dq[hi] = w
                    hi += 1
                    if hi == cap:
                        hi = 1


cdef tuple _run_bfs(adj_start, adj_dart, head, weight, allowed, int root):
    cdef int[:] st = _ints(adj_start)
    cdef int[:] fl = _ints(adj_dart)
    cdef int[:] hd = _ints(head)
    cdef int[:] wt = _ints(weight)
    cdef int[:] al = _ints(allowed)
    cdef int nv = len(adj_start) - 1
    cdef int cap = len(adj_dart) + nv + 3
    cdef long long* dist = <long long*>malloc(max(nv, 1) * sizeof(long long))
    cdef int* par = <int*>malloc(max(2 * nv, 1) * sizeof(int))
    cdef int* dq = <int*>malloc(cap * sizeof(int))
    cdef int v
    dq[0] = cap
    try:
        _bfs01(nv, st, fl, hd, wt, al, root, dist, par, dq)
        inf = 1 << 60
        d_out = [(-1 if dist[v] == inf else <long>dist[v]) for v in range(nv)]
        p_out = [par[v] for v in range(nv)]
    finally:
        free(dist)
        free(par)
        free(dq)
    return d_out, p_out


def bfs01(adj_start, adj_dart, head, weight, allowed, root):
    return _run_bfs(adj_start, adj_dart, head, weight, allowed, root)


def tree_cycles(adj_start, adj_dart, head, tail, weight, alpha, active, allowed, root,
                int max_weight=-1):
    """Fundamental cycles of the 0-1 shortest-path tree from ``root``."""
    cdef int[:] st = _ints(adj_start)
    cdef int[:] fl = _ints(adj_dart)
    cdef int[:] hd = _ints(head)
    cdef int[:] tl = _ints(tail)
    cdef int[:] wt = _ints(weight)
    cdef int[:] al = _ints(alpha)
    cdef int[:] act = _ints(active)
    cdef int[:] ok = _ints(allowed)
    cdef int nv = len(adj_start) - 1
    cdef Py_ssize_t m = len(alpha)
    cdef int cap = len(adj_dart) + nv + 3
    par_a = np.empty(max(2 * nv, 1), dtype=np.intc)
    cdef int[:] par = par_a
    cdef long long* dist = <long long*>malloc(max(nv, 1) * sizeof(long long))
    cdef int* dq = <int*>malloc(cap * sizeof(int))
    cdef int* depth = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef char* in_tree = <char*>malloc(max(m, 1))
    cdef int* stack = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef long long inf = 1LL << 60
    cdef Py_ssize_t d
    cdef int v, a, u, w, x, y, n, top, k, total
    out = []
    dq[0] = cap
    try:
        _bfs01(nv, st, fl, hd, wt, ok, root, dist, &par[0], dq)
        for d in range(m):
            in_tree[d] = 0
        for v in range(nv):
            depth[v] = -1
            if par[v] >= 0:
                in_tree[par[v]] = 1
        depth[root] = 0
        for v in range(nv):
            if dist[v] == inf or depth[v] >= 0:
                continue
            top = 0
            x = v
            while depth[x] < 0:
                stack[top] = x
                top += 1
                x = tl[par[x]]
            k = depth[x]
            while top:
                top -= 1
                k += 1
                depth[stack[top]] = k
        for d in range(m):
            a = al[d]
            if a < 0 or not act[d] or d > a or in_tree[d] or in_tree[a]:
                continue
            u = tl[d]
            w = hd[d]
            if dist[u] == inf or dist[w] == inf:
                continue
            x = u
            y = w
            n = 1
            total = wt[d]
            while depth[x] > depth[y]:
                total += wt[par[x]]
                x = tl[par[x]]
                n += 1
            while depth[y] > depth[x]:
                total += wt[par[y]]
                y = tl[par[y]]
                n += 1
            while x != y:
                total += wt[par[x]] + wt[par[y]]
                x = tl[par[x]]
                y = tl[par[y]]
                n += 2
            if total == 0 or (max_weight >= 0 and total > max_weight):
                continue
            out.append((total, n, <int>d))
    finally:
        free(dist)
        free(dq)
        free(depth)
        free(in_tree)
        free(stack)
    return par_a[:nv], out


cdef inline unsigned long long _mix(unsigned long long e) nogil:
    cdef unsigned long long z = e + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def edge_hash(e):
    """64-bit mix of an edge id; cycle keys are sums of these mod 2**64."""
    return _mix(<unsigned long long>e)


cdef inline int _edge(int[:] al, int d) nogil:
    return d if d < al[d] else al[d]


def forest_cycles(head, tail, weight, alpha, active, allowed, bint all_roots=False,
                  int max_weight=-1):
    """Tree cycles from one root per class of vertices joined by weight-0 edges."""
    cdef int[:] hd = _ints(head)
    cdef int[:] tl = _ints(tail)
    cdef int[:] wt = _ints(weight)
    cdef int[:] al = _ints(alpha)
    cdef int[:] act = _ints(active)
    cdef int[:] ok = _ints(allowed)
    cdef Py_ssize_t m = len(alpha)
    cdef int nv = len(allowed)
    st_a = np.zeros(nv + 1, dtype=np.intc)
    cdef int[:] st = st_a
    fl_a = np.empty(max(m, 1), dtype=np.intc)
    cdef int[:] fl = fl_a
    cdef int* fill = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef int* uf = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef char* used = <char*>malloc(max(nv, 1))
    cdef char* taken = <char*>malloc(max(nv, 1))
    cdef int cap = <int>m + nv + 3
    cdef long long* dist = <long long*>malloc(max(nv, 1) * sizeof(long long))
    cdef int* dq = <int*>malloc(cap * sizeof(int))
    cdef int* depth = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef char* in_tree = <char*>malloc(max(m, 1))
    cdef int* stack = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef long long inf = 1LL << 60
    cdef Py_ssize_t d
    cdef int v, a, u, w, x, y, n, top, k, total, ra, rb, root, e, tree
    cdef unsigned long long h
    cdef int[:] par
    pars = []
    out = []
    try:
        # adjacency by tail vertex
        for d in range(m):
            if al[d] >= 0 and act[d]:
                st[tl[d] + 1] += 1
        for v in range(nv):
            st[v + 1] += st[v]
            fill[v] = st[v]
        for d in range(m):
            if al[d] >= 0 and act[d]:
                fl[fill[tl[d]]] = <int>d
                fill[tl[d]] += 1
        # roots: smallest usable vertex of each weight-0 class
        for v in range(nv):
            uf[v] = v
            used[v] = 0
            taken[v] = 0
        for d in range(m):
            u = tl[d]
            v = hd[d]
            if al[d] >= 0 and act[d] and ok[u] and ok[v]:
                used[u] = 1
                if wt[d] == 0:
                    ra = _find(uf, u)
                    rb = _find(uf, v)
                    if ra != rb:
                        uf[ra] = rb
        roots = []
        for v in range(nv):
            if not used[v]:
                continue
            if all_roots:
                roots.append(v)
            else:
                ra = _find(uf, v)
                if not taken[ra]:
                    taken[ra] = 1
                    roots.append(v)
        for root in roots:
            tree = len(pars)
            par_a = np.empty(max(2 * nv, 1), dtype=np.intc)
            par = par_a
            pars.append(par_a[:nv])
            dq[0] = cap
            _bfs01(nv, st, fl, hd, wt, ok, root, dist, &par[0], dq)
            for d in range(m):
                in_tree[d] = 0
            for v in range(nv):
                depth[v] = -1
                if par[v] >= 0:
                    in_tree[par[v]] = 1
            depth[root] = 0
            for v in range(nv):
                if dist[v] == inf or depth[v] >= 0:
                    continue
                top = 0
                x = v
                while depth[x] < 0:
                    stack[top] = x
                    top += 1
                    x = tl[par[x]]
                k = depth[x]
                while top:
                    top -= 1
                    k += 1
                    depth[stack[top]] = k
            for d in range(m):
                a = al[d]
                if a < 0 or not act[d] or d > a or in_tree[d] or in_tree[a]:
                    continue
                u = tl[d]
                w = hd[d]
                if dist[u] == inf or dist[w] == inf:
                    continue
                x = u
                y = w
                n = 1
                total = wt[d]
                h = _mix(<unsigned long long>d)
                while depth[x] > depth[y]:
                    e = par[x]
                    total += wt[e]
                    h += _mix(<unsigned long long>_edge(al, e))
                    x = tl[e]
                    n += 1
                while depth[y] > depth[x]:
                    e = par[y]
                    total += wt[e]
                    h += _mix(<unsigned long long>_edge(al, e))
                    y = tl[e]
                    n += 1
                while x != y:
                    e = par[x]
                    total += wt[e]
                    h += _mix(<unsigned long long>_edge(al, e))
                    x = tl[e]
                    e = par[y]
                    total += wt[e]
                    h += _mix(<unsigned long long>_edge(al, e))
                    y = tl[e]
                    n += 2
                if total == 0 or (max_weight >= 0 and total > max_weight):
                    continue
                out.append((total, n, h, tree, <int>d))
    finally:
        free(fill)
        free(uf)
        free(used)
        free(taken)
        free(dist)
        free(dq)
        free(depth)
        free(in_tree)
        free(stack)
    return pars, out


def dual_path(adj_start, adj_dart, head, tail, sources, targets, banned):
    """Fewest-step path from any of ``sources`` to any of ``targets``."""
    cdef int[:] st = _ints(adj_start)
    cdef int[:] fl = _ints(adj_dart)
    cdef int[:] hd = _ints(head)
    cdef int[:] tl = _ints(tail)
    cdef int nv = len(adj_start) - 1
    cdef char* flag = <char*>malloc(max(nv, 1))
    cdef int* prev = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef int* queue = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef int v, w, d, k, lo = 0, hi = 0, found = -1
    try:
        for v in range(nv):
            flag[v] = 0
            prev[v] = -2
        for v in banned:
            flag[v] = 1
        for v in targets:
            flag[v] |= 2
        for v in sorted(set(sources)):
            if not flag[v] & 1:
                prev[v] = -1
                queue[hi] = v
                hi += 1
        while lo < hi:
            v = queue[lo]
            lo += 1
            if flag[v] & 2:
                found = v
                break
            for k in range(st[v], st[v + 1]):
                d = fl[k]
                w = hd[d]
                if prev[w] == -2 and not flag[w] & 1:
                    prev[w] = d
                    queue[hi] = w
                    hi += 1
        if found < 0:
            return None
        out = []
        v = found
        while prev[v] >= 0:
            out.append(prev[v])
            v = tl[prev[v]]
        out.reverse()
        return out
    finally:
        free(flag)
        free(prev)
        free(queue)


def cycle_darts(par, tail, head, alpha, int d):
    """Darts of the fundamental cycle of the non-tree dart ``d``."""
    cdef int[:] pr = _ints(par)
    cdef int[:] tl = _ints(tail)
    cdef int[:] hd = _ints(head)
    cdef int[:] al = _ints(alpha)
    cdef int nv = len(par)
    cdef int* ca = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef int* cb = <int*>malloc(max(nv, 1) * sizeof(int))
    cdef int na = 0, nb = 0, i, x
    try:
        # both chains end at the root; drop their common tail
        x = tl[d]
        ca[na] = x
        na += 1
        while pr[x] >= 0:
            x = tl[pr[x]]
            ca[na] = x
            na += 1
        x = hd[d]
        cb[nb] = x
        nb += 1
        while pr[x] >= 0:
            x = tl[pr[x]]
            cb[nb] = x
            nb += 1
        while na > 1 and nb > 1 and ca[na - 2] == cb[nb - 2]:
            na -= 1
            nb -= 1
        out = [pr[ca[i]] for i in range(na - 2, -1, -1)]
        out.append(d)
        out.extend([al[pr[cb[i]]] for i in range(nb - 1)])
    finally:
        free(ca)
        free(cb)
    return out
