import json
import random

import pytest
from conftest import random_pairing, surfaces
from hypothesis import given, settings

from pantslab.curves import (
    LONG, CurveError, CutInvariantError, EdgeCycle, NoEssentialCycle, PolySurface, TransversalCurve,
    _boundary_vertices, _qualifies, all_simple_cycles, blow_up, canonical_darts, classify_cycle,
    cocycle_basis, cut_along, cycle_class, edge_cycle_from_json, edge_cycle_to_json, lift_cycle,
    pair_separating_cycles, random_transversal_curve, shortest_essential_cycle, straighten,
    transversal_class,
)
from pantslab.surface import from_pairing, grid_torus, pillow, torus2


def closed_surfaces(count, lo=2, hi=8, min_genus=1, seed0=0):
    out = []
    seed = seed0
    while len(out) < count:
        r = random.Random(seed)
        seed += 1
        s = from_pairing(random_pairing(2 * r.randint(lo // 2, hi // 2), r))
        if s.n_components == 1 and s.genus[0] >= min_genus:
            out.append(s)
    return out


# --- edge cycles ----------------------------------------------------------------


def test_edge_cycle_validation():
    pol = PolySurface.from_comb(torus2())
    EdgeCycle((0,)).validate(pol)  # every edge of the one-vertex torus is a loop
    with pytest.raises(CurveError):
        EdgeCycle((99,)).validate(pol)
    cut = pol.cut([0])
    with pytest.raises(CurveError, match="boundary"):
        EdgeCycle((0,)).validate(cut)


def test_edge_cycle_json_round_trip():
    s = grid_torus(3, 3)
    pol = PolySurface.from_comb(s)
    c = shortest_essential_cycle(pol)
    text = edge_cycle_to_json(s, c)
    assert set(json.loads(text)) == {"edges"}
    assert edge_cycle_from_json(s, text) == c
    with pytest.raises(CurveError):
        edge_cycle_from_json(s, '{"edges": [0]}')


def test_canonical_darts_rotation_and_reversal():
    pol = PolySurface.from_comb(grid_torus(3, 3))
    c = shortest_essential_cycle(pol)
    d = list(c.darts)
    rot = d[1:] + d[:1]
    rev = [pol.alpha[x] for x in reversed(d)]
    assert canonical_darts(rot, pol) == canonical_darts(rev, pol) == canonical_darts(d, pol)


# --- shortest essential cycles against brute force ------------------------------------


def brute_best(pol, max_len=None):
    blocked = _boundary_vertices(pol)
    vtx, _ = pol.vertex
    lens = [c.length(pol) for c in all_simple_cycles(pol, max_len)
            if not any(blocked[vtx[d]] for d in c.darts) and _qualifies(pol, c.darts)]
    return min(lens) if lens else None


def test_sphere_has_no_essential_cycle():
    with pytest.raises(NoEssentialCycle):
        shortest_essential_cycle(pillow())


@pytest.mark.parametrize("s", closed_surfaces(40, 2, 8))
def test_shortest_essential_closed(s):
    pol = PolySurface.from_comb(s)
    c = shortest_essential_cycle(pol)
    c.validate(pol)
    assert c.is_vertex_simple(pol)
    assert classify_cycle(pol, c).essential
    assert c.length(pol) == brute_best(pol)


@pytest.mark.parametrize("s", closed_surfaces(25, 4, 12, min_genus=2, seed0=1000))
def test_shortest_essential_after_cuts(s):
    # keep cutting; each step must match the exhaustive search, including
    # the planar stages where annuli round pairs of holes are needed
    cur = PolySurface.from_comb(s)
    while True:
        best = brute_best(cur, 12)
        if best is None:
            with pytest.raises(NoEssentialCycle):
                shortest_essential_cycle(cur)
            return
        c = shortest_essential_cycle(cur)
        assert c.length(cur) == best
        cur = cur.cut(c.darts)


def test_pair_separating_cycles_are_sorted():
    s = closed_surfaces(1, 10, 10, min_genus=2, seed0=77)[0]
    r = blow_up(s, 2, depth=2)
    out = pair_separating_cycles(r.poly)
    assert out == sorted(out)


def test_forbidden_skips_parallel_curves():
    pol = PolySurface.from_comb(grid_torus(3, 3))
    c = shortest_essential_cycle(pol)
    d = shortest_essential_cycle(pol, forbidden=[c])
    assert canonical_darts(d.darts, pol) != canonical_darts(c.darts, pol)
    assert not classify_cycle(pol, d, [c]).parallel_to


# --- cutting ---------------------------------------------------------------------------


@pytest.mark.parametrize("s", closed_surfaces(20, 4, 12, seed0=500))
def test_cut_conserves_euler_and_adds_two_circles(s):
    pol = PolySurface.from_comb(s)
    c = shortest_essential_cycle(pol)
    res = cut_along(pol, [c])
    assert res.euler == sum(pol.euler())
    assert len(res.circles) == 2
    left, right = res.curve_circles[0]
    assert left != right


def test_cut_rejects_overlapping_curves():
    pol = PolySurface.from_comb(grid_torus(3, 3))
    c = shortest_essential_cycle(pol)
    with pytest.raises(CurveError):
        cut_along(pol, [c, c])


def test_classify_contractible():
    pol = PolySurface.from_comb(grid_torus(3, 3))
    # the boundary of one triangle
    tri = EdgeCycle((0, 1, 2))
    k = classify_cycle(pol, tri)
    assert k.disk_bounding and k.separating and not k.essential


# --- blow-up -------------------------------------------------------------------------------


@given(surfaces(8))
@settings(max_examples=30, deadline=None)
def test_blow_up_keeps_topology(s):
    for mult, depth in ((1, 1), (2, 1), (2, 2), (3, 2)):
        r = blow_up(s, mult, depth=depth)
        assert sorted(r.poly.euler()) == sorted(s.euler)
        assert r.n_long_edges == mult * s.n_edges
        assert sum(1 for k in r.face_kind if k == "triangle") == s.n_triangles
        assert sum(1 for k in r.face_kind if k == "polygon") == s.n_vertices


def test_lift_and_project():
    s = grid_torus(3, 3)
    base = shortest_essential_cycle(PolySurface.from_comb(s))
    r = blow_up(s, 2, depth=2)
    for copies in ([0] * len(base.darts), [1] * len(base.darts)):
        up = lift_cycle(r, base, copies)
        assert r.project(up) == base
        assert up.length(r.poly) == base.length(PolySurface.from_comb(s))
    with pytest.raises(CurveError):
        lift_cycle(r, base, [5] * len(base.darts))


# --- transversal curves and straightening ----------------------------------------------------


def test_transversal_json_round_trip():
    s = grid_torus(3, 3)
    a = random_transversal_curve(s, random.Random(1))
    b = TransversalCurve.from_json(s, a.to_json(s))
    assert b.exits == a.exits
    assert all(abs(x - y) < 1e-12 for x, y in zip(a.positions, b.positions))
    # without explicit sides the crossings are resolved from the edges
    data = json.loads(a.to_json(s))
    del data["sides"]
    c = TransversalCurve.from_json(s, json.dumps(data))
    assert c.length(s) > 0


def test_transversal_validation():
    s = torus2()
    with pytest.raises(CurveError):
        TransversalCurve((0,), (1.5,)).validate(s)


@pytest.mark.parametrize("seed", range(30))
def test_straighten_bound_and_class(seed):
    r = random.Random(seed)
    s = closed_surfaces(1, 4, 16, seed0=seed * 31)[0]
    a = random_transversal_curve(s, r, steps=r.randint(1, 12))
    out = straighten(s, a)
    basis = cocycle_basis(s)
    assert out.length <= 2 * a.length(s) + 1e-9
    assert out.boundary_length <= a.length(s) + 1e-9 or out.length <= 2 * a.length(s)
    assert cycle_class(s, out.cycle, basis) == transversal_class(s, a, basis)
