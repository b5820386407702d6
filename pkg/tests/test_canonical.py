import random

import pytest
from conftest import surfaces
from hypothesis import given, settings
from hypothesis import strategies as st

from pantslab.canonical import (
    BudgetExceeded, canonical_code, census, census_by_genus, census_csv, double_factorial_odd,
    iter_pairings, resolve_budget,
)
from pantslab.surface import disjoint_union, grid_torus, mirror, pillow, relabel, torus2


def test_double_factorial():
    assert [double_factorial_odd(m) for m in (0, 2, 4, 6, 12)] == [1, 1, 3, 15, 10395]


def test_iter_pairings_counts():
    assert sum(1 for _ in iter_pairings(6)) == 15
    assert sum(1 for _ in iter_pairings(12)) == 10395


def test_census_small():
    two = census(2)
    assert len(two) == 3
    assert sum(e.multiplicity for e in two) == 15
    four = census(4)
    assert len(four) == 17
    assert sum(e.multiplicity for e in four) == 10395


def test_census_by_genus_two_triangles():
    # with two triangles every gluing is connected
    r = census_by_genus(2)
    assert r["disconnected"] == 0
    assert sum(r["connected"].values()) == 3


def test_census_csv_header():
    text = census_csv(census(2))
    assert text.splitlines()[0] == "code_hex,multiplicity,genus,components"


def test_budget(monkeypatch):
    with pytest.raises(BudgetExceeded):
        census(4, budget=100)
    monkeypatch.setenv("PANTSLAB_BUDGET", "7")
    assert resolve_budget() == 7
    assert resolve_budget(9) == 9
    with pytest.raises(BudgetExceeded):
        census(2)


@given(surfaces(10), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_code_invariant_under_relabelling(s, r):
    perm = list(range(s.n_triangles))
    r.shuffle(perm)
    t = relabel(s, perm, [r.randrange(3) for _ in perm])
    assert canonical_code(t) == canonical_code(s)
    assert canonical_code(t, oriented=True) == canonical_code(s, oriented=True)


@given(surfaces(10))
@settings(max_examples=60, deadline=None)
def test_unoriented_code_ignores_mirror(s):
    assert canonical_code(mirror(s)) == canonical_code(s)


def test_codes_separate_examples():
    codes = {canonical_code(x) for x in (pillow(), torus2(), grid_torus(3, 3), grid_torus(3, 4))}
    assert len(codes) == 4


def test_union_order_irrelevant():
    a = disjoint_union(pillow(), torus2())
    b = disjoint_union(torus2(), pillow())
    assert canonical_code(a) == canonical_code(b)
