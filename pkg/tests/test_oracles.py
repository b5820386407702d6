import math

import pytest

from pantslab.bounds import brown_theta, perfect_matchings
from pantslab.oracles import count_matchings, rooted_disks, rooted_simplicial_disks, trivalent_classes


def test_matchings_small():
    assert [count_matchings(m) for m in range(0, 11, 2)] == [1, 1, 3, 15, 105, 945]
    assert count_matchings(5) == 0


def test_rooted_disks_single_triangle():
    assert rooted_disks(1) == {(3, 0): 1}


def test_two_triangles():
    # a square with a diagonal: 4 boundary vertices, 2 rootings up to symmetry
    assert rooted_simplicial_disks(2, 1) == 2


def test_nonsimplicial_counts_dominate():
    for n in range(1, 5):
        simp = rooted_disks(n)
        every = rooted_disks(n, simplicial=False)
        for key, c in simp.items():
            assert every[key] >= c


@pytest.mark.parametrize("n", range(1, 6))
def test_brute_force_matches_brown(n):
    for j in range((n - 1) % 2, n, 2):
        assert rooted_simplicial_disks(n, j) == brown_theta(n, j)


def test_trivalent_classes_known_values():
    # connected cubic multigraphs with loops: 2, 5, 17, 71
    got = [trivalent_classes(v) for v in (2, 4, 6, 8)]
    assert [g["connected"] for g in got] == [2, 5, 17, 71]
    assert [g["all"] for g in got] == [2, 8, 31, 140]
    assert trivalent_classes(3)["all"] == 0


def test_trivalent_two_vertices_are_theta_and_dumbbell():
    reps = trivalent_classes(2)["representatives"]
    loops = sorted(sum(1 for u, v in edges if u == v) for edges in reps)
    assert loops == [0, 2]  # theta has none, the dumbbell two
