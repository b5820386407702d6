import json
from dataclasses import replace
from pathlib import Path

import pytest
from pants_fixtures import annulus_with_chord, figure, glasses, lopsided, theta

from pantslab.canonical import canonical_code
from pantslab.pants import (
    CombPants, DecompositionError, Pairing, PantsDecomposition, PantsError, SlideError, TightenError,
    cluster_graph, decomposition_from_dict, greedy_decomposition, is_tight, loose_disks, reassemble,
    slide, tighten, validate_decomposition,
)
from pantslab.sampler import SampleSpec, sample_surface
from pantslab.surface import disjoint_union, pillow, torus2

DATA = Path(__file__).parent / "data"
FROZEN = sorted(DATA.glob("*.json"))
FROZEN = [p for p in FROZEN if "expect" in json.loads(p.read_text())]


# --- single pants ------------------------------------------------------------------


@pytest.mark.parametrize("make,lengths,tight", [
    (theta, (2, 2, 2), True),
    (glasses, (1, 1, 4), True),
    (annulus_with_chord, (3, 2, 3), True),
    (figure, (9, 6, 6), False),
    (lopsided, (8, 7, 6), False),
])
def test_fixture_shapes(make, lengths, tight):
    p = make()
    p.validate()
    assert p.lengths == lengths
    assert cluster_graph(p).betti == 2
    assert is_tight(p)[0] == tight


def test_theta_clusters():
    g = cluster_graph(theta())
    assert [(c.kind, c.degenerate, c.degree) for c in g.clusters] == [("disk", True, 3)] * 2
    assert sorted(s.length for s in g.strands) == [1, 1, 1]


def test_glasses_clusters():
    g = cluster_graph(glasses())
    assert sorted(c.degree for c in g.clusters) == [3, 3]
    assert sorted(s.length for s in g.strands) == [1, 1, 1]


def test_annulus_cluster():
    g = cluster_graph(annulus_with_chord())
    kinds = sorted((c.kind, c.degree) for c in g.clusters)
    assert kinds == [("cylinder", 2)]
    assert [s.length for s in g.strands] == [1]


def test_figure_loose_disks():
    p = figure()
    g = cluster_graph(p)
    assert sorted(c.kind for c in g.clusters) == ["disk"] * 4
    assert sum(c.degenerate for c in g.clusters) == 1
    tight, loose = is_tight(p)
    assert len(loose) == 2
    for d in loose:
        assert [ln for _, _, ln in d.arcs] == [2, 2]


def test_stranded_edges():
    assert len(theta().stranded_edges()) == 3
    assert sorted(figure().stranded_edges()) == [13, 14, 15, 16, 17]


def test_pants_validation_errors():
    t = theta()
    with pytest.raises(PantsError, match="3 boundary"):
        replace(t, boundaries=t.boundaries[:2]).validate()
    with pytest.raises(PantsError):
        replace(t, boundaries=((0, 3), (4, 2), (0, 5))).validate()
    # a single triangle with three singleton holes is a disk, not pants
    with pytest.raises(PantsError):
        CombPants(3, ((0, 1), (1, 2), (2, 0)), ((0, 2, 4),), ((1,), (3,), (5,))).validate()


def test_pants_dict_round_trip():
    p = figure()
    assert CombPants.from_dict(json.loads(json.dumps(p.to_dict()))) == p


# --- slides on hand-built decompositions -------------------------------------------------


def double(p: CombPants, twists=(0, 0, 0)) -> PantsDecomposition:
    """Two copies of ``p`` glued boundary to boundary (no source surface)."""
    pairs = tuple(Pairing(0, k, 1, k, t) for k, t in enumerate(twists))
    return PantsDecomposition(None, (p, p), pairs)


def test_slide_rejects_unequal_arcs():
    dec = double(lopsided())
    disk = next(d for d in is_tight(dec.pants[0])[1] if d.triangles == (1, 2))
    with pytest.raises(SlideError, match="lengths 3 and 1"):
        slide(dec, 0, disk, arc=1)
    # the other direction would lengthen the curve and is never allowed
    with pytest.raises(SlideError, match="lengths 1 and 3"):
        slide(dec, 0, disk, arc=0, allow_shortening=True)


def test_shortening_slide():
    dec = double(lopsided())
    disk = next(d for d in is_tight(dec.pants[0])[1] if d.triangles == (1, 2))
    new, rec = slide(dec, 0, disk, arc=1, allow_shortening=True)
    assert (rec.pants, rec.boundary, rec.into, rec.into_boundary) == (0, 1, 1, 1)
    assert (rec.arc_length, rec.other_length) == (3, 1)
    assert new.curve_lengths == (8, 5, 6)
    for p in new.pants:
        p.validate()
    assert new.pants[0].area == 3 and new.pants[1].area == 7
    # the disk left P0; in P1 it sits on a strand again and stays loose
    assert len(is_tight(new.pants[0])[1]) == 1


def test_slide_rejects_a_disk_of_another_pants():
    dec = double(figure())
    disk = is_tight(dec.pants[0])[1][0]
    other = replace(dec, pants=(dec.pants[0], theta()))
    with pytest.raises(SlideError, match="not a loose disk"):
        slide(other, 1, disk)


def test_slide_needs_a_glued_boundary():
    dec = double(figure())
    dec = replace(dec, pairings=dec.pairings[1:])
    disk = next(d for d in is_tight(dec.pants[0])[1] if d.arcs[0][0] == 0)
    with pytest.raises(SlideError, match="not glued"):
        slide(dec, 0, disk, arc=0)


def test_equal_slide_on_figure_double():
    dec = double(figure(), twists=(0, 3, 1))
    disk = next(d for d in is_tight(dec.pants[0])[1] if d.triangles == (3, 4))
    new, rec = slide(dec, 0, disk, arc=0)
    assert new.curve_lengths == dec.curve_lengths
    assert sum(p.area for p in new.pants) == sum(p.area for p in dec.pants)
    for p in new.pants:
        p.validate()
        cluster_graph(p)


# --- frozen greedy outputs --------------------------------------------------------------


@pytest.mark.parametrize("path", FROZEN, ids=lambda p: p.stem)
def test_frozen_tighten(path):
    data = json.loads(path.read_text())
    dec = decomposition_from_dict(data)
    validate_decomposition(dec)
    assert len(loose_disks(dec)) == data["expect"]["loose"]
    trace = []
    out = tighten(dec, trace=trace)
    assert len(trace) == data["expect"]["slides"]
    assert not loose_disks(out)
    assert out.total_length == dec.total_length
    validate_decomposition(out)
    assert canonical_code(reassemble(out), oriented=True) == canonical_code(dec.surface, oriented=True)


def test_chain_follows_the_disk():
    data = json.loads((DATA / "pinch_n20.json").read_text())
    trace = []
    tighten(decomposition_from_dict(data), trace=trace)
    # one disk travelling: each slide starts where the previous one landed
    for a, b in zip(trace, trace[1:]):
        assert b.pants == a.into


def test_tighten_step_cap(monkeypatch):
    import pantslab.pants as pants_mod

    data = json.loads((DATA / "chain_n12.json").read_text())
    monkeypatch.setattr(pants_mod, "step_cap", lambda dec: 1)
    with pytest.raises(TightenError) as err:
        tighten(decomposition_from_dict(data))
    assert len(err.value.trace) == 1


def test_tighten_is_identity_on_tight_input():
    for x in sample_surface(SampleSpec(12, 30, 8, "genus:2-3")):
        dec = greedy_decomposition(x.surface)
        if not loose_disks(dec):
            trace = []
            assert tighten(dec, trace=trace) is dec
            assert trace == []
            return
    pytest.fail("no tight greedy output in the sample")


# --- greedy decompositions ------------------------------------------------------------------


@pytest.mark.parametrize("s", [pillow(), torus2(), disjoint_union(torus2(), torus2())])
def test_greedy_rejects(s):
    with pytest.raises(DecompositionError):
        greedy_decomposition(s)


@pytest.mark.parametrize("index", range(6))
def test_greedy_counts_and_round_trip(index):
    s = sample_surface(SampleSpec(16, 6, 99, "genus:2-4"))[index].surface
    g = s.genus[0]
    dec = greedy_decomposition(s)
    assert len(dec.pants) == 2 * g - 2 and len(dec.pairings) == 3 * g - 3
    validate_decomposition(dec)
    back = decomposition_from_dict(json.loads(dec.dumps()))
    assert back == dec
    assert [len(c.darts) for c in dec.curves()] == list(dec.curve_lengths)


def test_validation_catches_a_wrong_twist():
    data = json.loads((DATA / "absorb_n24.json").read_text())
    dec = decomposition_from_dict(data)
    k = max(range(len(dec.pairings)), key=lambda i: dec.curve_lengths[i])
    q = dec.pairings[k]
    shifted = replace(q, twist=(q.twist + 1) % dec.curve_lengths[k])
    bad = replace(dec, pairings=dec.pairings[:k] + (shifted,) + dec.pairings[k + 1:])
    with pytest.raises(DecompositionError):
        validate_decomposition(bad)
