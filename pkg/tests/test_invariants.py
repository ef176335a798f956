import random

import pytest

from btquot.errors import InvalidProfile
from btquot.gfpoly import is_irreducible, make_field, polys_upto
from btquot.invariants import (
    NotATree,
    RamProfile,
    Report,
    TreePresentation,
    count_monic_irreducibles,
    critical_group,
    cross_check,
    edges,
    eichler_count,
    euler_check,
    genus,
    graph_h1,
    presentation,
    smith_normal_form,
    smooth_point_criterion,
    spanning_tree_count,
    sweep_profiles,
    v1,
    vq1,
    wp,
)


class FakeVertex:
    def __init__(self, index, stab):
        self.index = index
        self.stabilizer_order = stab


class FakeEdge:
    def __init__(self, a, b):
        self.a = a
        self.b = b


class FakeGraph:
    def __init__(self, q, stabs, pairs):
        self.q = q
        self.vertices = [FakeVertex(i, s) for i, s in enumerate(stabs)]
        self.edges = [FakeEdge(a, b) for a, b in pairs]

    def degree(self, i):
        return sum((e.a == i) + (e.b == i) for e in self.edges)


def edge_graph(q):
    return FakeGraph(q, [q**2 - 1, q**2 - 1], [(0, 1)])


def banana_graph(q):
    return FakeGraph(q, [q - 1, q - 1], [(0, 1)] * (q + 1))


def star_tree_q4():
    # two adjacent centers of degree 5, four leaves hanging off each
    pairs = [(0, 1)]
    pairs += [(0, k) for k in range(2, 6)]
    pairs += [(1, k) for k in range(6, 10)]
    stabs = [3, 3] + [15] * 8
    return FakeGraph(4, stabs, pairs)


def test_irreducible_counts_against_enumeration():
    for p, e in ((2, 1), (3, 1), (2, 2)):
        fld = make_field(p, e)
        q = fld.q
        for d in range(1, 5):
            found = sum(
                1
                for f in polys_upto(fld, d)
                if f.deg == d and f.is_monic and is_irreducible(f)
            )
            assert count_monic_irreducibles(q, d) == found


def test_irreducible_count_values():
    assert count_monic_irreducibles(2, 1) == 2
    assert count_monic_irreducibles(2, 2) == 1
    assert count_monic_irreducibles(2, 3) == 2
    assert count_monic_irreducibles(2, 4) == 3
    assert count_monic_irreducibles(3, 2) == 3
    assert count_monic_irreducibles(4, 2) == 6
    assert count_monic_irreducibles(9, 1) == 9


def test_profile_validation():
    with pytest.raises(InvalidProfile):
        RamProfile(6, (1, 1))
    with pytest.raises(InvalidProfile):
        RamProfile(3, (1, 1, 1))
    with pytest.raises(InvalidProfile):
        RamProfile(3, ())
    with pytest.raises(InvalidProfile):
        RamProfile(3, (0, 1))
    assert RamProfile(9, (1, 1)).degrees == (1, 1)
    assert RamProfile(3, (2, 1)).degrees == (1, 2)


def test_realizability():
    assert RamProfile(2, (1, 1)).realizable()
    assert not RamProfile(2, (1, 1, 1, 1)).realizable()
    assert RamProfile(4, (1, 1, 1, 1)).realizable()
    assert not RamProfile(3, (2, 2, 2, 2)).realizable()
    assert not RamProfile(2, (2, 2)).realizable()


def test_two_rational_places():
    for q in (2, 3, 4, 5, 7, 8, 9):
        r = RamProfile(q, (1, 1))
        assert wp(r) == 1
        assert genus(r) == 0
        assert v1(r) == 2
        assert vq1(r) == 0
        assert edges(r) == 1
        assert euler_check(r)
        assert eichler_count(r) == 4


def test_four_rational_places_q4():
    r = RamProfile(4, (1, 1, 1, 1))
    assert wp(r) == 1
    assert genus(r) == 0
    assert v1(r) == 8
    assert vq1(r) == 2
    assert edges(r) == 9
    assert euler_check(r)
    assert eichler_count(r) == 16


def test_degree_one_two_profile():
    r = RamProfile(3, (1, 2))
    assert wp(r) == 0
    assert genus(r) == 3
    assert v1(r) == 0
    assert vq1(r) == 2
    assert edges(r) == 4
    assert euler_check(r)
    assert eichler_count(r) == 0
    for q in (5, 7, 9):
        assert genus(RamProfile(q, (1, 2))) == q


def test_sweep_integrality_and_euler():
    profiles = sweep_profiles()
    assert len(profiles) > 100
    zero_genus = set()
    for r in profiles:
        assert r.realizable()
        g = genus(r)
        assert vq1(r) >= 0
        assert euler_check(r)
        if g == 0:
            zero_genus.add((r.q, r.degrees))
    want = {(q, (1, 1)) for q in (2, 3, 4, 5, 7, 8, 9)}
    want.add((4, (1, 1, 1, 1)))
    assert zero_genus == want


def test_graph_h1():
    assert graph_h1(edge_graph(3)) == 0
    assert graph_h1(banana_graph(3)) == 3
    assert graph_h1(star_tree_q4()) == 0
    disconnected = FakeGraph(3, [2, 2, 2], [(0, 1)])
    with pytest.raises(ValueError):
        graph_h1(disconnected)


def test_smooth_point_criterion():
    assert smooth_point_criterion(edge_graph(3))
    assert not smooth_point_criterion(banana_graph(3))
    assert smooth_point_criterion(star_tree_q4())


def test_presentation_edge_graph():
    pres = presentation(edge_graph(3))
    assert isinstance(pres, TreePresentation)
    assert pres.generators == ["g1", "g2"]
    assert pres.relations == ["g1^8 = 1", "g2^8 = 1", "g1^4 = g2^4"]
    assert str(pres) == "<g1, g2 | g1^8 = 1, g2^8 = 1, g1^4 = g2^4>"


def test_presentation_star_tree():
    pres = presentation(star_tree_q4())
    assert isinstance(pres, TreePresentation)
    assert len(pres.generators) == 8
    assert "g1^15 = 1" in pres.relations
    assert "g1^5 = g8^5" in pres.relations
    assert len(pres.relations) == 8 + 7


def test_presentation_banana_is_not_a_tree():
    got = presentation(banana_graph(3))
    assert isinstance(got, NotATree)
    assert got.free_rank == 3


def test_smith_normal_form_basics():
    assert smith_normal_form([[1, 0], [0, 1]]) == [1, 1]
    assert smith_normal_form([[2, 0], [0, 4]]) == [2, 4]
    assert smith_normal_form([[4, 0], [0, 2]]) == [2, 4]
    assert smith_normal_form([[2, 1], [1, 2]]) == [1, 3]
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([[2, 0, 0], [0, 3, 0]]) == [1, 6]
    assert smith_normal_form([[6]]) == [6]
    assert smith_normal_form([[-3]]) == [3]


def minor_gcd_invariants(m):
    """Oracle: invariant factors as quotients of k-minor gcds."""
    from itertools import combinations
    from math import gcd

    def det(sub):
        n = len(sub)
        if n == 1:
            return sub[0][0]
        total = 0
        for j in range(n):
            sign = -1 if j % 2 else 1
            rest = [row[:j] + row[j + 1 :] for row in sub[1:]]
            total += sign * sub[0][j] * det(rest)
        return total

    rows, cols = len(m), len(m[0])
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_smith_normal_form_against_minor_gcds():
    rng = random.Random(37)
    for _ in range(40):
        rows = rng.randrange(2, 4)
        cols = rng.randrange(2, 4)
        m = [[rng.randrange(-6, 7) for _ in range(cols)] for _ in range(rows)]
        assert smith_normal_form(m) == minor_gcd_invariants(m), m


def test_critical_group_examples():
    assert critical_group(banana_graph(3)) == [4]
    assert critical_group(edge_graph(3)) == []
    triangle = FakeGraph(2, [1, 1, 1], [(0, 1), (1, 2), (0, 2)])
    assert critical_group(triangle) == [3]


def test_critical_group_order_is_tree_count():
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randrange(3, 6)
        pairs = [(i, rng.randrange(i)) for i in range(1, n)]
        for _ in range(rng.randrange(1, 5)):
            a, b = rng.sample(range(n), 2)
            pairs.append((min(a, b), max(a, b)))
        g = FakeGraph(2, [1] * n, pairs)
        prod = 1
        for d in critical_group(g):
            prod *= d
        assert prod == spanning_tree_count(g)


def test_cross_check_matching():
    rep = cross_check(RamProfile(3, (1, 1)), edge_graph(3))
    assert rep.ok()
    d = rep.to_dict()
    assert d["V1"] == 2 and d["E"] == 1 and d["genus"] == 0
    assert d["graph"]["h1"] == 0
    assert all(d["checks"].values())

    rep2 = cross_check(RamProfile(3, (1, 2)), banana_graph(3))
    assert rep2.ok()
    assert rep2.to_dict()["graph"]["degrees"] == [4, 4]

    rep3 = cross_check(RamProfile(4, (1, 1, 1, 1)), star_tree_q4())
    assert rep3.ok()


def test_cross_check_mismatch_detected():
    rep = cross_check(RamProfile(3, (1, 1)), banana_graph(3))
    assert not rep.ok()
    assert not rep.checks["edges"]
    assert not rep.checks["smooth_matches_wp"]


def test_report_schema_keys():
    d = Report(RamProfile(3, (1, 1)), edge_graph(3)).to_dict()
    assert sorted(d) == [
        "E",
        "R",
        "V1",
        "Vq1",
        "checks",
        "eichler",
        "genus",
        "graph",
        "q",
        "wp",
    ]
