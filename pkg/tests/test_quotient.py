import random

import pytest

from btquot.bttree import Mat2K, TreeVertex, act, canonical_form
from btquot.errors import (
    NonterminationGuard,
    NotASquare,
    PrecisionLoss,
    StabilizerAnomalousOrder,
    Unsupported,
)
from btquot.gfpoly import Poly, make_field, parse_poly
from btquot.invariants import critical_group, cross_check, graph_h1
from btquot.laurent import LaurentSeries, embed, working_precision
from btquot.order import Witness
from btquot.quat import parse_algebra, ramified_set
from btquot.quotient import (
    NoEquivalence,
    SplitEmbedding,
    StabilizerGroup,
    are_equivalent,
    build_quotient,
    completeness_bound,
    hom_units,
    make_embedding,
    stabilizer,
)


def segment_algebra(q=3):
    fld = make_field(q)
    if q == 3:
        return parse_algebra(fld, "H(2, T^2 + 2*T)")
    if q == 5:
        return parse_algebra(fld, "H(2, T^2 + 4*T)")
    raise ValueError(q)


def banana_algebra():
    fld = make_field(3)
    return parse_algebra(fld, "H(T, T^2 + T + 2)")


def theta2(alg):
    fld = alg.field
    return alg.elem(0, parse_poly(fld, "2*T + 2"), 0, 2)


def rand_elem(rng, alg, deg=1):
    fld = alg.field
    co = [
        Poly(fld, [rng.randrange(fld.q) for _ in range(deg + 1)])
        for _ in range(4)
    ]
    return alg.elem(*co)


def test_embedding_relations():
    rng = random.Random(11)
    for alg in (segment_algebra(), banana_algebra(), segment_algebra(5)):
        emb = make_embedding(alg)
        ident, mi, mj, mij = emb.images()
        a_ser = embed(alg.a)
        b_ser = embed(alg.b)
        for got, want in zip((mi * mi).entries(), ident.scale(a_ser).entries()):
            assert got.agrees_with(want)
        for got, want in zip((mj * mj).entries(), ident.scale(b_ser).entries()):
            assert got.agrees_with(want)
        for got, want in zip((mi * mj).entries(), (-(mj * mi)).entries()):
            assert got.agrees_with(want)
        for got, want in zip((mi * mj).entries(), mij.entries()):
            assert got.agrees_with(want)
        for _ in range(8):
            lam = rand_elem(rng, alg)
            mu = rand_elem(rng, alg)
            assert emb.matrix(lam).det().agrees_with(embed(lam.norm()))
            prodm = emb.matrix(lam) * emb.matrix(mu)
            for got, want in zip(prodm.entries(), emb.matrix(lam * mu).entries()):
                assert got.agrees_with(want)
            summ = emb.matrix(lam) + emb.matrix(mu)
            for got, want in zip(summ.entries(), emb.matrix(lam + mu).entries()):
                assert got.agrees_with(want)


def test_embedding_trace():
    alg = segment_algebra()
    emb = make_embedding(alg)
    rng = random.Random(13)
    for _ in range(6):
        lam = rand_elem(rng, alg)
        m = emb.matrix(lam)
        assert (m.a + m.d).agrees_with(embed(lam.trace()))


def test_embedding_coords_roundtrip():
    rng = random.Random(17)
    alg = segment_algebra()
    emb = make_embedding(alg)
    for _ in range(6):
        lam = rand_elem(rng, alg, deg=2)
        got = emb.coords(emb.matrix(lam))
        for series, poly in zip(got, lam.coords):
            assert series.agrees_with(embed(poly))


def test_embedding_even_q_unsupported():
    fld = make_field(2)
    alg = parse_algebra(fld, "H(1, T^2 + T)")
    with pytest.raises(Unsupported):
        make_embedding(alg)


def test_embedding_needs_square():
    fld = make_field(3)
    alg = parse_algebra(fld, "H(2, T)")
    with pytest.raises(NotASquare):
        make_embedding(alg)


def test_valuation_profile_and_bounds():
    alg = segment_algebra()
    emb = make_embedding(alg)
    prof = emb.valuation_profile()
    assert prof == {"image": -1, "transfer": 0}
    assert emb.bound_constant() == 0
    fld = alg.field
    base = TreeVertex.base(fld)
    assert completeness_bound(emb, base, base) == 2
    v = TreeVertex(fld, -1)
    assert completeness_bound(emb, v, v) == 3
    assert completeness_bound(emb, base, v, slack=0) == 0


def test_theta2_matrix_shape():
    alg = segment_algebra()
    emb = make_embedding(alg)
    m = emb.matrix(theta2(alg))
    assert m.a.is_zero and m.d.is_zero
    assert sorted((m.b.ord(), m.c.ord())) == [-1, 1]
    xi = embed(Poly.const(alg.field, 2))
    assert (m.b * m.c).agrees_with(xi)
    assert m.det().agrees_with(-xi)


def test_stabilizer_base_q3():
    alg = segment_algebra()
    emb = make_embedding(alg)
    fld = alg.field
    base = TreeVertex.base(fld)
    group = stabilizer(emb, base)
    assert group.order == 8
    assert alg.i in group.elements
    assert alg.one in group.elements
    assert alg.elem(2) in group.elements
    for g in group.elements[:3]:
        assert act(emb.matrix(g), base) == base
    orbits = group.neighbor_orbits(emb, base)
    assert orbits == [[0, 1, 2, 3]]


def test_stabilizer_neighbors_of_base():
    alg = segment_algebra()
    emb = make_embedding(alg)
    child = stabilizer(emb, TreeVertex(alg.field, 1))
    assert child.order == 8
    assert theta2(alg) in child.elements
    parent = stabilizer(emb, TreeVertex(alg.field, -1))
    assert parent.order == 8
    assert theta2(alg) not in parent.elements


def test_hom_units_identity_example():
    alg = segment_algebra()
    emb = make_embedding(alg)
    ident = Mat2K.identity(alg.field)
    found = hom_units(emb, ident, ident, 1)
    assert len(found) == 8
    assert alg.i in found
    for lam in found:
        nr = lam.norm()
        assert nr.is_const and not nr.is_zero


def test_hom_units_pi_lattice_example():
    alg = segment_algebra()
    fld = alg.field
    emb = make_embedding(alg)
    s = embed(alg.b).sqrt()
    pi = embed(parse_poly(fld, "2*T + 2")) + LaurentSeries.scalar(fld, 2) * s
    assert pi.ord() == -1
    u_mat = Mat2K(
        pi.inverse(),
        LaurentSeries.zero(fld),
        LaurentSeries.zero(fld),
        LaurentSeries.one(fld),
    )
    found = hom_units(emb, u_mat, u_mat, 1)
    assert len(found) == 8
    assert theta2(alg) in found


def test_hom_units_parity_empty():
    alg = segment_algebra()
    fld = alg.field
    emb = make_embedding(alg)
    base = TreeVertex.base(fld)
    parent = TreeVertex(fld, -1)
    assert hom_units(emb, base.matrix(), parent.matrix(), 3) == []


def test_are_equivalent_basics():
    alg = segment_algebra()
    fld = alg.field
    emb = make_embedding(alg)
    base = TreeVertex.base(fld)
    same = are_equivalent(emb, base, base)
    assert isinstance(same, Witness)
    assert same.lam == alg.one
    for nb in base.neighbors():
        verdict = are_equivalent(emb, base, nb)
        assert isinstance(verdict, NoEquivalence)
        assert not verdict


def test_are_equivalent_same_type_vertices():
    alg = segment_algebra()
    fld = alg.field
    emb = make_embedding(alg)
    base = TreeVertex.base(fld)
    sibling = TreeVertex(fld, 0, LaurentSeries.monomial(fld, -1))
    verdict = are_equivalent(emb, base, sibling)
    assert isinstance(verdict, Witness)
    assert act(emb.matrix(verdict.lam), base) == sibling
    deep = TreeVertex(fld, -2)
    verdict2 = are_equivalent(emb, base, deep)
    assert isinstance(verdict2, Witness)
    log = []
    are_equivalent(emb, base, TreeVertex(fld, -1), log=log)
    assert log == [
        {"event": "equivalence", "outcome": "no", "reason": "parity"}
    ]


def test_build_quotient_segment_q3():
    alg = segment_algebra()
    graph = build_quotient(alg)
    assert len(graph.vertices) == 2
    assert len(graph.edges) == 1
    assert [v.stabilizer_order for v in graph.vertices] == [8, 8]
    assert graph.edges[0].stabilizer_order == 2
    assert graph.degrees() == [1, 1]
    assert graph.terminal_indices() == [0, 1]
    assert graph_h1(graph) == 0
    report = cross_check(graph.profile, graph)
    assert report.ok()
    events = [entry["event"] for entry in graph.log]
    assert events[0] == "start" and events[-1] == "done"
    d = graph.to_dict()
    assert d["ramified_degrees"] == [1, 1]
    assert len(d["vertices"]) == 2 and len(d["edges"]) == 1


def test_build_quotient_segment_q5():
    alg = segment_algebra(5)
    assert sorted(str(p.poly) for p in ramified_set(alg)) == ["T", "T+4"]
    graph = build_quotient(alg)
    assert len(graph.vertices) == 2
    assert len(graph.edges) == 1
    assert [v.stabilizer_order for v in graph.vertices] == [24, 24]
    assert graph.edges[0].stabilizer_order == 4


def test_build_quotient_banana():
    alg = banana_algebra()
    graph = build_quotient(alg)
    assert len(graph.vertices) == 2
    assert [v.stabilizer_order for v in graph.vertices] == [2, 2]
    assert len(graph.edges) == 4
    assert all((e.a, e.b) == (0, 1) for e in graph.edges)
    assert graph.multiplicity(0, 1) == 4
    assert graph.degrees() == [4, 4]
    assert graph_h1(graph) == 3
    assert critical_group(graph) == [4]
    assert all(e.stabilizer_order == 2 for e in graph.edges)
    report = cross_check(graph.profile, graph)
    assert report.ok()
    assert not report.graph_smooth


def test_build_quotient_translated_base():
    alg = segment_algebra()
    fld = alg.field
    default = build_quotient(alg)
    moved = build_quotient(alg, base=TreeVertex(fld, 1))
    assert len(moved.vertices) == len(default.vertices)
    assert len(moved.edges) == len(default.edges)
    assert sorted(v.stabilizer_order for v in moved.vertices) == sorted(
        v.stabilizer_order for v in default.vertices
    )
    assert sorted(moved.degrees()) == sorted(default.degrees())
    assert [e.stabilizer_order for e in moved.edges] == [
        e.stabilizer_order for e in default.edges
    ]


def test_build_quotient_class_limit_guard():
    with pytest.raises(NonterminationGuard):
        build_quotient(banana_algebra(), class_limit=1)


def test_build_quotient_low_precision_retries():
    alg = segment_algebra()
    graph = build_quotient(alg, initial_precision=8)
    assert len(graph.vertices) == 2
    assert len(graph.edges) == 1


def test_precision_loss_raised_when_window_unreachable():
    alg = segment_algebra()
    fld = alg.field
    with working_precision(8):
        emb = make_embedding(alg)
        far = TreeVertex(fld, -6)
        with pytest.raises(PrecisionLoss):
            stabilizer(emb, far)


def test_even_q_quotient_unsupported():
    fld = make_field(2)
    alg = parse_algebra(fld, "H(1, T^2 + T)")
    with pytest.raises(Unsupported):
        build_quotient(alg)


def test_stabilizer_group_rejects_bad_order():
    alg = segment_algebra()
    with pytest.raises(StabilizerAnomalousOrder):
        StabilizerGroup(alg, [alg.one])


def test_banana_neighbor_orbits_are_singletons():
    alg = banana_algebra()
    emb = make_embedding(alg)
    base = TreeVertex.base(alg.field)
    group = stabilizer(emb, base)
    assert group.order == 2
    assert group.neighbor_orbits(emb, base) == [[0], [1], [2], [3]]
