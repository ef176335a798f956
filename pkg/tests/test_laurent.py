import math
import random

import pytest

from btquot.errors import NotASquare, PrecisionLoss, Unsupported
from btquot.gfpoly import Poly, RatFunc, make_field
from btquot.laurent import (
    DEFAULT_PREC,
    LaurentSeries,
    current_precision,
    embed,
    working_precision,
)


def rand_exact(rng, fld, lo=-4, width=6):
    val = rng.randrange(lo, lo + 3)
    cs = [rng.randrange(fld.q) for _ in range(width)]
    return LaurentSeries(fld, val, cs, True)


def test_embed_polynomial_is_exact():
    fld = make_field(3)
    T = Poly.T(fld)
    s = embed(T**2 + 2 * T + 1)
    assert s.exact
    assert s.val == -2
    assert s.coeffs == (1, 2, 1)
    assert s.prec_abs == math.inf
    assert embed(Poly.zero(fld)).is_zero
    assert embed(Poly.zero(fld)).exact


def test_embed_geometric_series():
    fld = make_field(3)
    T = Poly.T(fld)
    s = embed(RatFunc(Poly.one(fld), T + 2))  # 1/(T-1) = u + u^2 + ...
    assert not s.exact
    assert s.val == 1
    assert s.prec_abs == 1 + DEFAULT_PREC
    for k in range(1, 20):
        assert s.coeff(k) == 1
    assert s.coeff(0) == 0
    assert s.coeff(-3) == 0


def test_embed_monomial_denominator_stays_exact():
    fld = make_field(5)
    T = Poly.T(fld)
    s = embed(RatFunc(T**2 + 1, T**3))
    assert s.exact
    assert s.val == -2 + 3
    assert s.coeffs == (1, 0, 1)


def test_working_precision_context():
    fld = make_field(3)
    T = Poly.T(fld)
    assert current_precision() == DEFAULT_PREC
    with working_precision(16):
        assert current_precision() == 16
        s = embed(RatFunc(Poly.one(fld), T + 2))
        assert s.prec_abs == 17
        with working_precision(32):
            assert current_precision() == 32
        assert current_precision() == 16
    assert current_precision() == DEFAULT_PREC
    with pytest.raises(ValueError):
        with working_precision(2):
            pass


def test_add_mul_ring_laws():
    rng = random.Random(41)
    fld = make_field(3, 2)
    for _ in range(60):
        a = rand_exact(rng, fld)
        b = rand_exact(rng, fld)
        c = rand_exact(rng, fld)
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero and (a - a).exact
        assert a + LaurentSeries.zero(fld) == a


def test_mul_matches_polynomial_mul():
    rng = random.Random(43)
    fld = make_field(5)
    for _ in range(40):
        p1 = Poly(fld, [rng.randrange(5) for _ in range(5)])
        p2 = Poly(fld, [rng.randrange(5) for _ in range(5)])
        assert embed(p1) * embed(p2) == embed(p1 * p2)
        assert embed(p1) + embed(p2) == embed(p1 + p2)


def test_inverse_round_trip():
    rng = random.Random(47)
    fld = make_field(3)
    one = LaurentSeries.one(fld)
    for _ in range(30):
        s = rand_exact(rng, fld)
        if s.is_zero or s.coeffs[0] == 0:
            continue
        inv = s.inverse()
        assert (s * inv).agrees_with(one)
        assert inv.val == -s.val


def test_inverse_of_monomial_is_exact():
    fld = make_field(5)
    s = LaurentSeries.monomial(fld, 3, 2)
    inv = s.inverse()
    assert inv.exact
    assert inv.val == -3 and inv.coeffs == (3,)
    assert s * inv == LaurentSeries.one(fld)


def test_shift_and_pow():
    fld = make_field(3)
    u = LaurentSeries.uniformizer(fld)
    assert u.shift(4) == LaurentSeries.monomial(fld, 5)
    assert (u.shift(-1)).val == 0
    assert (u**5) == LaurentSeries.monomial(fld, 5)
    assert (u**-2) == LaurentSeries.monomial(fld, -2)
    s = LaurentSeries(fld, 0, (1, 1), True)
    assert (s**2) == LaurentSeries(fld, 0, (1, 2, 1), True)


def test_sqrt_exact_monomial():
    fld = make_field(5)
    s = LaurentSeries.monomial(fld, 2, 4)
    r = s.sqrt()
    assert r.exact
    # 4 has roots 2 and 3; the canonical branch picks 2
    assert r == LaurentSeries.monomial(fld, 1, 2)
    assert LaurentSeries.monomial(fld, 0, 1).sqrt() == LaurentSeries.one(fld)


def test_sqrt_series_round_trip():
    rng = random.Random(53)
    fld = make_field(3, 2)
    for _ in range(30):
        a = rand_exact(rng, fld)
        if a.is_zero:
            continue
        sq = a * a
        r = sq.sqrt()
        assert (r * r).agrees_with(sq)
        assert r.val == a.val
        # canonical branch: leading coefficient is the smaller root
        assert r.lc() == min(a.lc(), fld.neg(a.lc()))


def test_sqrt_failures():
    f3 = make_field(3)
    with pytest.raises(NotASquare):
        LaurentSeries.monomial(f3, 3, 1).sqrt()  # odd valuation
    with pytest.raises(NotASquare):
        LaurentSeries.monomial(f3, 2, 2).sqrt()  # 2 is not a square mod 3
    f2 = make_field(2)
    with pytest.raises(Unsupported):
        LaurentSeries.monomial(f2, 0, 1).sqrt()


def test_precision_loss_on_short_results():
    fld = make_field(3)
    T = Poly.T(fld)
    s = embed(T**2 + T + 1).truncate(1)  # three known terms
    assert s.known_terms == 3
    with pytest.raises(PrecisionLoss):
        s * s
    with pytest.raises(PrecisionLoss):
        s + LaurentSeries.one(fld)


def test_coeff_out_of_range():
    fld = make_field(3)
    T = Poly.T(fld)
    exact = embed(T + 1)
    assert exact.coeff(100) == 0
    inexact = embed(RatFunc(Poly.one(fld), T + 2))
    with pytest.raises(PrecisionLoss):
        inexact.coeff(inexact.prec_abs)


def test_ord_and_lc():
    fld = make_field(3)
    s = LaurentSeries(fld, -2, (2, 0, 1), True)
    assert s.ord() == -2
    assert s.lc() == 2
    with pytest.raises(ValueError):
        LaurentSeries.zero(fld).ord()
    with pytest.raises(PrecisionLoss):
        LaurentSeries.inexact_zero(fld, 10).ord()
    with pytest.raises(PrecisionLoss):
        LaurentSeries.inexact_zero(fld, 10).lc()


def test_inexact_zero_tracking():
    fld = make_field(3)
    z = LaurentSeries.inexact_zero(fld, 5)
    assert z.is_zero and not z.exact
    assert z.prec_abs == 5
    u = LaurentSeries.uniformizer(fld)
    assert (z * u).prec_abs == 6
    w = z * LaurentSeries.zero(fld)
    assert w.exact and w.is_zero


def test_truncate():
    fld = make_field(3)
    T = Poly.T(fld)
    s = embed(T**3 + 2 * T)
    t = s.truncate(0)
    assert not t.exact
    assert t.prec_abs == 0
    assert t.coeffs == (1, 0, 2)
    assert t.truncate(0) == t
    assert t.truncate(-10).is_zero
    # truncating an exact series past its support keeps the extra zeros known
    t2 = embed(T).truncate(5)
    assert t2.prec_abs == 5
    assert t2.coeff(4) == 0


def test_str_formatting():
    fld = make_field(3)
    T = Poly.T(fld)
    s = embed(2 * T + 2).truncate(63)
    assert str(s) == "2*u^-1 + 2 + O(u^63)"
    assert str(LaurentSeries.zero(fld)) == "0"
    assert str(LaurentSeries.inexact_zero(fld, 5)) == "O(u^5)"
    assert str(LaurentSeries.uniformizer(fld)) == "u"
    assert str(embed(Poly.one(fld))) == "1"
    assert str(LaurentSeries.monomial(fld, -2, 1)) == "u^-2"


def test_agrees_with():
    fld = make_field(3)
    T = Poly.T(fld)
    a = embed(T + 1)
    assert a.agrees_with(a.truncate(10))
    assert not a.agrees_with(embed(T + 2))
    assert a.truncate(-5).agrees_with(embed(T**2))  # no overlap to compare
    assert LaurentSeries.zero(fld).agrees_with(LaurentSeries.inexact_zero(fld, 3))


def test_division():
    fld = make_field(5)
    T = Poly.T(fld)
    num = embed(T**2 + 1)
    den = embed(T + 2)
    quot = num / den
    assert quot.agrees_with(embed(RatFunc(T**2 + 1, T + 2)))
    assert (quot * den).agrees_with(num)
