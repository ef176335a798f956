"""Quaternion algebras over F_q(T) and their ramification.

Odd q: H(a, b) has i^2 = a, j^2 = b, ij = -ji.
Even q: H(a, b) has i^2 + i = a with a a constant of absolute trace one,
j^2 = b, and ji = ij + j.
"""

from __future__ import annotations

from .errors import RamifiedAtInfinity, SearchExhausted, Unsupported
from .gfpoly import (
    FieldElem,
    Place,
    Poly,
    choose_xi,
    factor,
    gcd,
    is_squarefree,
    parse_poly,
    polys_upto,
    powmod,
    sqr_test_residue,
)


class QuatAlgebra:
    """H(a, b) over F_q(T); the defining relations depend on the parity of q."""

    def __init__(self, field, a, b):
        if isinstance(a, (int, FieldElem)):
            a = Poly.const(field, a)
        if isinstance(b, (int, FieldElem)):
            b = Poly.const(field, b)
        if a.is_zero or b.is_zero:
            raise ValueError("H(a, b) needs nonzero a and b")
        if field.p == 2:
            if not a.is_const or field.trace_abs_(a.coeff(0)) != 1:
                raise Unsupported(
                    "even q supports only a constant first parameter of trace one"
                )
        self.field = field
        self.a = a
        self.b = b
        self.even = field.p == 2

    def elem(self, x, y=None, z=None, w=None):
        zero = Poly.zero(self.field)
        co = []
        for c in (x, y, z, w):
            if c is None:
                c = zero
            elif isinstance(c, (int, FieldElem)):
                c = Poly.const(self.field, c)
            co.append(c)
        return QuatElem(self, *co)

    @property
    def one(self):
        return self.elem(1)

    @property
    def zero(self):
        return self.elem(0)

    @property
    def i(self):
        return self.elem(0, 1)

    @property
    def j(self):
        return self.elem(0, 0, 1)

    @property
    def ij(self):
        return self.elem(0, 0, 0, 1)

    def basis(self):
        return (self.one, self.i, self.j, self.ij)

    def __eq__(self, other):
        if not isinstance(other, QuatAlgebra):
            return NotImplemented
        return self.field == other.field and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field.q, self.a, self.b))

    def __str__(self):
        return "H(%s, %s)" % (self.a, self.b)

    def __repr__(self):
        return "QuatAlgebra(F_%d; %s)" % (self.field.q, self)


class QuatElem:
    """x + y*i + z*j + w*ij with polynomial coordinates."""

    __slots__ = ("alg", "x", "y", "z", "w")

    def __init__(self, alg, x, y, z, w):
        self.alg = alg
        self.x = x
        self.y = y
        self.z = z
        self.w = w

    @property
    def coords(self):
        return (self.x, self.y, self.z, self.w)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coords)

    @property
    def is_scalar(self):
        return self.y.is_zero and self.z.is_zero and self.w.is_zero

    def __add__(self, other):
        other = self._coerce(other)
        return QuatElem(self.alg, *(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        return QuatElem(self.alg, *(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElem(self.alg, *(-c for c in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        A, B = self.alg.a, self.alg.b
        x1, y1, z1, w1 = self.coords
        x2, y2, z2, w2 = other.coords
        if self.alg.even:
            X = x1 * x2 + A * y1 * y2 + B * z1 * z2 + A * B * w1 * w2 + B * z1 * w2
            Y = x1 * y2 + y1 * x2 + y1 * y2 + B * z1 * w2 + B * w1 * z2
            Z = x1 * z2 + z1 * x2 + A * y1 * w2 + A * w1 * y2 + z1 * y2
            W = x1 * w2 + w1 * x2 + y1 * z2 + y1 * w2 + z1 * y2
        else:
            X = x1 * x2 + A * y1 * y2 + B * z1 * z2 - A * B * w1 * w2
            Y = x1 * y2 + y1 * x2 + B * (w1 * z2 - z1 * w2)
            Z = x1 * z2 + z1 * x2 + A * (y1 * w2 - w1 * y2)
            W = x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2
        return QuatElem(self.alg, X, Y, Z, W)

    def __rmul__(self, other):
        return self._coerce(other) * self

    __radd__ = __add__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        r = self.alg.one
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def scale(self, c):
        if isinstance(c, (int, FieldElem)):
            c = Poly.const(self.alg.field, c)
        return QuatElem(self.alg, *(c * co for co in self.coords))

    def conj(self):
        x, y, z, w = self.coords
        if self.alg.even:
            return QuatElem(self.alg, x + y, y, z, w)
        return QuatElem(self.alg, x, -y, -z, -w)

    def trace(self):
        if self.alg.even:
            return self.y
        return self.x + self.x

    def norm(self):
        A, B = self.alg.a, self.alg.b
        x, y, z, w = self.coords
        if self.alg.even:
            return x * x + x * y + A * y * y + B * (z * z + z * w + A * w * w)
        return x * x - A * y * y - B * z * z + A * B * w * w

    def charpoly(self):
        """Coefficients (t, n) of X^2 - t X + n killing the element."""
        return (self.trace(), self.norm())

    def _coerce(self, other):
        if isinstance(other, QuatElem):
            if other.alg is not self.alg and other.alg != self.alg:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, (int, FieldElem, Poly)):
            return self.alg.elem(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem, Poly)):
            other = self.alg.elem(other)
        if not isinstance(other, QuatElem):
            return NotImplemented
        return self.alg == other.alg and self.coords == other.coords

    def __hash__(self):
        return hash((self.alg, self.coords))

    def __str__(self):
        names = ("", "i", "j", "ij")
        parts = []
        for c, n in zip(self.coords, names):
            if c.is_zero:
                continue
            cs = str(c)
            if not n:
                parts.append(cs)
            elif cs == "1":
                parts.append(n)
            elif ("+" in cs) or len(c.coeffs) > 1:
                parts.append("(%s)*%s" % (cs, n))
            else:
                parts.append("%s*%s" % (cs, n))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "QuatElem(%s)" % self


def _strip_place_power(f, v):
    m = 0
    q, r = divmod(f, v)
    while r.is_zero:
        f = q
        m += 1
        q, r = divmod(f, v)
    return m, f


def hilbert_symbol(alg, place):
    """+1 if the algebra splits at the place, -1 if it ramifies."""
    fld = alg.field
    if alg.even:
        if place.is_infinity:
            ordb = -alg.b.deg
        else:
            ordb, _ = _strip_place_power(alg.b, place.poly)
        if ordb % 2 == 0 or place.degree % 2 == 0:
            return 1
        return -1
    a, b = alg.a, alg.b
    if place.is_infinity:
        alpha, beta = -a.deg, -b.deg
        ua, ub = a.lc, b.lc
        sign = fld.neg(1) if (alpha * beta) % 2 else 1
        u = fld.mul(sign, fld.mul(fld.pow_(ua, beta), fld.pow_(ub, -alpha)))
        return 1 if fld.is_square_(u) else -1
    v = place.poly
    alpha, a0 = _strip_place_power(a, v)
    beta, b0 = _strip_place_power(b, v)
    u = powmod(a0, beta, v) if beta >= 0 else powmod(_inv_mod(a0, v), -beta, v)
    ub = powmod(b0, alpha, v) if alpha >= 0 else powmod(_inv_mod(b0, v), -alpha, v)
    u = (u * _inv_mod(ub, v)) % v
    if (alpha * beta) % 2:
        u = (-u) % v
    return sqr_test_residue(v, u)


def _inv_mod(g, v):
    fld = g.field
    return powmod(g, fld.q**v.deg - 2, v)


def is_split_at(alg, place):
    return hilbert_symbol(alg, place) == 1


def ramified_set(alg):
    """Sorted finite places where the algebra ramifies.

    Raises RamifiedAtInfinity when the place at infinity is not split.
    """
    if not is_split_at(alg, Place.infinity()):
        raise RamifiedAtInfinity("%s does not split at infinity" % alg)
    seen = set()
    out = []
    for f in (alg.a, alg.b):
        for h, _ in factor(f):
            if h in seen:
                continue
            seen.add(h)
            pl = Place(h)
            if not is_split_at(alg, pl):
                out.append(pl)
    out.sort(key=Place.sort_key)
    if len(out) % 2:
        raise AssertionError("odd number of ramified places for %s" % alg)
    return out


def ram_product(alg):
    """Product of the finite ramified primes (the reduced discriminant)."""
    r = Poly.one(alg.field)
    for pl in ramified_set(alg):
        r = r * pl.poly
    return r


def find_algebra(field, places, bound=4):
    """Smallest H(a, b) split at infinity with the given finite ramified places.

    Candidates are scanned in shells by max(deg a, deg b) and inside a shell
    in lexicographic order of the coefficient codes.  Only pairs with b of
    even degree, square leading coefficient and a*b squarefree are tried.
    """
    places = sorted(places, key=Place.sort_key)
    for pl in places:
        if pl.is_infinity:
            raise ValueError("infinity cannot be a target ramified place")
    if len(places) % 2:
        raise ValueError("need an even number of ramified places")
    target = [pl.poly for pl in places]
    if field.p == 2:
        return _find_algebra_even(field, places, target, bound)
    for shell in range(bound + 1):
        for a in polys_upto(field, shell):
            if a.is_zero:
                continue
            for b in polys_upto(field, shell):
                if b.is_zero or max(a.deg, b.deg) != shell:
                    continue
                if b.deg % 2 or not field.is_square_(b.lc):
                    continue
                if not is_squarefree(a * b):
                    continue
                if any(not v.divides(a * b) for v in target):
                    continue
                alg = QuatAlgebra(field, a, b)
                try:
                    if ramified_set(alg) == places:
                        return alg
                except RamifiedAtInfinity:
                    continue
    raise SearchExhausted(
        "no algebra with ramification {%s} within degree %d"
        % (", ".join(str(p) for p in places), bound)
    )


def _find_algebra_even(field, places, target, bound):
    if any(pl.degree % 2 == 0 for pl in places):
        raise SearchExhausted(
            "even q: only odd-degree places can ramify in the supported shape"
        )
    xi = choose_xi(field)
    for shell in range(bound + 1):
        for b in polys_upto(field, shell):
            if b.is_zero or b.deg != shell or b.deg % 2:
                continue
            if not is_squarefree(b):
                continue
            if any(not v.divides(b) for v in target):
                continue
            alg = QuatAlgebra(field, xi, b)
            try:
                if ramified_set(alg) == places:
                    return alg
            except RamifiedAtInfinity:
                continue
    raise SearchExhausted(
        "no algebra with ramification {%s} within degree %d"
        % (", ".join(str(p) for p in places), bound)
    )


def parse_algebra(field, text):
    """Parse "H(a, b)" where a and b are polynomial expressions.

    The token xi stands for the canonical constant picked by choose_xi.
    """
    s = text.strip()
    if not (s.startswith("H(") and s.endswith(")")):
        raise ValueError("expected H(a, b), got %r" % text)
    inner = s[2:-1]
    depth = 0
    split = None
    for k, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            split = k
            break
    if split is None:
        raise ValueError("expected two comma-separated entries in %r" % text)
    xi = choose_xi(field)
    parts = []
    for chunk in (inner[:split], inner[split + 1 :]):
        chunk = chunk.strip().replace("xi", "(%d)" % xi.v)
        parts.append(parse_poly(field, chunk))
    return QuatAlgebra(field, parts[0], parts[1])
