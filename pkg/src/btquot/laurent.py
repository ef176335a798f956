"""Laurent series in the uniformizer u = 1/T at the place at infinity.

A series is either exact (finitely many terms, all later coefficients zero)
or known only up to O(u^prec).  Arithmetic tracks the guaranteed precision
and raises PrecisionLoss rather than silently returning too few digits.
"""

from __future__ import annotations

import contextlib
import math

from .errors import NotASquare, PrecisionLoss, Unsupported
from .gfpoly import FieldElem, Poly, RatFunc, _val

DEFAULT_PREC = 64
MAX_PREC = 4096
MIN_TERMS = 8

_PREC = [DEFAULT_PREC]


def current_precision():
    return _PREC[-1]


@contextlib.contextmanager
def working_precision(n):
    """Temporarily set the expansion precision used for exact inputs."""
    if not MIN_TERMS <= n <= MAX_PREC:
        raise ValueError("precision %d outside [%d, %d]" % (n, MIN_TERMS, MAX_PREC))
    _PREC.append(n)
    try:
        yield n
    finally:
        _PREC.pop()


class LaurentSeries:
    """coeffs[k] is the coefficient of u^(val + k), as an int code."""

    __slots__ = ("field", "val", "coeffs", "exact")

    def __init__(self, field, val, coeffs, exact):
        cs = [_val(c) % field.q for c in coeffs]
        prec = math.inf if exact else val + len(cs)
        while cs and cs[0] == 0:
            cs.pop(0)
            val += 1
        if exact:
            while cs and cs[-1] == 0:
                cs.pop()
        if not cs:
            val = 0 if exact else prec
        self.field = field
        self.val = val
        self.coeffs = tuple(cs)
        self.exact = exact

    # constructors

    @classmethod
    def zero(cls, field):
        return cls(field, 0, (), True)

    @classmethod
    def one(cls, field):
        return cls(field, 0, (1,), True)

    @classmethod
    def scalar(cls, field, c):
        return cls(field, 0, (c,), True)

    @classmethod
    def uniformizer(cls, field):
        return cls(field, 1, (1,), True)

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, k, (c,), True)

    @classmethod
    def inexact_zero(cls, field, prec):
        return cls(field, prec, (), False)

    # structure

    @property
    def prec_abs(self):
        """Absolute exponent below which every coefficient is known."""
        if self.exact:
            return math.inf
        return self.val + len(self.coeffs)

    @property
    def is_zero(self):
        """True when every known coefficient vanishes (exactly zero if exact)."""
        return not self.coeffs

    @property
    def known_terms(self):
        return len(self.coeffs)

    def ord(self):
        if self.coeffs:
            return self.val
        if self.exact:
            raise ValueError("ord of exact zero")
        raise PrecisionLoss("series is zero to O(u^%s); ord unknown" % self.val)

    def lc(self):
        if not self.coeffs:
            self.ord()  # raises the right thing
        return self.coeffs[0]

    def coeff(self, k):
        """Coefficient of u^k; raises if k is past the known precision."""
        if k < self.val:
            return 0
        if k - self.val < len(self.coeffs):
            return self.coeffs[k - self.val]
        if self.exact:
            return 0
        raise PrecisionLoss("coefficient of u^%d beyond O(u^%s)" % (k, self.prec_abs))

    # arithmetic

    def _finish(self, val, cs, prec):
        if prec == math.inf:
            return LaurentSeries(self.field, val, cs, True)
        cs = cs[: max(0, prec - val)]
        out = LaurentSeries(self.field, val, cs, False)
        if out.coeffs and out.prec_abs - out.val < MIN_TERMS:
            raise PrecisionLoss(
                "only %d terms survive (need %d)" % (out.prec_abs - out.val, MIN_TERMS)
            )
        return out

    def __add__(self, other):
        other = self._coerce(other)
        f = self.field
        prec = min(self.prec_abs, other.prec_abs)
        if self.is_zero and self.exact:
            return other._finish(other.val, list(other.coeffs), prec)
        if other.is_zero and other.exact:
            return self._finish(self.val, list(self.coeffs), prec)
        lo = min(self.val, other.val)
        hi = prec if prec != math.inf else max(self._end(), other._end())
        cs = [0] * max(0, hi - lo)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                k = src.val + i - lo
                if 0 <= k < len(cs):
                    cs[k] = f.add(cs[k], c)
        return self._finish(lo, cs, prec)

    def _end(self):
        # one past the last stored exponent
        return self.val + len(self.coeffs)

    def __neg__(self):
        return LaurentSeries(
            self.field, self.val, [self.field.neg(c) for c in self.coeffs], self.exact
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        if (self.is_zero and self.exact) or (other.is_zero and other.exact):
            return LaurentSeries.zero(f)
        prec = min(self.prec_abs + other.val, other.prec_abs + self.val)
        if self.is_zero or other.is_zero:
            return LaurentSeries.inexact_zero(f, prec)
        lo = self.val + other.val
        n = (
            len(self.coeffs) + len(other.coeffs) - 1
            if prec == math.inf
            else prec - lo
        )
        cs = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                row = f._mult[a]
                for j, b in enumerate(other.coeffs):
                    if b and i + j < n:
                        cs[i + j] = f.add(cs[i + j], row[b])
        return self._finish(lo, cs, prec)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def shift(self, k):
        """Multiply by u^k (exactness preserved)."""
        if self.is_zero:
            if self.exact:
                return self
            return LaurentSeries.inexact_zero(self.field, self.val + k)
        return LaurentSeries(self.field, self.val + k, self.coeffs, self.exact)

    def inverse(self):
        f = self.field
        if self.is_zero:
            if self.exact:
                raise ZeroDivisionError("inverse of zero series")
            raise PrecisionLoss("inverse of a series that is zero to known precision")
        a = self.coeffs
        if self.exact and len(a) == 1:
            return LaurentSeries.monomial(f, -self.val, f.inv(a[0]))
        n = _PREC[-1] if self.exact else len(a)
        inv0 = f.inv(a[0])
        b = [inv0]
        for k in range(1, n):
            s = 0
            for i in range(1, min(k, len(a) - 1) + 1):
                s = f.add(s, f.mul(a[i], b[k - i]))
            b.append(f.neg(f.mul(inv0, s)))
        return self._finish(-self.val, b, -self.val + n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = LaurentSeries.one(self.field)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def sqrt(self):
        """Canonical square root: leading coefficient is the smallest root."""
        f = self.field
        if f.p == 2:
            raise Unsupported("series square root needs odd q")
        if self.is_zero:
            if self.exact:
                return self
            raise PrecisionLoss("sqrt of a series that is zero to known precision")
        if self.val % 2:
            raise NotASquare("odd valuation %d" % self.val)
        s0 = f.sqrt_(self.coeffs[0])
        if s0 is None:
            raise NotASquare("leading coefficient %d is not a square" % self.coeffs[0])
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries.monomial(f, self.val // 2, s0)
        a = self.coeffs
        n = _PREC[-1] if self.exact else len(a)
        inv2s = f.inv(f.mul(2 % f.p, s0))
        r = [s0]
        for k in range(1, n):
            s = a[k] if k < len(a) else 0
            for i in range(1, k):
                s = f.sub(s, f.mul(r[i], r[k - i]))
            r.append(f.mul(inv2s, s))
        return self._finish(self.val // 2, r, self.val // 2 + n)

    def truncate(self, prec):
        """Forget everything from u^prec on (never raises)."""
        if not self.exact and prec >= self.prec_abs:
            return self
        lo = min(self.val, prec)
        cs = [self.coeff(k) for k in range(lo, prec)]
        return LaurentSeries(self.field, lo, cs, False)

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, FieldElem)):
            return LaurentSeries.scalar(self.field, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = LaurentSeries.scalar(self.field, other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.exact == other.exact
            and self.val == other.val
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.val, self.coeffs, self.exact))

    def agrees_with(self, other, upto=None):
        """Do the two series match on every exponent both of them know?"""
        hi = min(self.prec_abs, other.prec_abs)
        if upto is not None:
            hi = min(hi, upto)
        if hi == math.inf:
            return self.coeffs == other.coeffs and (self.is_zero or self.val == other.val)
        lo = min(
            self.val if self.coeffs else hi, other.val if other.coeffs else hi
        )
        return all(self.coeff(k) == other.coeff(k) for k in range(lo, hi))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = self.val + i
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append("u" if c == 1 else "%d*u" % c)
            else:
                parts.append("u^%d" % k if c == 1 else "%d*u^%d" % (c, k))
        if not self.exact:
            parts.append("O(u^%d)" % self.prec_abs)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "LaurentSeries(%s)" % self


def embed(x):
    """Expand a Poly or RatFunc at infinity: T becomes u^-1.

    Polynomials (and monomial denominators) give exact series; a general
    denominator is inverted to the working precision.
    """
    if isinstance(x, RatFunc):
        return embed(x.num) * embed(x.den).inverse()
    if not isinstance(x, Poly):
        raise TypeError("cannot embed %r" % (x,))
    if x.is_zero:
        return LaurentSeries.zero(x.field)
    return LaurentSeries(x.field, -x.deg, tuple(reversed(x.coeffs)), True)
