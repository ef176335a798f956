"""The standard order A[i, j, ij] of H(a, b), its discriminant certificate,
torsion units, and conjugacy testing inside the unit group."""

from __future__ import annotations

from .errors import NotCertified, Unsupported
from .gfpoly import Place, Poly, choose_xi, factor, gcd, polys_upto, radical
from .linalg import nullspace
from .quat import QuatElem, is_split_at, ram_product, ramified_set


def _det3(m):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _det4(m):
    total = None
    for col in range(4):
        minor = [[m[r][cc] for cc in range(4) if cc != col] for r in range(1, 4)]
        term = m[0][col] * _det3(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    return total


class CertifyReport:
    """Outcome of the discriminant check on the standard order."""

    def __init__(self, certified, gram_det, reduced, expected, split_primes):
        self.certified = certified
        self.gram_det = gram_det
        self.reduced = reduced
        self.expected = expected
        self.split_primes = split_primes

    def __bool__(self):
        return self.certified

    def __repr__(self):
        status = "maximal" if self.certified else "not certified"
        return "CertifyReport(%s; disc %s vs %s)" % (status, self.reduced, self.expected)


class StandardOrder:
    """The A-lattice spanned by 1, i, j, ij inside H(a, b)."""

    def __init__(self, alg):
        self.alg = alg

    @property
    def field(self):
        return self.alg.field

    def basis(self):
        return self.alg.basis()

    def gram_matrix(self):
        bas = self.basis()
        return [[(x * y).trace() for y in bas] for x in bas]

    def gram_disc(self):
        return _det4(self.gram_matrix())

    def certify_maximal(self):
        """Compare the squarefree part of the Gram determinant with the
        product of the ramified primes."""
        det = self.gram_disc()
        expected = ram_product(self.alg)
        if det.is_zero:
            return CertifyReport(False, det, det, expected, [])
        reduced = radical(det)
        split = [
            Place(h)
            for h, _ in factor(det)
            if is_split_at(self.alg, Place(h))
        ]
        return CertifyReport(reduced == expected, det, reduced, expected, split)

    def ensure_maximal(self):
        rep = self.certify_maximal()
        if not rep.certified:
            raise NotCertified(
                "standard order of %s is not certified maximal: "
                "squarefree discriminant %s, ramification %s"
                % (self.alg, rep.reduced, rep.expected)
            )
        return rep

    def is_unit(self, el):
        n = el.norm()
        return n.is_const and not n.is_zero

    def __repr__(self):
        return "StandardOrder(%r)" % (self.alg,)


def poly_sqrt(f):
    """The polynomial square root with smallest leading coefficient, or None."""
    if f.is_zero:
        return f
    fld = f.field
    s = fld.sqrt_(f.lc)
    if s is None:
        return None
    root = Poly.const(fld, s)
    for h, m in factor(f):
        if m % 2:
            return None
        root = root * h ** (m // 2)
    return root


def artin_schreier_solve(g):
    """All polynomial solutions of x^2 + x = g in characteristic two.

    Returns [] or a sorted pair {x, x + 1}.
    """
    fld = g.field
    if fld.p != 2:
        raise Unsupported("Artin-Schreier equations need even q")
    if g.deg <= 0:
        c0 = g.coeff(0)
        sols = [
            Poly.const(fld, c)
            for c in range(fld.q)
            if fld.add(fld.mul(c, c), c) == c0
        ]
        return sorted(sols, key=Poly.sort_key)
    if g.deg % 2:
        return []
    m = g.deg // 2
    lead = Poly.monomial(fld, m, fld.sqrt_(g.lc))
    rest = g - lead * lead - lead
    return sorted((lead + s for s in artin_schreier_solve(rest)), key=Poly.sort_key)


class TorsionUnit:
    """A finite-order unit together with its characteristic data."""

    def __init__(self, elem):
        self.elem = elem
        t, n = elem.charpoly()
        self.trace = t
        self.norm = n
        self.order = _mult_order(elem)

    def sort_key(self):
        e = self.elem
        return (e.w.sort_key(), e.z.sort_key(), e.y.sort_key(), e.x.sort_key())

    def __eq__(self, other):
        if not isinstance(other, TorsionUnit):
            return NotImplemented
        return self.elem == other.elem

    def __hash__(self):
        return hash(self.elem)

    def __repr__(self):
        return "TorsionUnit(%s; order %d)" % (self.elem, self.order)


def _mult_order(el):
    alg = el.alg
    cap = alg.field.q ** 2
    acc = el
    for n in range(1, cap + 1):
        if acc == alg.one:
            return n
        acc = acc * el
    raise ValueError("%s is not torsion" % el)


def solve_torsion(order, bound):
    """All units with scalar-free canonical shape and constant charpoly,
    coordinates of degree at most bound.

    Odd q: pure quaternions squaring to the canonical non-square constant.
    Even q: elements of trace one and norm equal to the canonical
    trace-one constant.
    """
    alg = order.alg
    fld = alg.field
    xi = Poly.const(fld, choose_xi(fld))
    a, b = alg.a, alg.b
    out = []
    if fld.p == 2:
        if a != xi:
            raise Unsupported("even-q torsion search needs the H(xi, b) shape")
        for z in polys_upto(fld, bound):
            for w in polys_upto(fld, bound):
                rhs = b * (z * z + z * w + xi * w * w)
                for x in artin_schreier_solve(rhs):
                    out.append(alg.elem(x, Poly.one(fld), z, w))
    else:
        for z in polys_upto(fld, bound):
            for w in polys_upto(fld, bound):
                rhs = xi - b * z * z + a * b * w * w
                quo, rem = divmod(rhs, a)
                if not rem.is_zero:
                    continue
                y = poly_sqrt(quo)
                if y is None:
                    continue
                for yy in sorted({y, -y}, key=Poly.sort_key):
                    out.append(alg.elem(Poly.zero(fld), yy, z, w))
    units = [TorsionUnit(el) for el in out]
    units.sort(key=TorsionUnit.sort_key)
    return units


def paired_unit(unit):
    """The Galois partner: the negative for odd q, element plus one for even."""
    el = unit.elem
    if el.alg.even:
        return TorsionUnit(el + el.alg.one)
    return TorsionUnit(-el)


class Witness:
    """A unit lam with lam * x = y * lam."""

    def __init__(self, lam):
        self.lam = lam

    def __repr__(self):
        return "Witness(%s)" % self.lam


class NoneUpToBound:
    """No conjugating unit with coordinate degrees up to the bound."""

    def __init__(self, bound):
        self.bound = bound

    def __repr__(self):
        return "NoneUpToBound(%d)" % self.bound


def _poly_from_vec(fld, vec):
    return Poly(fld, vec)


def conj_search(order, x, y, bound):
    """Search for a unit conjugating x to y, coordinates of degree <= bound.

    The commutation condition is linear, so candidates form an F_q-space;
    a common nonconstant divisor of the norm form on that space rules out
    unit norms without enumeration, otherwise candidates are scanned
    projectively.
    """
    alg = order.alg
    fld = alg.field
    if x == y:
        return Witness(alg.one)
    basis_elems = alg.basis()
    images = [e * x - y * e for e in basis_elems]
    ncols = 4 * (bound + 1)
    maxdeg = bound + 1 + max(
        max((c.deg for c in im.coords if not c.is_zero), default=0) for im in images
    )
    nrows = 4 * (maxdeg + 1)
    cols = []
    for mu in range(4):
        for k in range(bound + 1):
            shifted = images[mu].scale(Poly.monomial(fld, k))
            col = [0] * nrows
            for ci, co in enumerate(shifted.coords):
                for d, cf in enumerate(co.coeffs):
                    col[ci * (maxdeg + 1) + d] = cf
            cols.append(col)
    rows = [[cols[c][r] for c in range(ncols)] for r in range(nrows)]
    kern = nullspace(rows, ncols, fld)
    if not kern:
        return NoneUpToBound(bound)
    gens = []
    for vec in kern:
        coords = []
        for mu in range(4):
            coords.append(Poly(fld, vec[mu * (bound + 1) : (mu + 1) * (bound + 1)]))
        gens.append(QuatElem(alg, *coords))
    k = len(gens)
    norms = {}
    for t in range(k):
        norms[(t, t)] = gens[t].norm()
    for t in range(k):
        for s in range(t + 1, k):
            norms[(t, s)] = (
                (gens[t] + gens[s]).norm() - norms[(t, t)] - norms[(s, s)]
            )
    common = Poly.zero(fld)
    for p in norms.values():
        common = gcd(common, p)
    if common.is_zero or common.deg >= 1:
        # the norm form vanishes identically or never takes unit values
        return NoneUpToBound(bound)
    for vec in _projective_vectors(fld, k):
        val = Poly.zero(fld)
        for t in range(k):
            if not vec[t]:
                continue
            ct = vec[t]
            val = val + norms[(t, t)].scale(fld.mul(ct, ct))
            for s in range(t + 1, k):
                if vec[s]:
                    val = val + norms[(t, s)].scale(fld.mul(ct, vec[s]))
        # a unit norm is a nonzero constant
        if val.is_const and not val.is_zero:
            lam = alg.zero
            for t in range(k):
                if vec[t]:
                    lam = lam + gens[t].scale(vec[t])
            assert lam * x == y * lam
            assert order.is_unit(lam)
            return Witness(lam)
    return NoneUpToBound(bound)


def _projective_vectors(fld, k):
    """Vectors over F_q with first nonzero coordinate equal to one."""
    for lead in range(k):
        tail = k - lead - 1
        for code in range(fld.q**tail):
            vec = [0] * lead + [1]
            c = code
            for _ in range(tail):
                vec.append(c % fld.q)
                c //= fld.q
            yield vec


def default_conj_bound(order):
    return ram_product(order.alg).deg + 2


def torsion_classes(order, units, max_bound=None, expected=None):
    """Partition torsion units into conjugacy classes of the unit group.

    Bounded searches deepen iteratively; when the class count still exceeds
    the expected value at the cutoff, the cutoff is doubled once.
    """
    if max_bound is None:
        max_bound = default_conj_bound(order)
    n = len(units)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    buckets = {}
    for idx, u in enumerate(units):
        buckets.setdefault((u.trace.coeffs, u.norm.coeffs), []).append(idx)
    no_verdicts = set()

    def sweep(limit):
        for b in range(limit + 1):
            for idxs in buckets.values():
                reps = {}
                for i in idxs:
                    reps.setdefault(find(i), i)
                keys = sorted(reps)
                for ai in range(len(keys)):
                    for bi in range(ai + 1, len(keys)):
                        i, j = reps[keys[ai]], reps[keys[bi]]
                        if find(i) == find(j) or (i, j, b) in no_verdicts:
                            continue
                        res = conj_search(order, units[i].elem, units[j].elem, b)
                        if isinstance(res, Witness):
                            union(i, j)
                        else:
                            no_verdicts.add((i, j, b))

    sweep(max_bound)
    count = len({find(i) for i in range(n)})
    if expected is not None and count > expected:
        sweep(2 * max_bound)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(units[i])
    out = [sorted(v, key=TorsionUnit.sort_key) for v in classes.values()]
    out.sort(key=lambda cl: cl[0].sort_key())
    return out
