"""Counting formulas for unit-group quotient graphs, and graph-side checks.

One half of this module is pure arithmetic: given the ramification data of
the algebra (the ground field size q and the degrees of the ramified
places), closed formulas predict the shape of the quotient graph — number
of terminal vertices, number of degree-(q+1) vertices, edge count, first
Betti number — together with the count of torsion classes.  Every formula
value is an exact integer; a non-integral result signals an invalid
profile and raises instead of rounding.

The other half measures the same quantities on a computed graph and
cross-checks the two sides.  The graph argument is duck-typed: anything
with ``q``, ``vertices`` (records with ``stabilizer_order``), ``edges``
(records with endpoint indices ``a``/``b``) and ``degree(i)`` works.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvalidProfile, NonIntegral


def _mobius(n):
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def count_monic_irreducibles(q, d):
    """Number of monic irreducible polynomials of degree d over F_q."""
    total = sum(_mobius(e) * q ** (d // e) for e in _divisors(d))
    assert total % d == 0
    return total // d


def _prime_power_root(q):
    """Return (p, e) with q = p**e and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            return (p, e) if m == 1 else None
        p += 1
    return (q, 1)


class RamProfile:
    """Size of the constant field plus the multiset of ramified degrees."""

    def __init__(self, q, degrees):
        if _prime_power_root(q) is None:
            raise InvalidProfile("q = %r is not a prime power" % (q,))
        degs = tuple(sorted(degrees))
        if not degs or any(not isinstance(d, int) or d < 1 for d in degs):
            raise InvalidProfile("degrees must be positive integers")
        if len(degs) % 2 != 0:
            raise InvalidProfile(
                "a ramification set has even size, got %d places" % len(degs)
            )
        self.q = q
        self.degrees = degs

    def realizable(self):
        """Whether enough distinct places of each degree exist over F_q."""
        for d in set(self.degrees):
            if self.degrees.count(d) > count_monic_irreducibles(self.q, d):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, RamProfile):
            return NotImplemented
        return self.q == other.q and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.q, self.degrees))

    def __repr__(self):
        return "RamProfile(q=%d, degrees=%r)" % (self.q, self.degrees)


def wp(profile):
    """1 when every ramified degree is odd, else 0."""
    return 0 if any(d % 2 == 0 for d in profile.degrees) else 1


def _as_int(frac, what):
    if frac.denominator != 1:
        raise NonIntegral("%s came out as %s" % (what, frac))
    return int(frac)


def genus(profile):
    q = profile.q
    prod = 1
    for d in profile.degrees:
        prod *= q**d - 1
    g = (
        1
        + Fraction(prod, q**2 - 1)
        - Fraction(q, q + 1) * 2 ** (len(profile.degrees) - 1) * wp(profile)
    )
    return _as_int(g, "genus")


def v1(profile):
    """Number of terminal (degree-one) quotient vertices."""
    return 2 ** (len(profile.degrees) - 1) * wp(profile)


def vq1(profile):
    """Number of quotient vertices of full degree q+1."""
    q = profile.q
    val = Fraction(2 * genus(profile) - 2 + v1(profile), q - 1)
    return _as_int(val, "vertex count")


def edges(profile):
    q = profile.q
    val = Fraction(v1(profile) + (q + 1) * vq1(profile), 2)
    return _as_int(val, "edge count")


def euler_check(profile):
    return edges(profile) + 1 == genus(profile) + v1(profile) + vq1(profile)


def eichler_count(profile):
    """Number of torsion classes in the unit group.

    The coefficient ring F_q[T] has class number one, which is why the
    count is the bare power of two with no class-group factor.
    """
    count = 2 ** len(profile.degrees) * wp(profile)
    assert count == 2 * v1(profile)
    return count


def sweep_profiles(qs=(2, 3, 4, 5, 7, 8, 9), sizes=(2, 4), maxdeg=4):
    """All realizable profiles with the given sizes and degree cap."""
    from itertools import combinations_with_replacement

    out = []
    for q in qs:
        for n in sizes:
            for degs in combinations_with_replacement(range(1, maxdeg + 1), n):
                profile = RamProfile(q, degs)
                if profile.realizable():
                    out.append(profile)
    return out


# ---------------------------------------------------------------------------
# graph-side measurements


def _edge_pairs(graph):
    return [(e.a, e.b) for e in graph.edges]


def _check_connected(graph):
    n = len(graph.vertices)
    if n == 0:
        raise ValueError("empty graph")
    adj = {i: set() for i in range(n)}
    for a, b in _edge_pairs(graph):
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise ValueError("graph is not connected")


def graph_h1(graph):
    """First Betti number E - V + 1 of a connected multigraph."""
    _check_connected(graph)
    return len(graph.edges) - len(graph.vertices) + 1


def smooth_point_criterion(graph):
    """True when some quotient vertex has degree below q+1."""
    return any(
        graph.degree(i) < graph.q + 1 for i in range(len(graph.vertices))
    )


class TreePresentation:
    """Amalgam presentation read off a tree quotient."""

    def __init__(self, q, generators, relations):
        self.q = q
        self.generators = list(generators)
        self.relations = list(relations)

    def __str__(self):
        return "<%s | %s>" % (", ".join(self.generators), ", ".join(self.relations))

    def __repr__(self):
        return "TreePresentation(%s)" % self


class NotATree:
    """Returned instead of a presentation when the quotient has loops.

    The unit group then surjects onto a free group whose rank is the first
    Betti number of the graph; only that rank is reported.
    """

    def __init__(self, free_rank):
        self.free_rank = free_rank

    def __repr__(self):
        return "NotATree(free_rank=%d)" % self.free_rank


def presentation(graph):
    """Presentation of the unit group when the quotient is a tree.

    Generators correspond to terminal vertices in discovery order; each has
    order q^2-1 and all their (q+1)-th powers coincide (they generate the
    scalar subgroup shared along every edge).  For a non-tree quotient a
    NotATree report with the free rank is returned instead.
    """
    h1 = graph_h1(graph)
    if h1 != 0:
        return NotATree(h1)
    q = graph.q
    terminals = [
        i for i in range(len(graph.vertices)) if graph.degree(i) == 1
    ]
    gens = ["g%d" % (k + 1) for k in range(len(terminals))]
    relations = ["%s^%d = 1" % (g, q**2 - 1) for g in gens]
    relations += [
        "%s^%d = %s^%d" % (gens[0], q + 1, g, q + 1) for g in gens[1:]
    ]
    return TreePresentation(q, gens, relations)


# ---------------------------------------------------------------------------
# integer Smith normal form and critical groups


def _det_int(mat):
    """Exact determinant of a square integer matrix (fraction-free)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(mat):
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Trailing zero factors are dropped; unit factors are kept, so the
    identity gives [1, 1].  The result is sanity-checked against the gcd
    of the entries and, for square nonsingular input, the determinant.
    """
    a = [list(map(int, row)) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    factors = []
    top = 0
    while top < min(rows, cols):
        # locate a nonzero entry of least magnitude to pivot on
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, pi, pj = best
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        while True:
            reduced = False
            for i in range(top + 1, rows):
                if a[i][top]:
                    f = a[i][top] // a[top][top]
                    for j in range(top, cols):
                        a[i][j] -= f * a[top][j]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                    reduced = True
            for j in range(top + 1, cols):
                if a[top][j]:
                    f = a[top][j] // a[top][top]
                    for i in range(top, rows):
                        a[i][j] -= f * a[i][top]
                    if a[top][j]:
                        for i in range(top, rows):
                            a[i][top], a[i][j] = a[i][j], a[i][top]
                    reduced = True
            if not reduced:
                break
        # enforce divisibility of the remaining block by the pivot
        pivot = abs(a[top][top])
        offender = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if a[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(top, cols):
                a[top][j] += a[offender][j]
            continue
        factors.append(pivot)
        top += 1

    for k in range(1, len(factors)):
        assert factors[k] % factors[k - 1] == 0
    entries = [x for row in mat for x in row if x]
    if factors:
        want = 0
        for x in entries:
            want = gcd(want, x)
        assert factors[0] == want
    if rows == cols and len(factors) == rows:
        prod = 1
        for d in factors:
            prod *= d
        assert prod == abs(_det_int([list(map(int, r)) for r in mat]))
    return factors


def critical_group(graph):
    """Invariant factors (> 1) of the reduced Laplacian of the graph."""
    n = len(graph.vertices)
    if n < 2:
        raise ValueError("critical group needs at least two vertices")
    _check_connected(graph)
    lap = [[0] * n for _ in range(n)]
    for a, b in _edge_pairs(graph):
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    reduced = [row[:-1] for row in lap[:-1]]
    return [d for d in smith_normal_form(reduced) if d > 1]


def spanning_tree_count(graph):
    """Kirchhoff count; the order of the critical group."""
    n = len(graph.vertices)
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for a, b in _edge_pairs(graph):
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    return _det_int([row[:-1] for row in lap[:-1]])


# ---------------------------------------------------------------------------
# cross-checking formulas against a computed graph


class Report:
    """Formula predictions, graph measurements, and the comparison verdicts."""

    def __init__(self, profile, graph):
        self.profile = profile
        self.graph = graph
        q = profile.q
        self.wp = wp(profile)
        self.genus = genus(profile)
        self.v1 = v1(profile)
        self.vq1 = vq1(profile)
        self.edges = edges(profile)
        self.eichler = eichler_count(profile)

        degs = [graph.degree(i) for i in range(len(graph.vertices))]
        self.graph_v1 = sum(1 for d in degs if d == 1)
        self.graph_vq1 = sum(1 for d in degs if d == q + 1)
        self.graph_edges = len(graph.edges)
        self.graph_h1 = graph_h1(graph)
        self.graph_smooth = smooth_point_criterion(graph)
        self.degrees = sorted(degs)

        terminal_stabs_ok = all(
            (graph.degree(v.index) == 1) == (v.stabilizer_order == q**2 - 1)
            for v in graph.vertices
        )
        self.checks = {
            "euler": euler_check(profile),
            "v1": self.graph_v1 == self.v1,
            "vq1": self.graph_vq1 == self.vq1,
            "edges": self.graph_edges == self.edges,
            "h1_equals_genus": self.graph_h1 == self.genus,
            "smooth_matches_wp": self.graph_smooth == (self.wp == 1),
            "degree_set": set(degs) <= {1, q + 1},
            "terminal_stabilizers": terminal_stabs_ok,
        }

    def ok(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "q": self.profile.q,
            "R": list(self.profile.degrees),
            "wp": self.wp,
            "genus": self.genus,
            "V1": self.v1,
            "Vq1": self.vq1,
            "E": self.edges,
            "eichler": self.eichler,
            "graph": {
                "V1": self.graph_v1,
                "Vq1": self.graph_vq1,
                "E": self.graph_edges,
                "h1": self.graph_h1,
                "smooth": self.graph_smooth,
                "degrees": self.degrees,
            },
            "checks": dict(self.checks),
        }


def cross_check(profile, graph):
    return Report(profile, graph)
