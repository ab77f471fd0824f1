"""Exact polynomial arithmetic, real-root isolation, and matching polynomials.

Everything here runs over fractions.Fraction.  Polynomials are coefficient
tuples in increasing powers of t.  Real roots are located with Sturm chains
on the square-free part, so root counts are counts of distinct real roots
and never depend on floating point.

An AlgebraicNumber is a real root pinned down by a square-free defining
polynomial and an open isolating interval with rational endpoints; when the
root happens to be rational the exact value is carried instead.  This is
the common currency for spectral radii and critical densities: comparisons
against rationals cost one Sturm count, never a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    NoRealRoot,
    NotATree,
    ParseError,
    SizeLimit,
    ValidationError,
    ZeroPolynomial,
)
from .graphs import Edge, PatternGraph

MAX_MATCHING_EDGES = 24
MAX_CHARPOLY_VERTICES = 12

Q = Fraction
_ZERO = Fraction(0)
_ONE = Fraction(1)


class RatPoly:
    """Dense univariate polynomial over Fraction, lowest power first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int]) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- basic algebra ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return RatPoly(out)

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if self.is_zero() or other.is_zero():
            return RatPoly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    def scale(self, c: Fraction | int) -> "RatPoly":
        c = Fraction(c)
        return RatPoly([a * c for a in self.coeffs])

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead = div[-1]
        quot = [_ZERO] * max(0, len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lead
            quot[k - dd] = q
            for j in range(dd + 1):
                rem[k - dd + j] -= q * div[j]
        return RatPoly(quot), RatPoly(rem)

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def derivative(self) -> "RatPoly":
        return RatPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return RatPoly([c / lead for c in self.coeffs])

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def deflate_root(self, r: Fraction) -> "RatPoly":
        """Divide by (t - r); the remainder must vanish."""
        quot, rem = self.divmod(RatPoly([-r, _ONE]))
        if not rem.is_zero():
            raise ValidationError(f"{r} is not a root, cannot deflate")
        return quot

    def __repr__(self) -> str:
        return f"RatPoly({list(self.coeffs)!r})"


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic() if not a.is_zero() else a


def square_free_part(p: RatPoly) -> RatPoly:
    if p.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.degree == 0:
        return RatPoly([_ONE])
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.divmod(g)[0].monic()


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    """Sturm chain of a square-free polynomial.

    Entries are rescaled by positive constants only; a monic step would
    flip signs on negative leading coefficients and break the variation
    count."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        neg = -rem
        chain.append(neg.scale(_ONE / abs(neg.leading())))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign_variations(chain: Sequence[RatPoly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count_open(chain: Sequence[RatPoly], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots of chain[0] in the open interval (lo, hi).

    Requires chain[0] nonzero at both endpoints.
    """
    p = chain[0]
    if p(lo) == 0 or p(hi) == 0:
        raise ValidationError("Sturm count endpoints must not be roots")
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def cauchy_root_bound(p: RatPoly) -> Fraction:
    """All real roots of p lie in (-B, B)."""
    if p.is_zero() or p.degree == 0:
        return _ONE
    lead = abs(p.coeffs[-1])
    return _ONE + max(abs(c) for c in p.coeffs[:-1]) / lead


def count_roots_in_unit_interval(p: RatPoly) -> int:
    """Number of distinct real roots in the closed interval [0, 1]."""
    if p.is_zero():
        raise ZeroPolynomial("root count undefined for the zero polynomial")
    if p.degree == 0:
        return 0
    sf = square_free_part(p)
    count = 0
    for endpoint in (_ZERO, _ONE):
        if sf.degree >= 1 and sf(endpoint) == 0:
            count += 1
            sf = sf.deflate_root(endpoint)
    if sf.degree >= 1:
        count += sturm_count_open(sturm_chain(sf), _ZERO, _ONE)
    return count


def positive_on_unit_interval(p: RatPoly) -> bool:
    """True iff p(t) > 0 for every t in [0, 1]."""
    if p.is_zero():
        raise ZeroPolynomial("positivity undefined for the zero polynomial")
    return p(_ZERO) > 0 and count_roots_in_unit_interval(p) == 0


def simplest_fraction_between(lo: Fraction, hi: Fraction) -> Fraction:
    """A smallest-denominator rational in the open interval (lo, hi),
    via the Stern-Brocot / continued-fraction descent.  Used to detect
    rational roots exactly: once an isolating interval is tight enough
    around a rational root, that root is the simplest number inside."""
    if not lo < hi:
        raise ValidationError("empty interval")
    fl = lo.numerator // lo.denominator
    if Fraction(fl + 1) < hi:
        # floor(lo)+1 > lo always holds, so this integer lies inside.
        return Fraction(fl + 1)
    if lo == fl:
        # Interval hugs the integer fl from above: simplest is fl + 1/k.
        inv = _ONE / (hi - fl)
        k = inv.numerator // inv.denominator + 1
        return fl + Fraction(1, k)
    # Both endpoints strictly inside (fl, fl+1): recurse on reciprocals.
    sub = simplest_fraction_between(_ONE / (hi - fl), _ONE / (lo - fl))
    return fl + _ONE / sub


@dataclass
class AlgebraicNumber:
    """A real algebraic number: square-free defining polynomial plus an
    open isolating interval (lo, hi) containing exactly one root, with
    poly nonzero at both endpoints.  exact is set when the value is
    rational (and then the interval is ignored)."""

    poly: RatPoly
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    _chain: list[RatPoly] | None = field(default=None, repr=False)

    @staticmethod
    def from_rational(x: Fraction | int) -> "AlgebraicNumber":
        x = Fraction(x)
        return AlgebraicNumber(RatPoly([-x, _ONE]), x - 1, x + 1, exact=x)

    def chain(self) -> list[RatPoly]:
        if self._chain is None:
            self._chain = sturm_chain(self.poly)
        return self._chain

    def interval(self) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return (self.exact, self.exact)
        return (self.lo, self.hi)

    def width(self) -> Fraction:
        if self.exact is not None:
            return _ZERO
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        if self.exact is not None:
            return self.exact
        return (self.lo + self.hi) / 2

    def as_float(self) -> float:
        self.refine(Fraction(1, 10**15))
        return float(self.midpoint())

    def refine(self, tol: Fraction | float) -> None:
        """Shrink the isolating interval to width <= tol by sign bisection,
        detecting rational roots exactly along the way."""
        if self.exact is not None:
            return
        tol = Fraction(tol)
        if tol <= 0:
            raise ValidationError("tolerance must be positive")
        sign_lo = self.poly(self.lo) > 0
        while self.hi - self.lo > tol:
            # A rational root eventually becomes the simplest rational in
            # the interval, so this probe makes rational roots exact.
            probe = simplest_fraction_between(self.lo, self.hi)
            if self.poly(probe) == 0:
                self.exact = probe
                return
            mid = (self.lo + self.hi) / 2
            v = self.poly(mid)
            if v == 0:
                self.exact = mid
                return
            if (v > 0) == sign_lo:
                self.lo = mid
            else:
                self.hi = mid

    def compare_fraction(self, x: Fraction | int) -> int:
        """Sign of (self - x): -1, 0, or +1."""
        x = Fraction(x)
        if self.exact is not None:
            return (self.exact > x) - (self.exact < x)
        if x <= self.lo:
            return 1
        if x >= self.hi:
            return -1
        if self.poly(x) == 0:
            return 0
        below = _sign_variations(self.chain(), self.lo) \
            - _sign_variations(self.chain(), x)
        return -1 if below == 1 else 1

    def compare(self, other: "AlgebraicNumber") -> int:
        if other.exact is not None:
            return self.compare_fraction(other.exact)
        if self.exact is not None:
            return -other.compare_fraction(self.exact)
        # Equality test: if the two values are equal, their common value is
        # a root of gcd(p1, p2) lying strictly inside the intervals'
        # overlap; conversely, a gcd root in the overlap is a root of both
        # polynomials there, and each interval holds exactly one root of
        # its own polynomial, so all three coincide.
        g = poly_gcd(self.poly, other.poly)
        if g.degree >= 1:
            olo, ohi = max(self.lo, other.lo), min(self.hi, other.hi)
            if olo < ohi:
                for endpoint in (olo, ohi):
                    if g.degree >= 1 and g(endpoint) == 0:
                        g = g.deflate_root(endpoint)
                if g.degree >= 1 and sturm_count_open(sturm_chain(g), olo, ohi) >= 1:
                    return 0
        # Distinct values: refine until the intervals separate.
        while not (self.hi <= other.lo or other.hi <= self.lo):
            width = max(self.width(), other.width())
            self.refine(width / 4)
            other.refine(width / 4)
            if self.exact is not None or other.exact is not None:
                return self.compare(other)
        return -1 if self.hi <= other.lo else 1


def largest_real_root(p: RatPoly, tol: Fraction | float = Fraction(1, 10**9)) -> AlgebraicNumber:
    """Largest real root of p as an AlgebraicNumber refined to tol."""
    if p.is_zero():
        raise ZeroPolynomial("roots undefined for the zero polynomial")
    if p.degree == 0:
        raise NoRealRoot("nonzero constant polynomial has no root")
    sf = square_free_part(p)
    bound = cauchy_root_bound(sf)
    lo, hi = -bound, bound
    # The Cauchy bound is strict, so the endpoints are never roots.
    chain = sturm_chain(sf)
    if sturm_count_open(chain, lo, hi) == 0:
        raise NoRealRoot("polynomial has no real root")
    # Bisect until exactly the largest root remains in (lo, hi).  An exact
    # midpoint hit is deflated so interval endpoints stay off the roots.
    while sturm_count_open(chain, lo, hi) > 1:
        mid = (lo + hi) / 2
        if sf(mid) == 0:
            sf = sf.deflate_root(mid)
            chain = sturm_chain(sf)
            if sturm_count_open(chain, mid, hi) == 0:
                return AlgebraicNumber.from_rational(mid)
            lo = mid
            continue
        if sturm_count_open(chain, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    root = AlgebraicNumber(sf, lo, hi)
    return _refined(root, tol)


def _refined(x: AlgebraicNumber, tol: Fraction | float) -> AlgebraicNumber:
    x.refine(Fraction(tol))
    return x


# -- polynomial (de)serialization -----------------------------------------

def poly_to_strings(p: RatPoly) -> list[str]:
    """Coefficients lowest power first, as exact 'p/q' strings."""
    return [str(c) for c in p.coeffs]


def poly_from_strings(items: Sequence[str]) -> RatPoly:
    coeffs = []
    for s in items:
        try:
            coeffs.append(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {s!r}: {exc}") from None
    return RatPoly(coeffs)


# -- matching polynomials --------------------------------------------------

def _matching_weight_sums(
    H: PatternGraph, weight: Callable[[Edge], Fraction]
) -> list[Fraction]:
    """c_k = sum over k-matchings M of prod_{e in M} weight(e), k = 0..n/2.

    Memoized recursion on the set of available vertices: the lowest
    available vertex is either unmatched or matched to a neighbor.
    """
    n = H.n
    adj = H.adjacency
    memo: dict[int, list[Fraction]] = {0: [_ONE]}

    def solve(mask: int) -> list[Fraction]:
        got = memo.get(mask)
        if got is not None:
            return got
        v = (mask & -mask).bit_length()  # lowest available vertex label
        rest = mask & ~(1 << (v - 1))
        out = list(solve(rest))
        for u in adj[v]:
            bit = 1 << (u - 1)
            if mask & bit:
                e = (v, u) if v < u else (u, v)
                w = weight(e)
                if w == 0:
                    continue
                sub = solve(rest & ~bit)
                if len(out) < len(sub) + 1:
                    out.extend([_ZERO] * (len(sub) + 1 - len(out)))
                for k, c in enumerate(sub):
                    out[k + 1] += w * c
        memo[mask] = out
        return out

    return solve((1 << n) - 1)


def _tree_matching_weight_sums(
    H: PatternGraph, weight: Callable[[Edge], Fraction]
) -> list[Fraction]:
    """Same as _matching_weight_sums for trees, by a rooted two-state DP
    (vertex matched into its subtree or not), linear in n."""
    if H.n == 1:
        return [_ONE]
    root = 1
    parent = {root: 0}
    order = H.bfs_order(root)
    # free[v]: weight sums by matching size in v's subtree with v unmatched;
    # any[v]: same with v free to be matched inside the subtree.
    free: dict[int, list[Fraction]] = {}
    anym: dict[int, list[Fraction]] = {}
    for v in order:
        for u in H.adjacency[v]:
            if u not in parent:
                parent[u] = v

    def mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    for v in reversed(order):
        children = [u for u in H.adjacency[v] if parent.get(u) == v]
        f = [_ONE]
        for c in children:
            f = mul(f, anym[c])
        a = list(f)
        for c in children:
            partial = [_ONE]
            for c2 in children:
                partial = mul(partial, free[c2] if c2 == c else anym[c2])
            e = (v, c) if v < c else (c, v)
            w = weight(e)
            if w == 0:
                continue
            if len(a) < len(partial) + 1:
                a.extend([_ZERO] * (len(partial) + 1 - len(a)))
            for k, x in enumerate(partial):
                a[k + 1] += w * x
        free[v] = f
        anym[v] = a
    return anym[root]


def matching_weight_sums(
    H: PatternGraph, weight: Callable[[Edge], Fraction] | None = None
) -> list[Fraction]:
    if weight is None:
        weight = lambda e: _ONE
    if H.is_tree():
        # linear-time rooted recursion, no size cap needed
        return _tree_matching_weight_sums(H, weight)
    if len(H.edges) > MAX_MATCHING_EDGES:
        raise SizeLimit(
            f"matching polynomial capped at {MAX_MATCHING_EDGES} edges, "
            f"got {len(H.edges)}")
    return _matching_weight_sums(H, weight)


def matching_polynomial(H: PatternGraph) -> RatPoly:
    """Signed matching polynomial sum_k (-1)^k m_k t^(n-2k)."""
    counts = matching_weight_sums(H)
    coeffs = [_ZERO] * (H.n + 1)
    for k, m_k in enumerate(counts):
        coeffs[H.n - 2 * k] = (-1) ** k * m_k
    return RatPoly(coeffs)


def _edge_assignment(
    H: PatternGraph, r: Mapping[Edge, Fraction] | Sequence[Fraction]
) -> dict[Edge, Fraction]:
    if isinstance(r, Mapping):
        out = {}
        for e, val in r.items():
            i, j = e
            key = (i, j) if i < j else (j, i)
            if key not in H.edge_index:
                raise ValidationError(f"{key} is not an edge of the pattern")
            out[key] = Fraction(val)
        missing = set(H.edges) - set(out)
        if missing:
            raise ValidationError(f"assignment missing edges {sorted(missing)}")
        return out
    vals = list(r)
    if len(vals) != len(H.edges):
        raise ValidationError(
            f"expected {len(H.edges)} values (edge order {list(H.edges)}), "
            f"got {len(vals)}")
    return {e: Fraction(v) for e, v in zip(H.edges, vals)}


def multivariate_matching_eval(
    H: PatternGraph, r: Mapping[Edge, Fraction] | Sequence[Fraction]
) -> RatPoly:
    """F(r, t) = sum over matchings M of (prod_{e in M} r_e) (-t)^|M|,
    returned as a polynomial in t.  Constant term 1, degree <= n/2."""
    assignment = _edge_assignment(H, r)
    counts = matching_weight_sums(H, lambda e: assignment[e])
    return RatPoly([(-1) ** k * c for k, c in enumerate(counts)])


def matching_even_part(H: PatternGraph) -> RatPoly:
    """q(s) with M(t) = t^(n mod 2) q(t^2): q = sum_k (-1)^k m_k s^(K-k),
    K = floor(n/2).  Well defined because M only has exponents of one
    parity (matchings remove vertices in pairs)."""
    counts = matching_weight_sums(H)
    K = H.n // 2
    coeffs = [_ZERO] * (K + 1)
    for k, m_k in enumerate(counts):
        coeffs[K - k] = (-1) ** k * m_k
    return RatPoly(coeffs)


def largest_matching_root_squared(
    H: PatternGraph, tol: Fraction | float = Fraction(1, 10**9)
) -> AlgebraicNumber:
    """t(H)^2: the square of the largest root of the matching polynomial,
    as the largest root of its even part.  Exact 0 for edgeless graphs."""
    if not H.edges:
        return AlgebraicNumber.from_rational(0)
    q = matching_even_part(H)
    return largest_real_root(q, tol)


def tree_spectral_radius(
    T: PatternGraph, tol: Fraction | float = Fraction(1, 10**9)
) -> AlgebraicNumber:
    """lambda(T): for trees the matching polynomial is the characteristic
    polynomial, so this is the adjacency spectral radius."""
    if not T.is_tree():
        raise NotATree("spectral radius via matching polynomial needs a tree")
    if T.n == 1:
        return AlgebraicNumber.from_rational(0)
    return largest_real_root(matching_polynomial(T), tol)


def char_poly_identity_check(
    T: PatternGraph, w: Mapping[Edge, Fraction] | Sequence[Fraction]
) -> bool:
    """Check det(tI - A_w) == t^n F(w^2, 1/t^2) t^n for a weighted tree,
    where A_w is the weighted adjacency matrix.

    The determinant is expanded independently (permutation expansion with
    sparse pruning), so this cross-checks the matching recursion.
    """
    if not T.is_tree():
        raise NotATree("identity check defined for trees")
    if T.n > MAX_CHARPOLY_VERTICES:
        raise SizeLimit(
            f"characteristic polynomial capped at {MAX_CHARPOLY_VERTICES} "
            f"vertices, got {T.n}")
    weights = _edge_assignment(T, w)
    n = T.n
    # Matrix of RatPoly entries for tI - A.
    t_poly = RatPoly([_ZERO, _ONE])
    entries: dict[tuple[int, int], RatPoly] = {}
    for i in range(1, n + 1):
        entries[(i, i)] = t_poly
    for (i, j), val in weights.items():
        entries[(i, j)] = RatPoly([-val])
        entries[(j, i)] = RatPoly([-val])

    det = RatPoly([])
    cols_of_row = {
        i: [j for j in range(1, n + 1) if (i, j) in entries]
        for i in range(1, n + 1)
    }

    def expand(row: int, used: int, acc: RatPoly, parity: int) -> None:
        nonlocal det
        if row > n:
            det = det + (acc if parity % 2 == 0 else -acc)
            return
        for col in cols_of_row[row]:
            bit = 1 << col
            if used & bit:
                continue
            inversions = bin(used >> (col + 1)).count("1")
            expand(row + 1, used | bit, acc * entries[(row, col)],
                   parity + inversions)

    expand(1, 0, RatPoly([_ONE]), 0)

    counts = matching_weight_sums(T, lambda e: weights[e] ** 2)
    rhs_coeffs = [_ZERO] * (n + 1)
    for k, c in enumerate(counts):
        rhs_coeffs[n - 2 * k] = (-1) ** k * c
    return det == RatPoly(rhs_coeffs)
