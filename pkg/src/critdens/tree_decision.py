"""Leaf-reduction decision procedure for trees and exact tree critical
densities.

Densities gamma_e and ratios r_e = 1 - gamma_e are exact rationals.  The
decision loop follows the two-step reduction verbatim: stop NotEnsured the
moment any ratio reaches 1, stop Ensured once at most two vertices remain
with the last ratio below 1, otherwise delete a leaf v with neighbor u and
rescale every remaining edge at u by 1 / (1 - r_uv).

Conventions at the boundary: a ratio of exactly 1 (density 0) is
NotEnsured; a single-vertex tree is Ensured vacuously.  Critical densities
satisfy the open rule: homogeneous density d ensures the tree iff
d > 1 - 1/lambda^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import (
    AlreadyEnsured,
    DivisionByZeroGuard,
    NotALeaf,
    NotATree,
    ValidationError,
)
from .graphs import Edge, PatternGraph
from .polynomials import (
    AlgebraicNumber,
    largest_matching_root_squared,
    multivariate_matching_eval,
    positive_on_unit_interval,
)

_ONE = Fraction(1)
_ZERO = Fraction(0)

ENSURED = "Ensured"
NOT_ENSURED = "NotEnsured"


@dataclass(frozen=True)
class ReductionStep:
    """One leaf removal: the edges at the neighbor carry the new ratios."""

    leaf: int
    neighbor: int
    updated: dict[Edge, Fraction]


@dataclass(frozen=True)
class TreeDecision:
    verdict: str
    violating_edge: Edge | None
    reduction_trace: tuple[ReductionStep, ...]

    @property
    def ensured(self) -> bool:
        return self.verdict == ENSURED


def _normalize_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


def edge_assignment(
    T: PatternGraph,
    values: Mapping[Edge, Fraction] | Sequence[Fraction],
    low: Fraction | None = None,
    high: Fraction | None = None,
    what: str = "value",
) -> dict[Edge, Fraction]:
    """Resolve positional or keyed edge values against T's canonical edge
    order, with optional range validation."""
    if isinstance(values, Mapping):
        out = {}
        for e, v in values.items():
            key = _normalize_edge(*e)
            if key not in T.edge_index:
                raise ValidationError(f"{key} is not an edge of the graph")
            out[key] = Fraction(v)
        missing = set(T.edges) - set(out)
        if missing:
            raise ValidationError(f"missing {what} for edges {sorted(missing)}")
    else:
        vals = list(values)
        if len(vals) != len(T.edges):
            raise ValidationError(
                f"expected {len(T.edges)} {what} values in edge order "
                f"{list(T.edges)}, got {len(vals)}")
        out = {e: Fraction(v) for e, v in zip(T.edges, vals)}
    for e, v in out.items():
        if low is not None and v < low:
            raise ValidationError(f"{what} {v} on edge {e} below {low}")
        if high is not None and v > high:
            raise ValidationError(f"{what} {v} on edge {e} above {high}")
    return out


def _decide_from_ratios(
    T: PatternGraph,
    ratios: dict[Edge, Fraction],
    pick_leaf: Callable[[list[int]], int] | None = None,
) -> TreeDecision:
    """Core reduction loop.  Vertices keep their original labels, so the
    violating edge and the trace refer to edges of the input tree."""
    adj: dict[int, set[int]] = {v: set(T.adjacency[v]) for v in T.vertices()}
    r = dict(ratios)
    alive = set(T.vertices())
    trace: list[ReductionStep] = []
    while True:
        violating = next(
            (e for e in sorted(r) if r[e] >= 1), None)
        if violating is not None:
            return TreeDecision(NOT_ENSURED, violating, tuple(trace))
        if len(alive) <= 2:
            return TreeDecision(ENSURED, None, tuple(trace))
        leaves = sorted(v for v in alive if len(adj[v]) == 1)
        v = leaves[0] if pick_leaf is None else pick_leaf(leaves)
        (u,) = adj[v]
        e_leaf = _normalize_edge(u, v)
        denom = _ONE - r.pop(e_leaf)
        adj[u].discard(v)
        del adj[v]
        alive.discard(v)
        updated: dict[Edge, Fraction] = {}
        for w in adj[u]:
            e = _normalize_edge(u, w)
            r[e] = r[e] / denom
            updated[e] = r[e]
        trace.append(ReductionStep(v, u, updated))


def decide_tree(
    T: PatternGraph,
    gamma: Mapping[Edge, Fraction] | Sequence[Fraction],
    pick_leaf: Callable[[list[int]], int] | None = None,
) -> TreeDecision:
    """Decide whether the edge densities force a transversal copy of T in
    every blow-up.  Deterministic lowest-index leaf choice unless a custom
    pick_leaf is supplied (used by order-invariance tests)."""
    if not T.is_tree():
        raise NotATree("decision procedure requires a tree")
    dens = edge_assignment(T, gamma, low=_ZERO, high=_ONE, what="density")
    ratios = {e: _ONE - g for e, g in dens.items()}
    return _decide_from_ratios(T, ratios, pick_leaf)


def leaf_reduction_step(
    T: PatternGraph,
    r: Mapping[Edge, Fraction] | Sequence[Fraction],
    leaf: int,
) -> tuple[PatternGraph, dict[Edge, Fraction]]:
    """One reduction step: remove the leaf, rescale the ratios at its
    neighbor by 1/(1 - r_leaf).

    The smaller tree keeps vertex order: labels above the removed leaf
    shift down by one, and the returned ratio map is keyed by the new
    labels.
    """
    if not T.is_tree():
        raise NotATree("leaf reduction requires a tree")
    ratios = edge_assignment(T, r, low=_ZERO, what="ratio")
    T._check_vertex(leaf)
    if T.degree(leaf) != 1:
        raise NotALeaf(f"vertex {leaf} has degree {T.degree(leaf)}, not 1")
    if T.n < 3:
        raise NotALeaf("cannot reduce a tree with fewer than 3 vertices")
    (u,) = T.neighbors(leaf)
    r_leaf = ratios[_normalize_edge(u, leaf)]
    if r_leaf >= 1:
        raise DivisionByZeroGuard(
            f"leaf edge ratio {r_leaf} >= 1; apply the stop rule instead")

    def relabel(v: int) -> int:
        return v - 1 if v > leaf else v

    new_edges = []
    new_ratios: dict[Edge, Fraction] = {}
    for (i, j), val in ratios.items():
        if leaf in (i, j):
            continue
        e = _normalize_edge(relabel(i), relabel(j))
        if u in (i, j):
            val = val / (_ONE - r_leaf)
        new_edges.append(e)
        new_ratios[e] = val
    return PatternGraph(T.n - 1, tuple(new_edges)), new_ratios


def decide_tree_equivalence(
    T: PatternGraph, gamma: Mapping[Edge, Fraction] | Sequence[Fraction]
) -> bool:
    """Cross-check the reduction verdict against strict positivity of the
    matching generating polynomial on [0, 1].  Always true."""
    decision = decide_tree(T, gamma)
    dens = edge_assignment(T, gamma, low=_ZERO, high=_ONE, what="density")
    ratios = {e: _ONE - g for e, g in dens.items()}
    positive = positive_on_unit_interval(multivariate_matching_eval(T, ratios))
    return decision.ensured == positive


def critical_scaling(
    T: PatternGraph,
    r: Mapping[Edge, Fraction] | Sequence[Fraction],
    tol: Fraction | float = Fraction(1, 10**9),
) -> tuple[Fraction, Fraction]:
    """Smallest scale t* in (0, 1] at which densities 1 - t r_e stop
    ensuring the tree, bracketed to width <= tol.

    Scaling all ratios by t <= 1 only shrinks every intermediate ratio of
    the reduction, so the verdict is monotone in t and exact-rational
    bisection on the decision procedure brackets t*.  The left endpoint is
    Ensured, the right NotEnsured, so t* lies in (lo, hi].
    """
    if not T.is_tree():
        raise NotATree("critical scaling requires a tree")
    ratios = edge_assignment(T, r, low=_ZERO, what="ratio")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if _decide_from_ratios(T, ratios).ensured:
        raise AlreadyEnsured("densities 1 - r_e already ensure the tree")
    lo, hi = _ZERO, _ONE
    while hi - lo > tol:
        mid = (lo + hi) / 2
        scaled = {e: mid * v for e, v in ratios.items()}
        if _decide_from_ratios(T, scaled).ensured:
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass
class CriticalDensity:
    """Critical homogeneous density d = 1 - 1/s for s = lambda^2, kept in
    s-space so comparisons against rationals stay exact.

    Edgeless patterns get s = 1 directly (critical density 0: a single
    vertex appears in every blow-up).
    """

    s_star: AlgebraicNumber

    @staticmethod
    def zero() -> "CriticalDensity":
        return CriticalDensity(AlgebraicNumber.from_rational(1))

    @property
    def exact(self) -> Fraction | None:
        if self.s_star.exact is None:
            return None
        return _ONE - _ONE / self.s_star.exact

    def interval(self, tol: Fraction | float = Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return (self.exact, self.exact)
        tol = Fraction(tol)
        self.s_star.refine(tol)
        while True:
            if self.s_star.exact is not None:
                return (self.exact, self.exact)
            lo, hi = self.s_star.lo, self.s_star.hi
            if lo > 0 and (hi - lo) / (lo * hi) <= tol:
                return (_ONE - _ONE / lo, _ONE - _ONE / hi)
            self.s_star.refine((hi - lo) / 4)

    def as_float(self) -> float:
        lo, hi = self.interval(Fraction(1, 10**12))
        return float((lo + hi) / 2)

    def compare_density(self, d: Fraction | float) -> int:
        """Sign of (d_crit - d)."""
        d = Fraction(d)
        if d >= 1:
            return -1
        return self.s_star.compare_fraction(_ONE / (_ONE - d))

    def ensures(self, d: Fraction | float) -> bool:
        """Homogeneous density d ensures the tree iff d > d_crit."""
        return self.compare_density(d) < 0


def dcrit_tree(
    T: PatternGraph, tol: Fraction | float = Fraction(1, 10**9)
) -> CriticalDensity:
    """Critical homogeneous density of a tree, 1 - 1/lambda(T)^2, exact
    when lambda^2 is rational and an interval of width <= tol otherwise."""
    if not T.is_tree():
        raise NotATree("critical tree density requires a tree")
    if T.n == 1:
        return CriticalDensity.zero()
    s = largest_matching_root_squared(T, tol)
    dc = CriticalDensity(s)
    dc.interval(tol)
    return dc
