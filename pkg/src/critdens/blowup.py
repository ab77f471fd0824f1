"""Weighted blow-up graphs, transversal search, and the two explicit
extremal constructions.

A blow-up replaces each pattern vertex i by a cluster A_i of weighted
slots (weights >= 0 summing to 1 per cluster) and places cross edges only
between clusters of pattern-adjacent vertices.  The density of a pattern
edge (i, j) is the total weight mass sum w(u) w(v) over present cross
pairs.  A transversal picks one slot per cluster so that every pattern
edge is realized; its existence never depends on the weights.

Two numeric modes: "exact" (fractions end to end, equalities exact) and
"float" (tolerance 1e-9).  The mode is recorded in the serialized object.

Constructions:

* gacs_tree_construction: for a tree T, clusters A_i = {v_ij : j ~ i},
  all cross pairs present except (v_ij, v_ji), weights w_ij = x_j /
  (lambda x_i) from the principal eigenvector; every density equals
  1 - 1/lambda^2 and no transversal exists.  When lambda^2 is rational the
  weights are provably rational and the construction is exact (the
  eigenvector lives in Q(lambda), and ratios across an edge cancel the
  irrational part); otherwise floats are used.

* star_decomposition_construct: for any connected H, a proper labeling f,
  and densities gamma that fail the monotone-path tree condition, a
  recursive construction whose densities meet or exceed gamma with no
  transversal.  Cluster sizes stay within the vertex degrees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    NotAnHEdge,
    NotATree,
    PreconditionViolated,
    SizeLimit,
    ValidationError,
)
from .graphs import Edge, PatternGraph, is_proper_labeling, parse_graph
from .polynomials import AlgebraicNumber, largest_matching_root_squared
from .tree_decision import edge_assignment

FLOAT_TOL = 1e-9
TRANSVERSAL_GUARD = 10**6

Slot = tuple[int, int]  # (pattern vertex, slot index within its cluster)

_ONE = Fraction(1)
_ZERO = Fraction(0)


@dataclass(frozen=True)
class Transversal:
    """One chosen slot index per pattern vertex."""

    choice: dict[int, int]


def _normalize_pair(a: Slot, b: Slot) -> tuple[Slot, Slot]:
    return (a, b) if a <= b else (b, a)


class WeightedBlowupGraph:
    """Immutable weighted blow-up of a pattern graph."""

    def __init__(
        self,
        pattern: PatternGraph,
        weights: Sequence[Sequence[Fraction | float]],
        cross_edges: Sequence[tuple[Slot, Slot]] | set[tuple[Slot, Slot]],
        mode: str = "exact",
    ) -> None:
        if mode not in ("exact", "float"):
            raise ValidationError(f"unknown mode {mode!r}")
        if len(weights) != pattern.n:
            raise ValidationError(
                f"need one cluster per pattern vertex: {pattern.n}, "
                f"got {len(weights)}")
        self.pattern = pattern
        self.mode = mode
        if mode == "exact":
            self.weights: tuple[tuple, ...] = tuple(
                tuple(Fraction(w) for w in cluster) for cluster in weights)
        else:
            self.weights = tuple(
                tuple(float(w) for w in cluster) for cluster in weights)
        for i, cluster in enumerate(self.weights, start=1):
            if not cluster:
                raise ValidationError(f"cluster {i} is empty")
            if any(w < 0 for w in cluster):
                raise ValidationError(f"negative weight in cluster {i}")
            total = sum(cluster)
            if mode == "exact":
                if total != 1:
                    raise ValidationError(
                        f"cluster {i} weights sum to {total}, not 1")
            elif abs(total - 1) > FLOAT_TOL:
                raise ValidationError(
                    f"cluster {i} weights sum to {total}, off by more "
                    f"than {FLOAT_TOL}")
        pairs: set[tuple[Slot, Slot]] = set()
        for a, b in cross_edges:
            (i, ai), (j, bj) = a, b
            if not pattern.has_edge(i, j):
                raise ValidationError(
                    f"cross edge between clusters {i}, {j}: not a pattern edge")
            for v, s in ((i, ai), (j, bj)):
                if not (0 <= s < len(self.weights[v - 1])):
                    raise ValidationError(f"slot {s} out of range in cluster {v}")
            pairs.add(_normalize_pair((i, ai), (j, bj)))
        self.cross_edges: frozenset[tuple[Slot, Slot]] = frozenset(pairs)

    def cluster_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.weights)

    def has_cross_edge(self, a: Slot, b: Slot) -> bool:
        return _normalize_pair(a, b) in self.cross_edges

    def density(self, i: int, j: int) -> Fraction | float:
        """Weight mass of present cross pairs between clusters i and j."""
        if not self.pattern.has_edge(i, j):
            raise NotAnHEdge(f"({i},{j}) is not an edge of the pattern")
        total = _ZERO if self.mode == "exact" else 0.0
        for a, wa in enumerate(self.weights[i - 1]):
            for b, wb in enumerate(self.weights[j - 1]):
                if self.has_cross_edge((i, a), (j, b)):
                    total += wa * wb
        return total

    def densities(self) -> dict[Edge, Fraction | float]:
        return {e: self.density(*e) for e in self.pattern.edges}

    def complement_view(self) -> list[tuple[Slot, Slot]]:
        """All missing cross pairs, sorted; the complement of the blow-up
        inside the complete blow-up."""
        missing = []
        for i, j in self.pattern.edges:
            for a in range(len(self.weights[i - 1])):
                for b in range(len(self.weights[j - 1])):
                    if not self.has_cross_edge((i, a), (j, b)):
                        missing.append(((i, a), (j, b)))
        return sorted(missing)

    def find_transversal(self) -> Transversal | None:
        """Backtracking search over clusters in BFS order of the pattern,
        pruning against already-chosen neighbors.  Exhaustive: None is a
        certificate.  Weights play no role."""
        space = 1
        for c in self.weights:
            space *= len(c)
            if space > TRANSVERSAL_GUARD:
                raise SizeLimit(
                    f"choice space exceeds {TRANSVERSAL_GUARD}")
        order = self.pattern.bfs_order(1)
        pos_of = {v: k for k, v in enumerate(order)}
        chosen: dict[int, int] = {}

        def backtrack(k: int) -> bool:
            if k == len(order):
                return True
            v = order[k]
            earlier = [u for u in self.pattern.adjacency[v] if pos_of[u] < k]
            for s in range(len(self.weights[v - 1])):
                if all(self.has_cross_edge((v, s), (u, chosen[u]))
                       for u in earlier):
                    chosen[v] = s
                    if backtrack(k + 1):
                        return True
                    del chosen[v]
            return False

        if backtrack(0):
            return Transversal(dict(chosen))
        return None

    def prune_zero_weights(self) -> "WeightedBlowupGraph":
        """Drop slots of zero weight (below 1e-12 in float mode); slot
        indices are renumbered per cluster."""
        keep: dict[Slot, int] = {}
        new_weights: list[list] = []
        for i, cluster in enumerate(self.weights, start=1):
            kept = []
            for a, w in enumerate(cluster):
                dead = (w == 0) if self.mode == "exact" else (w < 1e-12)
                if not dead:
                    keep[(i, a)] = len(kept)
                    kept.append(w)
            if not kept:
                raise ValidationError(f"cluster {i} lost all its weight")
            new_weights.append(kept)
        new_edges = [
            ((i, keep[(i, a)]), (j, keep[(j, b)]))
            for (i, a), (j, b) in self.cross_edges
            if (i, a) in keep and (j, b) in keep
        ]
        return WeightedBlowupGraph(self.pattern, new_weights, new_edges, self.mode)

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> dict:
        def encode(w) -> str | float:
            return str(w) if self.mode == "exact" else float(w)

        return {
            "pattern": {"n": self.pattern.n,
                        "edges": [list(e) for e in self.pattern.edges]},
            "clusters": [
                [{"id": a, "weight": encode(w)} for a, w in enumerate(cluster)]
                for cluster in self.weights
            ],
            "cross_edges": sorted(
                [i, a, j, b] for (i, a), (j, b) in self.cross_edges),
            "mode": self.mode,
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "WeightedBlowupGraph":
        try:
            pattern = PatternGraph(
                obj["pattern"]["n"],
                tuple(tuple(e) for e in obj["pattern"]["edges"]))
            mode = obj["mode"]
            parse = Fraction if mode == "exact" else float
            clusters = []
            for cluster in obj["clusters"]:
                slots = sorted(cluster, key=lambda s: s["id"])
                if [s["id"] for s in slots] != list(range(len(slots))):
                    raise ValidationError("slot ids must be 0..k-1")
                clusters.append([parse(s["weight"]) for s in slots])
            edges = [((i, a), (j, b)) for i, a, j, b in obj["cross_edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed blow-up object: {exc}") from None
        return WeightedBlowupGraph(pattern, clusters, edges, mode)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "WeightedBlowupGraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from None
        return WeightedBlowupGraph.from_json_obj(obj)


def complete_blowup(H: PatternGraph, sizes: Sequence[int]) -> WeightedBlowupGraph:
    """All cross pairs present, uniform weights; handy baseline."""
    weights = [[Fraction(1, s)] * s for s in sizes]
    edges = [
        ((i, a), (j, b))
        for i, j in H.edges
        for a in range(sizes[i - 1])
        for b in range(sizes[j - 1])
    ]
    return WeightedBlowupGraph(H, weights, edges)


# -- exact quadratic-field arithmetic for the eigenvector construction -----

def _exact_sqrt(s: Fraction) -> Fraction | None:
    """sqrt(s) when s is the square of a rational, else None."""
    if s < 0:
        return None
    np_, dp = math.isqrt(s.numerator), math.isqrt(s.denominator)
    if np_ * np_ == s.numerator and dp * dp == s.denominator:
        return Fraction(np_, dp)
    return None


class _QuadExt:
    """Numbers a + b sqrt(s) with rational a, b and fixed rational s.

    Used only with either sqrt(s) irrational, or b identically 0 (when s
    is a perfect square the caller passes lambda as a rational part), so
    the norm a^2 - b^2 s vanishes only at 0 and inversion is safe.
    """

    __slots__ = ("a", "b", "s")

    def __init__(self, a: Fraction, b: Fraction, s: Fraction) -> None:
        self.a, self.b, self.s = Fraction(a), Fraction(b), s

    def __add__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(self.a + other.a, self.b + other.b, self.s)

    def __sub__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(self.a - other.a, self.b - other.b, self.s)

    def __mul__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(
            self.a * other.a + self.b * other.b * self.s,
            self.a * other.b + self.b * other.a,
            self.s,
        )

    def inverse(self) -> "_QuadExt":
        norm = self.a * self.a - self.b * self.b * self.s
        if norm == 0:
            raise ZeroDivisionError("inverting zero in the quadratic field")
        return _QuadExt(self.a / norm, -self.b / norm, self.s)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_rational(self) -> Fraction:
        if self.b != 0:
            raise ValidationError(f"{self} is not rational")
        return self.a

    def __repr__(self) -> str:
        return f"({self.a} + {self.b}*sqrt({self.s}))"


def gacs_tree_construction(
    T: PatternGraph, mode: str = "auto"
) -> WeightedBlowupGraph:
    """Transversal-free blow-up of a tree with every density equal to
    1 - 1/lambda^2.

    Cluster A_i holds one slot per neighbor j of i (in sorted neighbor
    order); the only missing cross pair per edge (i, j) is (v_ij, v_ji).
    Weights come from the principal eigenvector x: w_ij = x_j/(lambda x_i),
    computed by the rooted ratio recursion rho_v = 1/(lambda - sum of
    children rho), which stays well defined because lambda exceeds every
    proper subtree's spectral radius.
    """
    if not T.is_tree():
        raise NotATree("construction defined for trees")
    if T.n < 2:
        raise ValidationError("construction needs n >= 2")
    if mode not in ("auto", "exact", "float"):
        raise ValidationError(f"unknown mode {mode!r}")
    s_star = largest_matching_root_squared(T, Fraction(1, 10**24))
    s_exact = s_star.exact
    if mode == "exact" and s_exact is None:
        raise ValidationError(
            "lambda^2 is irrational for this tree; use float mode")
    use_exact = s_exact is not None and mode != "float"

    root = 1
    order = T.bfs_order(root)
    parent: dict[int, int] = {root: 0}
    for v in order:
        for u in T.adjacency[v]:
            if u not in parent:
                parent[u] = v

    if use_exact:
        s = s_exact
        r = _exact_sqrt(s)
        lam = _QuadExt(r, _ZERO, s) if r is not None else _QuadExt(_ZERO, _ONE, s)
        zero = _QuadExt(_ZERO, _ZERO, s)
        rho: dict[int, _QuadExt] = {}
        for v in reversed(order):
            if v == root:
                continue
            acc = zero
            for c in T.adjacency[v]:
                if parent.get(c) == v:
                    acc = acc + rho[c]
            rho[v] = (lam - acc).inverse()
        residual = lam
        for c in T.adjacency[root]:
            residual = residual - rho[c]
        if not residual.is_zero():
            raise ValidationError("eigenvector consistency check failed")

        def weight(i: int, j: int) -> Fraction:
            # w_ij = x_j / (lambda x_i)
            if parent.get(j) == i:
                val = rho[j] * lam.inverse()
            else:
                val = (rho[i] * lam).inverse()
            return val.as_rational()

        mode_out = "exact"
    else:
        lam_f = math.sqrt(
            s_exact if s_exact is not None
            else (s_star.lo + s_star.hi) / 2)
        rho_f: dict[int, float] = {}
        for v in reversed(order):
            if v == root:
                continue
            acc = sum(rho_f[c] for c in T.adjacency[v] if parent.get(c) == v)
            rho_f[v] = 1.0 / (lam_f - acc)
        residual_f = lam_f - sum(rho_f[c] for c in T.adjacency[root])
        if abs(residual_f) > 1e-7:
            raise ValidationError("eigenvector consistency check failed")

        def weight(i: int, j: int) -> float:
            if parent.get(j) == i:
                return rho_f[j] / lam_f
            return 1.0 / (rho_f[i] * lam_f)

        mode_out = "float"

    slot_of: dict[tuple[int, int], int] = {}
    weights: list[list] = []
    for i in T.vertices():
        cluster = []
        for k, j in enumerate(T.adjacency[i]):
            slot_of[(i, j)] = k
            cluster.append(weight(i, j))
        weights.append(cluster)

    cross: list[tuple[Slot, Slot]] = []
    for i, j in T.edges:
        for a in range(len(weights[i - 1])):
            for b in range(len(weights[j - 1])):
                if a == slot_of[(i, j)] and b == slot_of[(j, i)]:
                    continue
                cross.append(((i, a), (j, b)))

    B = WeightedBlowupGraph(T, weights, cross, mode_out)
    _assert_emission(B, _gacs_target(T, s_star, mode_out))
    if B.find_transversal() is not None:
        raise ValidationError("construction unexpectedly has a transversal")
    return B


def _gacs_target(
    T: PatternGraph, s_star: AlgebraicNumber, mode: str
) -> dict[Edge, Fraction | float]:
    if mode == "exact":
        d = _ONE - _ONE / s_star.exact
        return {e: d for e in T.edges}
    s_star.refine(Fraction(1, 10**15))
    d = 1.0 - 1.0 / float(s_star.midpoint())
    return {e: d for e in T.edges}


def _assert_emission(
    B: WeightedBlowupGraph, target: Mapping[Edge, Fraction | float]
) -> None:
    """Every emitted construction must meet its density targets.  Exact
    mode compares rationals; float mode allows 1e-9 slack."""
    for e, want in target.items():
        got = B.density(*e)
        if B.mode == "exact":
            if got < want:
                raise ValidationError(
                    f"density {got} on edge {e} below target {want}")
        elif got < want - FLOAT_TOL:
            raise ValidationError(
                f"density {got} on edge {e} below target {want} - 1e-9")


def star_decomposition_construct(
    H: PatternGraph,
    f: Sequence[int],
    gamma: Mapping[Edge, Fraction] | Sequence[Fraction],
    strict: bool = False,
) -> WeightedBlowupGraph | None:
    """Recursive transversal-free construction for densities that fail the
    monotone-path tree condition for the labeling f.

    Returns None (or raises PreconditionViolated when strict=True) if the
    lifted densities on the monotone-path tree already ensure the factor.
    Otherwise the result has every density >= gamma and no transversal;
    both facts are asserted before returning.

    The recursion processes vertices in reverse labeling order.  Removing
    u = f(k) transforms the ratio of a remaining edge e by dividing by
    gamma_{u a} for each endpoint a of e adjacent to u; ratios cap at 1
    (density floor 0), and a zero divisor caps the ratio at 1 outright
    (the rescale-by-zero step makes the higher-level density 1, so any
    target is met).  Building back up: each step adds a singleton cluster
    {w_k}, rescales each neighbor cluster's old weights by gamma and
    appends a fresh slot of weight 1 - gamma; w_k is joined to old slots
    only, the fresh slot to everything in adjacent clusters except w_k.
    """
    from .stars import monotone_path_tree  # local import to avoid a cycle
    from .tree_decision import decide_tree

    raw_values = gamma.values() if isinstance(gamma, Mapping) else gamma
    exact = not any(isinstance(v, float) for v in raw_values)
    dens = edge_assignment(H, gamma, low=_ZERO, high=_ONE, what="density") \
        if exact else _float_assignment(H, gamma)
    one = _ONE if exact else 1.0
    zero = _ZERO if exact else 0.0

    path_tree = monotone_path_tree(H, f)  # validates the labeling
    lifted = {te: Fraction(dens[he])
              for te, he in path_tree.edge_origin.items()}
    if decide_tree(path_tree.tree, lifted).ensured:
        if strict:
            raise PreconditionViolated(
                "monotone-path tree densities already ensure the factor")
        return None

    n = H.n
    labels = list(f)
    # Down pass: gamma targets per level k (graph induced on labels[:k]).
    level_gamma: list[dict[Edge, Fraction | float]] = [dict() for _ in range(n + 1)]
    level_gamma[n] = dict(dens)
    for k in range(n, 1, -1):
        u = labels[k - 1]
        placed = set(labels[: k - 1])
        prev: dict[Edge, Fraction | float] = {}
        for (i, j), g in level_gamma[k].items():
            if u in (i, j):
                continue
            divisor = one
            for endpoint in (i, j):
                if H.has_edge(u, endpoint):
                    key = (u, endpoint) if u < endpoint else (endpoint, u)
                    divisor = divisor * level_gamma[k][key]
            r = one - g
            if divisor == zero:
                r_new = one
            else:
                r_new = r / divisor
                if r_new > one:
                    r_new = one
            prev[(i, j)] = one - r_new
        assert set(prev) == {
            e for e in H.edges if e[0] in placed and e[1] in placed}
        level_gamma[k - 1] = prev

    # Up pass.
    weights: dict[int, list] = {labels[0]: [one]}
    cross: set[tuple[Slot, Slot]] = set()
    for k in range(2, n + 1):
        u = labels[k - 1]
        placed = set(labels[: k - 1])
        weights[u] = [one]
        w_k: Slot = (u, 0)
        neighbors = sorted(v for v in H.adjacency[u] if v in placed)
        old_counts = {v: len(weights[v]) for v in neighbors}
        for v in neighbors:
            key = (u, v) if u < v else (v, u)
            g = level_gamma[k][key]
            weights[v] = [w * g for w in weights[v]]
            weights[v].append(one - g)
        for v in neighbors:
            for a in range(old_counts[v]):
                cross.add(_normalize_pair(w_k, (v, a)))
            fresh: Slot = (v, old_counts[v])
            for c in H.adjacency[v]:
                if c not in placed and c != u:
                    continue
                for b in range(len(weights[c])):
                    if (c, b) == w_k:
                        continue
                    cross.add(_normalize_pair(fresh, (c, b)))

    cluster_list = [weights[i] for i in H.vertices()]
    B = WeightedBlowupGraph(
        H, cluster_list, cross, "exact" if exact else "float")
    B = B.prune_zero_weights()
    _assert_emission(B, dens)
    if B.find_transversal() is not None:
        raise ValidationError("construction unexpectedly has a transversal")
    return B


def _float_assignment(
    H: PatternGraph, gamma: Mapping[Edge, float] | Sequence[float]
) -> dict[Edge, float]:
    if isinstance(gamma, Mapping):
        vals = {tuple(sorted(e)): float(v) for e, v in gamma.items()}
        if set(vals) != set(H.edges):
            raise ValidationError("assignment does not match the edge set")
    else:
        items = list(gamma)
        if len(items) != len(H.edges):
            raise ValidationError(
                f"expected {len(H.edges)} densities, got {len(items)}")
        vals = {e: float(v) for e, v in zip(H.edges, items)}
    for e, v in vals.items():
        if not (0.0 <= v <= 1.0):
            raise ValidationError(f"density {v} on edge {e} out of [0, 1]")
    return vals
