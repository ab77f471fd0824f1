"""Monotone-path trees, star-decomposition lower bounds, the bipartite
closed form, and the reconstructed bow-tie extremal construction.

For a proper labeling f of a connected pattern H, the monotone-path tree
T_f(H) has one node per path f(i_1) f(i_2) ... f(i_k) with i_1 = 1 and
strictly increasing positions and consecutive vertices adjacent in H; a
path's parent is the path minus its last vertex.  Densities lift from H:
the edge into node P carries the density of the H-edge between P's last
two vertices.

Every proper labeling yields the necessary condition that the lifted
densities must ensure T_f(H); the best such condition over all labelings
is the star lower bound max_f (1 - 1/lambda(T_f)^2) on the critical
density of H.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .blowup import WeightedBlowupGraph
from .errors import ImproperLabeling, SizeLimit, ValidationError
from .graphs import (
    Edge,
    PatternGraph,
    bow_tie_graph,
    complete_bipartite,
    is_proper_labeling,
    proper_labelings,
)
from .polynomials import (
    AlgebraicNumber,
    cauchy_root_bound,
    largest_matching_root_squared,
    matching_even_part,
    square_free_part,
    sturm_chain,
    sturm_count_open,
)
from .tree_decision import CriticalDensity, decide_tree, edge_assignment

NODE_CAP = 10**5
LABELING_CAP = 10**5

PASSES = "PassesThisLabeling"
FAILS = "FailsThisLabeling"

_ONE = Fraction(1)
_ZERO = Fraction(0)


@dataclass(frozen=True)
class MonotonePathTree:
    """T_f(H) with its node legend and per-edge provenance."""

    tree: PatternGraph
    legend: dict[int, tuple[int, ...]]       # tree node -> path of H-vertices
    edge_origin: dict[Edge, Edge]            # tree edge -> underlying H-edge
    weights: dict[Edge, Fraction] | None     # lifted densities when supplied


def monotone_path_tree(
    H: PatternGraph,
    f: Sequence[int],
    weights: Mapping[Edge, Fraction] | Sequence[Fraction] | None = None,
) -> MonotonePathTree:
    """Enumerate monotone paths by depth-first extension (children in
    increasing position of the added vertex).  Node 1 is the root path
    (f(1),); parents precede children in the numbering."""
    f = tuple(f)
    if not is_proper_labeling(H, f):
        raise ImproperLabeling(f"{f} is not a proper labeling")
    lifted = None
    if weights is not None:
        lifted = edge_assignment(H, weights, what="weight")
    pos = {v: k for k, v in enumerate(f, start=1)}

    legend: dict[int, tuple[int, ...]] = {}
    edges: list[Edge] = []
    edge_origin: dict[Edge, Edge] = {}
    tree_weights: dict[Edge, Fraction] = {}

    def expand(path: tuple[int, ...], node: int, counter: list[int]) -> None:
        last = path[-1]
        for w in sorted(H.adjacency[last], key=pos.__getitem__):
            if pos[w] <= pos[last]:
                continue
            counter[0] += 1
            if counter[0] > NODE_CAP:
                raise SizeLimit(f"monotone-path tree exceeds {NODE_CAP} nodes")
            child = counter[0]
            child_path = path + (w,)
            legend[child] = child_path
            e = (node, child)
            edges.append(e)
            he = (last, w) if last < w else (w, last)
            edge_origin[e] = he
            if lifted is not None:
                tree_weights[e] = lifted[he]
            expand(child_path, child, counter)

    legend[1] = (f[0],)
    counter = [1]
    expand((f[0],), 1, counter)
    tree = PatternGraph(counter[0], tuple(edges))
    return MonotonePathTree(
        tree, legend, edge_origin, tree_weights if lifted is not None else None)


def _rooted_shape(adj: Mapping[int, Sequence[int]], root: int, parent: int) -> str:
    subs = sorted(
        _rooted_shape(adj, c, root) for c in adj[root] if c != parent)
    return "(" + "".join(subs) + ")"


def tree_shape_key(T: PatternGraph) -> str:
    """Canonical encoding of the unlabeled shape (AHU from the centers),
    so spectral data can be memoized across isomorphic trees."""
    adj = T.adjacency
    # Peel leaves to find the 1- or 2-vertex center.
    degree = {v: len(adj[v]) for v in T.vertices()}
    layer = [v for v in T.vertices() if degree[v] <= 1]
    remaining = T.n
    while remaining > 2:
        nxt = []
        for v in layer:
            degree[v] = 0
            for u in adj[v]:
                if degree[u] > 1:
                    degree[u] -= 1
                    if degree[u] == 1:
                        nxt.append(u)
        remaining -= len(layer)
        layer = nxt
    centers = layer if remaining else list(T.vertices())[:1]
    return min(_rooted_shape(adj, c, 0) for c in centers)


@dataclass
class StarBound:
    """max over proper labelings of the lifted-tree critical density."""

    density: CriticalDensity
    best_labeling: tuple[int, ...]
    labelings_examined: int
    heuristic: bool
    # shape of T_f -> (example labeling, labeling count, critical density);
    # automorphic labelings collapse here, which is reporting-only data.
    shape_table: dict[str, tuple[tuple[int, ...], int, CriticalDensity]]

    def interval(self, tol: Fraction | float = Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
        return self.density.interval(tol)


def star_lower_bound(
    H: PatternGraph,
    tol: Fraction | float = Fraction(1, 10**9),
    labeling_cap: int = LABELING_CAP,
) -> StarBound:
    """Maximize 1 - 1/lambda(T_f(H))^2 over proper labelings.

    lambda depends only on the shape of T_f, so spectra are memoized by
    canonical shape; every labeling is still enumerated (up to the cap;
    past it the lexicographic prefix is scored and the result is flagged
    heuristic, i.e. still a valid lower bound but maybe not the max).
    Ties keep the lexicographically first labeling.
    """
    if H.n == 1:
        zero = CriticalDensity.zero()
        return StarBound(zero, (1,), 1, False, {"()": ((1,), 1, zero)})
    spectra: dict[str, AlgebraicNumber] = {}
    table: dict[str, tuple[tuple[int, ...], int, CriticalDensity]] = {}
    best_s: AlgebraicNumber | None = None
    best_f: tuple[int, ...] | None = None
    examined = 0
    heuristic = False
    for f in proper_labelings(H):
        if examined >= labeling_cap:
            heuristic = True
            break
        examined += 1
        mpt = monotone_path_tree(H, f)
        shape = tree_shape_key(mpt.tree)
        if shape not in spectra:
            spectra[shape] = largest_matching_root_squared(mpt.tree)
            table[shape] = (f, 1, CriticalDensity(spectra[shape]))
        else:
            example, count, dc = table[shape]
            table[shape] = (example, count + 1, dc)
        s = spectra[shape]
        if best_s is None or s.compare(best_s) > 0:
            best_s, best_f = s, f
    assert best_s is not None and best_f is not None
    bound = StarBound(CriticalDensity(best_s), best_f, examined, heuristic, table)
    bound.interval(tol)
    return bound


def star_necessary_condition(
    H: PatternGraph,
    gamma: Mapping[Edge, Fraction] | Sequence[Fraction],
    f: Sequence[int],
) -> str:
    """One labeling's necessary condition: the lifted densities must
    ensure the monotone-path tree.  FailsThisLabeling certifies that a
    transversal-free construction with densities >= gamma exists."""
    mpt = monotone_path_tree(H, f, weights=gamma)
    assert mpt.weights is not None
    verdict = decide_tree(mpt.tree, mpt.weights)
    return PASSES if verdict.ensured else FAILS


def bipartite_star_density(n: int, m: int) -> Fraction:
    """d_s(n, m) = 1 - 1/(n+m-1), cross-checked against the recursion
    d_s(n, m) = 1/(2 - d_s(n, m-1)) anchored at d_s(n, 1) = 1 - 1/n."""
    if n < 1 or m < 1:
        raise ValidationError("both sides must be >= 1")
    closed = _ONE - Fraction(1, n + m - 1)
    d = _ONE - Fraction(1, n)
    for _ in range(m - 1):
        d = _ONE / (2 - d)
    if d != closed:
        raise ValidationError("closed form disagrees with the recursion")
    return closed


def verify_bt1(n: int, m: int, tol: Fraction | float = Fraction(1, 10**9),
               cap: int = 8) -> bool:
    """Check, for every proper labeling f of K_{n,m}, that the
    monotone-path tree's spectral radius squared is exactly n + m - 1.

    The check is exact (the even part of the matching polynomial vanishes
    at n+m-1 and has no larger root), which implies any positive tol."""
    if Fraction(tol) <= 0:
        raise ValidationError("tolerance must be positive")
    if n + m > cap:
        raise SizeLimit(f"n + m capped at {cap}")
    K = complete_bipartite(n, m)
    target = Fraction(n + m - 1)
    seen: set[str] = set()
    for f in proper_labelings(K):
        mpt = monotone_path_tree(K, f)
        shape = tree_shape_key(mpt.tree)
        if shape in seen:
            continue
        seen.add(shape)
        q = square_free_part(matching_even_part(mpt.tree))
        if q(target) != 0:
            return False
        deflated = q.deflate_root(target)
        if deflated.degree >= 1:
            bound = cauchy_root_bound(deflated)
            if bound > target and sturm_count_open(
                    sturm_chain(deflated), target, bound) > 0:
                return False
    return True


BOW_TIE_CENTER_DENSITY = Fraction(17, 20)
BOW_TIE_OUTER_DENSITY = Fraction(51, 100)


def bow_tie_densities() -> dict[Edge, Fraction]:
    H = bow_tie_graph()
    return {
        e: BOW_TIE_OUTER_DENSITY if e in ((2, 3), (4, 5))
        else BOW_TIE_CENTER_DENSITY
        for e in H.edges
    }


def bow_tie_reconstruction() -> WeightedBlowupGraph:
    """The extremal bow-tie blow-up: center cluster {c1, c2} with weights
    (1/2, 1/2), outer clusters {a_i, b_i} with weights (3/10, 7/10);
    missing pairs c1-a2, c1-a3, c2-a4, c2-a5, b2-b3, b4-b5.

    Realized densities are exactly 17/20 on the four center edges and
    51/100 on the two outer ones, and no transversal exists: choosing c1
    forces b2 and b3 whose pair is missing, symmetrically for c2.
    """
    H = bow_tie_graph()
    half, small, big = Fraction(1, 2), Fraction(3, 10), Fraction(7, 10)
    weights = [[half, half], [small, big], [small, big], [small, big], [small, big]]
    missing = {
        ((1, 0), (2, 0)), ((1, 0), (3, 0)),
        ((1, 1), (4, 0)), ((1, 1), (5, 0)),
        ((2, 1), (3, 1)), ((4, 1), (5, 1)),
    }
    cross = []
    for i, j in H.edges:
        for a in range(2):
            for b in range(2):
                if ((i, a), (j, b)) in missing:
                    continue
                cross.append(((i, a), (j, b)))
    B = WeightedBlowupGraph(H, weights, cross, "exact")
    dens = B.densities()
    for e, want in bow_tie_densities().items():
        if dens[e] != want:
            raise ValidationError(
                f"bow-tie density on {e} is {dens[e]}, expected {want}")
    if B.find_transversal() is not None:
        raise ValidationError("bow-tie reconstruction has a transversal")
    return B


def star_decomposition_cannot_match_bowtie() -> bool:
    """True iff every proper labeling of the bow-tie passes the star
    necessary condition at the reconstruction's densities, i.e. no star
    decomposition reaches them.  Also confirms the construction routine
    refuses each labeling (precondition holds nowhere)."""
    from .blowup import star_decomposition_construct

    H = bow_tie_graph()
    gamma = bow_tie_densities()
    for f in proper_labelings(H):
        if star_necessary_condition(H, gamma, f) != PASSES:
            return False
        if star_decomposition_construct(H, f, gamma) is not None:
            return False
    return True
