"""Pattern graphs and labelings.

A pattern graph H is a finite simple graph on vertices 1..n.  Edges are
stored as sorted pairs (i, j) with i < j, and the edge tuple itself is
kept sorted, so the edge order is canonical: density lists given
positionally always refer to this order.

The text format is a single declaration ``n; i-j i-j ...`` where n is the
vertex count and each token i-j is an edge.  Whitespace (including
newlines) separates tokens, so multi-line files are fine.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .errors import (
    DisconnectedGraph,
    ParseError,
    ValidationError,
    VertexNotInGraph,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class PatternGraph:
    """Simple graph on vertices 1..n with a canonical sorted edge list."""

    n: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"vertex count must be >= 1, got {self.n}")
        seen: set[Edge] = set()
        canon: list[Edge] = []
        for e in self.edges:
            try:
                i, j = e
            except (TypeError, ValueError):
                raise ValidationError(f"edge {e!r} is not a pair") from None
            if i == j:
                raise ValidationError(f"loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValidationError(
                    f"edge ({i},{j}) outside vertex range 1..{self.n}")
            a, b = (i, j) if i < j else (j, i)
            if (a, b) in seen:
                raise ValidationError(f"duplicate edge ({a},{b})")
            seen.add((a, b))
            canon.append((a, b))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return {v: tuple(sorted(nb)) for v, nb in adj.items()}

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        if self.n == 0:
            return 0
        return max(len(nb) for nb in self.adjacency.values())

    def has_edge(self, i: int, j: int) -> bool:
        self._check_vertex(i)
        self._check_vertex(j)
        a, b = (i, j) if i < j else (j, i)
        return (a, b) in self.edge_index

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def bfs_order(self, start: int = 1) -> list[int]:
        """Vertices in BFS order from start, then any unreached ones in
        label order (so the result always covers the whole graph)."""
        self._check_vertex(start)
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    order.append(u)
                    queue.append(u)
        for v in self.vertices():
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
                while queue:
                    w = queue.popleft()
                    for u in self.adjacency[w]:
                        if u not in seen:
                            seen.add(u)
                            order.append(u)
                            queue.append(u)
        return order

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 1 <= v <= self.n):
            raise VertexNotInGraph(f"vertex {v!r} not in 1..{self.n}")

    def to_text(self) -> str:
        body = " ".join(f"{i}-{j}" for i, j in self.edges)
        return f"{self.n}; {body}".rstrip()


def parse_graph(text: str) -> PatternGraph:
    """Parse the ``n; i-j i-j ...`` format.

    Raises ParseError for malformed tokens (with line numbers) and
    ValidationError for loops, duplicates, and out-of-range labels.
    """
    stripped = text.strip()
    if ";" not in stripped:
        raise ParseError("missing ';' after the vertex count (line 1)")
    head, _, tail = stripped.partition(";")
    head = head.strip()
    if not head.isdigit():
        raise ParseError(f"vertex count {head!r} is not a positive integer (line 1)")
    n = int(head)
    if n < 1:
        raise ValidationError(f"vertex count must be >= 1, got {n}")
    edges: list[Edge] = []
    # Track line numbers relative to the original text for error messages.
    offset = text.index(";") + 1
    for lineno, line in enumerate(text[offset:].splitlines() or [""], start=1):
        for tok in line.split():
            i_str, sep, j_str = tok.partition("-")
            if not sep or not i_str.isdigit() or not j_str.isdigit():
                raise ParseError(f"bad edge token {tok!r} (line {lineno})")
            i, j = int(i_str), int(j_str)
            if i == j:
                raise ValidationError(f"loop {tok!r} (line {lineno})")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValidationError(
                    f"edge {tok!r} outside vertex range 1..{n} (line {lineno})")
            a, b = (i, j) if i < j else (j, i)
            if (a, b) in set(edges):
                raise ValidationError(f"duplicate edge {tok!r} (line {lineno})")
            edges.append((a, b))
    return PatternGraph(n, tuple(edges))


def proper_labelings(H: PatternGraph) -> Iterator[tuple[int, ...]]:
    """Yield all proper labelings f = (f(1), ..., f(n)) lazily in
    lexicographic order.

    A labeling is proper when it is a bijection onto V(H) and every f(k),
    k >= 2, is adjacent to some earlier f(j).  Only connected graphs have
    one; DisconnectedGraph otherwise.
    """
    if not H.is_connected():
        raise DisconnectedGraph("proper labelings exist only for connected graphs")

    def extend(prefix: list[int], used: set[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == H.n:
            yield tuple(prefix)
            return
        if prefix:
            frontier = sorted(
                {u for v in prefix for u in H.adjacency[v]} - used)
        else:
            frontier = list(H.vertices())
        for v in frontier:
            prefix.append(v)
            used.add(v)
            yield from extend(prefix, used)
            used.discard(v)
            prefix.pop()

    return extend([], set())


def is_proper_labeling(H: PatternGraph, f: Sequence[int]) -> bool:
    if sorted(f) != list(H.vertices()):
        return False
    for k in range(1, len(f)):
        if not any(f[j] in H.adjacency[f[k]] for j in range(k)):
            return False
    return True


def is_subgraph(
    H1: PatternGraph,
    H2: PatternGraph,
    embedding: Mapping[int, int] | Sequence[int],
) -> bool:
    """True iff the embedding is injective and maps every H1 edge to an
    H2 edge.  Labels outside either graph raise VertexNotInGraph."""
    if isinstance(embedding, Mapping):
        phi = dict(embedding)
    else:
        phi = {v: embedding[v - 1] for v in range(1, min(len(embedding), H1.n) + 1)}
    for v in H1.vertices():
        if v not in phi:
            raise VertexNotInGraph(f"embedding missing vertex {v}")
        img = phi[v]
        if not (isinstance(img, int) and 1 <= img <= H2.n):
            raise VertexNotInGraph(f"image {img!r} of vertex {v} not in 1..{H2.n}")
    images = [phi[v] for v in H1.vertices()]
    if len(set(images)) != len(images):
        return False
    return all(H2.has_edge(phi[i], phi[j]) for i, j in H1.edges)


# Standard families, used throughout the tests and the CLI self-test.

def path_graph(n: int) -> PatternGraph:
    return PatternGraph(n, tuple((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> PatternGraph:
    if n < 3:
        raise ValidationError("cycles need n >= 3")
    return PatternGraph(n, tuple((i, i + 1) for i in range(1, n)) + ((1, n),))


def star_graph(n: int) -> PatternGraph:
    """S_n: n vertices, center 1, leaves 2..n."""
    if n < 2:
        raise ValidationError("stars need n >= 2")
    return PatternGraph(n, tuple((1, j) for j in range(2, n + 1)))


def complete_graph(n: int) -> PatternGraph:
    return PatternGraph(
        n, tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1)))


def complete_bipartite(n: int, m: int) -> PatternGraph:
    """K_{n,m} with parts 1..n and n+1..n+m."""
    if n < 1 or m < 1:
        raise ValidationError("both parts must be nonempty")
    return PatternGraph(
        n + m, tuple((i, n + j) for i in range(1, n + 1) for j in range(1, m + 1)))


def bow_tie_graph() -> PatternGraph:
    """Two triangles sharing vertex 1: edges 12 13 14 15 23 45."""
    return PatternGraph(5, ((1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5)))
