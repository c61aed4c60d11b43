"""Simple undirected graphs on vertices ``0..n-1`` and the primitives the
lemma machinery is built from: density, peeling, contraction, induced
subgraphs, and the plain-text graph format.

Densities are :class:`fractions.Fraction` values so that threshold
comparisons are exact.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, NamedTuple

from mdl.errors import DomainError

__all__ = [
    "Graph",
    "Subgraph",
    "Contraction",
    "as_fraction",
    "density",
    "peel_to_min_degree",
    "contract_edges",
    "induced",
    "delete_vertices",
    "parse_graph",
    "format_graph",
    "load_graph",
    "save_graph",
]


def as_fraction(x) -> Fraction:
    """Exact rational view of an int, Fraction, float or ``"p/q"`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph with vertex set ``range(n)``.

    >>> g = Graph(3, [(0, 1), (1, 2)])
    >>> g.num_edges, g.degree(1), sorted(g.neighbors(1))
    (2, 2, [0, 2])
    """

    __slots__ = ("_n", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"vertex count must be a nonnegative integer, got {n!r}")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if v in adj[u]:
                raise DomainError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self._n = n
        self._adj = tuple(frozenset(a) for a in adj)
        self._m = m

    @classmethod
    def from_edge_set(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from edges that may repeat (in either orientation); loops are dropped."""
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return cls._from_adjacency(adj)

    @classmethod
    def _from_adjacency(cls, adj) -> "Graph":
        # trusted constructor: adj must already be symmetric and loop-free
        g = cls.__new__(cls)
        g._n = len(adj)
        g._adj = tuple(frozenset(a) for a in adj)
        g._m = sum(len(a) for a in g._adj) // 2
        return g

    @property
    def n(self) -> int:
        return self._n

    num_vertices = n

    @property
    def num_edges(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def min_degree(self) -> int:
        if self._n == 0:
            raise DomainError("minimum degree of the empty graph is undefined")
        return min(len(a) for a in self._adj)

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self._n and v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return [(u, v) for u in range(self._n) for v in sorted(self._adj[u]) if u < v]

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def density(self) -> Fraction:
        return density(self)

    def is_connected_subset(self, vertices: Iterable[int]) -> bool:
        """Whether ``G[vertices]`` is connected (the empty set is not)."""
        vs = set(vertices)
        if not vs:
            return False
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y in vs and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(vs)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self):
        return hash((self._n, self._adj))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self._m})"


class Subgraph(NamedTuple):
    """A subgraph together with ``vertices[i]`` = parent vertex of new vertex ``i``."""

    graph: Graph
    vertices: tuple[int, ...]


class Contraction(NamedTuple):
    """Result of contracting an edge set.

    ``classes[i]`` is the set of parent vertices merged into vertex ``i``.
    ``loss`` is ``e(G) - e(G/S)``.
    """

    graph: Graph
    loss: int
    classes: tuple[frozenset[int], ...]


def density(G: Graph) -> Fraction:
    """Exact ``e(G)/v(G)``."""
    if G.n == 0:
        raise DomainError("density of a graph with no vertices is undefined")
    return Fraction(G.num_edges, G.n)


def induced(G: Graph, A: Iterable[int]) -> Subgraph:
    """``G[A]``; new vertex ``i`` is the ``i``-th smallest element of ``A``."""
    verts = sorted(set(A))
    if not verts:
        raise DomainError("induced subgraph on an empty vertex set")
    if verts[0] < 0 or verts[-1] >= G.n:
        raise DomainError("vertex set is not contained in V(G)")
    index = {v: i for i, v in enumerate(verts)}
    adj = [[index[w] for w in G.neighbors(v) if w in index] for v in verts]
    return Subgraph(Graph._from_adjacency(adj), tuple(verts))


def delete_vertices(G: Graph, X: Iterable[int]) -> Subgraph:
    """``G - X``."""
    drop = set(X)
    return induced(G, [v for v in range(G.n) if v not in drop])


def peel_to_min_degree(G: Graph, threshold=None) -> Subgraph:
    """Repeatedly delete vertices of degree at most ``threshold``.

    ``threshold`` defaults to ``d(G)``. Deleting a vertex of degree at most
    the threshold never pushes the density below it, so the result is
    nonempty whenever ``d(G) >= threshold > 0``, has minimum degree strictly
    above the threshold, and has density at least the threshold. Vertices
    are deleted in ascending index order, sweep by sweep.
    """
    if G.n == 0 or G.num_edges == 0:
        raise DomainError("peeling needs a graph with at least one edge")
    t = density(G) if threshold is None else as_fraction(threshold)
    if t > density(G):
        raise DomainError(f"threshold {t} exceeds the density {density(G)}")
    deg = G.degrees()
    alive = [True] * G.n
    queue = sorted(v for v in range(G.n) if deg[v] <= t)
    queued = set(queue)
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        alive[v] = False
        for w in G.neighbors(v):
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= t and w not in queued:
                    queued.add(w)
                    queue.append(w)
    keep = [v for v in range(G.n) if alive[v]]
    if not keep:
        # unreachable when t <= d(G) and e(G) >= 1; guard against misuse
        raise DomainError("peeling removed every vertex")
    return induced(G, keep)


def contract_edges(G: Graph, S: Iterable[tuple[int, int]]) -> Contraction:
    """Contract every edge of ``S`` and simplify (merge parallels, drop loops)."""
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in S:
        u, v = e
        if not G.has_edge(u, v):
            raise DomainError(f"({u}, {v}) is not an edge of the graph")
        ru, rv = find(u), find(v)
        if ru != rv:
            if rv < ru:
                ru, rv = rv, ru
            parent[rv] = ru
    roots = {}
    members: list[list[int]] = []
    label = [0] * G.n
    for v in range(G.n):
        r = find(v)
        if r not in roots:
            roots[r] = len(members)
            members.append([])
        label[v] = roots[r]
        members[roots[r]].append(v)
    adj: list[set[int]] = [set() for _ in members]
    for u, v in G.edges():
        a, b = label[u], label[v]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    H = Graph._from_adjacency(adj)
    return Contraction(H, G.num_edges - H.num_edges, tuple(frozenset(c) for c in members))


# -- text format ---------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse ``p <n> <m>`` followed by ``m`` lines ``e <u> <v>``.

    Blank lines and lines starting with ``c`` are ignored.
    """
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise DomainError(f"line {lineno}: non-integer field") from None
        if parts[0] == "p":
            if n is not None or len(parts) != 3:
                raise DomainError(f"line {lineno}: malformed or repeated header")
            n, m = nums
        elif parts[0] == "e":
            if n is None:
                raise DomainError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise DomainError(f"line {lineno}: malformed edge line")
            edges.append((nums[0], nums[1]))
        else:
            raise DomainError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise DomainError("missing 'p <n> <m>' header")
    if len(edges) != m:
        raise DomainError(f"header announces {m} edges but {len(edges)} were given")
    return Graph(n, edges)


def format_graph(G: Graph) -> str:
    lines = [f"p {G.n} {G.num_edges}"]
    lines.extend(f"e {u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def save_graph(G: Graph, path) -> None:
    Path(path).write_text(format_graph(G))
