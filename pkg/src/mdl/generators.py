"""Deterministic graph families for tests and experiments.

Every random family takes an explicit ``seed`` and draws from its own
:class:`random.Random` instance, so a ``(family, params, seed)`` triple
always yields the same graph.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Any, Mapping

from mdl.errors import ConfigError
from mdl.graph import Graph

__all__ = [
    "gnp",
    "complete",
    "complete_bipartite",
    "cycle",
    "path",
    "grid",
    "petersen",
    "random_tree",
    "blowup",
    "polarity",
    "planted_clique",
    "disjoint_cliques",
    "line_segments",
    "relabel",
    "generate_graph",
    "FAMILIES",
]


def gnp(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """``K_{a,b}`` with left side ``0..a-1``."""
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ConfigError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def grid(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return Graph(rows * cols, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform random attachment tree on ``n`` vertices."""
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(v), v) for v in range(1, n)])


def blowup(base: Graph, t: int) -> Graph:
    """Replace every vertex by an independent set of size ``t``; edges become ``K_{t,t}``."""
    edges = []
    for u, v in base.edges():
        for i in range(t):
            for j in range(t):
                edges.append((u * t + i, v * t + j))
    return Graph(base.n * t, edges)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % f for f in range(2, int(q ** 0.5) + 1))


def polarity(q: int) -> Graph:
    """Orthogonal-polarity graph of the projective plane over ``Z_q``, ``q`` prime.

    ``q^2 + q + 1`` vertices, degrees ``q`` or ``q + 1``, and any two vertices
    have at most one common neighbour.
    """
    if not _is_prime(q):
        raise ConfigError(f"polarity graphs are built over prime fields, got q={q}")
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, a) for a in range(q)]
    pts.append((0, 0, 1))
    edges = []
    for i, j in combinations(range(len(pts)), 2):
        x, y = pts[i], pts[j]
        if (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) % q == 0:
            edges.append((i, j))
    return Graph(len(pts), edges)


def planted_clique(n: int, p: float, size: int, seed: int) -> Graph:
    """``G(n, p)`` with a clique on the first ``size`` vertices."""
    rng = random.Random(seed)
    edges = [
        (u, v) for u, v in combinations(range(n), 2) if (v < size) or rng.random() < p
    ]
    return Graph(n, edges)


def disjoint_cliques(count: int, size: int) -> Graph:
    edges = []
    for c in range(count):
        edges.extend((c * size + u, c * size + v) for u, v in combinations(range(size), 2))
    return Graph(count * size, edges)


def line_segments(q: int, r: int, per_line: int) -> Graph:
    """Incidences between points and short segments of the affine plane over ``Z_q``.

    Each of the ``q^2 + q`` lines contributes ``per_line`` disjoint segments of
    ``r`` points. Segments come first (``0..S-1``), points after. Any two
    segments share at most one point, so segments have no common neighbours
    beyond one.
    """
    if not _is_prime(q):
        raise ConfigError(f"q must be prime, got {q}")
    if r < 1 or per_line < 1 or r * per_line > q:
        raise ConfigError("need r, per_line >= 1 and r*per_line <= q")
    lines = [[(x, (a * x + b) % q) for x in range(q)] for a in range(q) for b in range(q)]
    lines += [[(c, y) for y in range(q)] for c in range(q)]
    segs = [line[j * r:(j + 1) * r] for line in lines for j in range(per_line)]
    S = len(segs)
    edges = [(i, S + x * q + y) for i, seg in enumerate(segs) for x, y in seg]
    return Graph(S + q * q, edges)


def relabel(G: Graph, seed: int, drop_fraction: float = 0.0) -> Graph:
    """Random vertex relabelling, optionally deleting a fraction of the edges."""
    rng = random.Random(seed)
    perm = list(range(G.n))
    rng.shuffle(perm)
    edges = [(perm[u], perm[v]) for u, v in G.edges() if rng.random() >= drop_fraction]
    return Graph(G.n, edges)


def _require(spec: Mapping[str, Any], *keys):
    missing = [k for k in keys if k not in spec]
    if missing:
        raise ConfigError(f"generator {spec.get('family')!r} needs {', '.join(missing)}")
    return [spec[k] for k in keys]


def generate_graph(spec: Mapping[str, Any]) -> Graph:
    """Build a graph from a ``{"family": ..., ...}`` mapping.

    >>> generate_graph({"family": "complete", "n": 5}).num_edges
    10
    """
    family = spec.get("family")
    try:
        if family == "gnp":
            n, p, seed = _require(spec, "n", "p", "seed")
            if not 0 <= float(p) <= 1:
                raise ConfigError("edge probability must lie in [0, 1]")
            return gnp(int(n), float(p), int(seed))
        if family == "complete":
            (n,) = _require(spec, "n")
            return complete(int(n))
        if family == "complete-bipartite":
            a, b = _require(spec, "a", "b")
            return complete_bipartite(int(a), int(b))
        if family == "grid":
            r, c = _require(spec, "rows", "cols")
            return grid(int(r), int(c))
        if family == "petersen":
            return petersen()
        if family == "tree":
            n, seed = _require(spec, "n", "seed")
            return random_tree(int(n), int(seed))
        if family == "blowup":
            (t,) = _require(spec, "t")
            base = generate_graph(spec["base"]) if "base" in spec else complete(int(spec.get("n", 4)))
            return blowup(base, int(t))
        if family == "cycle":
            return cycle(int(_require(spec, "n")[0]))
        if family == "path":
            return path(int(_require(spec, "n")[0]))
        if family == "polarity":
            (q,) = _require(spec, "q")
            G = polarity(int(q))
            if "seed" in spec:
                G = relabel(G, int(spec["seed"]), float(spec.get("drop", 0.0)))
            return G
        if family == "planted-clique":
            n, p, size, seed = _require(spec, "n", "p", "size", "seed")
            return planted_clique(int(n), float(p), int(size), int(seed))
        if family == "disjoint-cliques":
            count, size = _require(spec, "count", "size")
            return disjoint_cliques(int(count), int(size))
        if family == "line-segments":
            q, r, per = _require(spec, "q", "r", "per_line")
            G = line_segments(int(q), int(r), int(per))
            if "seed" in spec:
                G = relabel(G, int(spec["seed"]))
            return G
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad parameters for {family!r}: {exc}") from exc
    raise ConfigError(f"unknown graph family {family!r}; choose from {', '.join(FAMILIES)}")


FAMILIES = (
    "gnp",
    "complete",
    "complete-bipartite",
    "grid",
    "petersen",
    "tree",
    "blowup",
    "cycle",
    "path",
    "polarity",
    "planted-clique",
    "disjoint-cliques",
    "line-segments",
)
