"""Minor models: disjoint connected branch sets realizing a pattern graph.

A :class:`MinorModel` stores the branch sets ``X_0..X_{h-1}`` and the pattern
edges ``ij`` it claims to realize. Models compose: a model of ``H`` in
``G'`` followed by a model of ``G'`` in ``G`` is a model of ``H`` in ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from mdl.errors import DomainError, ResourceLimitError
from mdl.graph import Contraction, Graph, Subgraph

__all__ = [
    "MinorModel",
    "ModelCheck",
    "verify_model",
    "contract_model",
    "compose_models",
    "identity_model",
    "model_from_contraction",
    "model_from_subgraph",
    "realized_model",
    "clique_minor_oracle",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class MinorModel:
    """Branch sets plus the pattern edges they are meant to realize.

    ``width`` is recorded at construction (it defaults to the largest branch
    set) and is itself checked by :func:`verify_model`.
    """

    branch_sets: tuple[frozenset[int], ...]
    pattern_edges: frozenset[tuple[int, int]]
    width: int = field(default=-1)

    def __post_init__(self):
        object.__setattr__(self, "branch_sets", tuple(frozenset(X) for X in self.branch_sets))
        object.__setattr__(
            self,
            "pattern_edges",
            frozenset((min(i, j), max(i, j)) for i, j in self.pattern_edges),
        )
        if self.width < 0:
            object.__setattr__(self, "width", max((len(X) for X in self.branch_sets), default=0))

    @property
    def h(self) -> int:
        return len(self.branch_sets)

    def vertex_set(self) -> frozenset[int]:
        return frozenset().union(*self.branch_sets) if self.branch_sets else frozenset()

    def is_k_bounded(self, k: int) -> bool:
        return self.width <= k


@dataclass(frozen=True)
class ModelCheck:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def verify_model(G: Graph, M: MinorModel) -> ModelCheck:
    """Check disjointness, connectivity, realized pattern edges and width.

    Never raises; a malformed index is reported as a failure.
    """
    owner: dict[int, int] = {}
    for i, X in enumerate(M.branch_sets):
        if not X:
            return ModelCheck(False, "empty branch set", (i,))
        for v in X:
            if not isinstance(v, int) or not 0 <= v < G.n:
                return ModelCheck(False, "vertex outside host graph", (i, v))
            if v in owner:
                return ModelCheck(False, "branch sets not disjoint", (owner[v], i, v))
            owner[v] = i
    for i, X in enumerate(M.branch_sets):
        if not G.is_connected_subset(X):
            return ModelCheck(False, "branch set not connected", (i,))
    for i, j in sorted(M.pattern_edges):
        if not (0 <= i < M.h and 0 <= j < M.h) or i == j:
            return ModelCheck(False, "pattern edge index out of range", (i, j))
        Xi, Xj = M.branch_sets[i], M.branch_sets[j]
        if len(Xi) > len(Xj):
            Xi, Xj = Xj, Xi
        if not any(G.neighbors(x) & Xj for x in Xi):
            return ModelCheck(False, "pattern edge not realized", (i, j))
    actual = max((len(X) for X in M.branch_sets), default=0)
    if M.width != actual:
        return ModelCheck(False, "recorded width is wrong", (M.width, actual))
    return ModelCheck(True)


def _realized_pairs(G: Graph, branch_sets: Sequence[frozenset[int]]) -> set[tuple[int, int]]:
    owner = {}
    for i, X in enumerate(branch_sets):
        for v in X:
            owner[v] = i
    pairs = set()
    for i, X in enumerate(branch_sets):
        for x in X:
            for y in G.neighbors(x):
                j = owner.get(y)
                if j is not None and j != i:
                    pairs.add((min(i, j), max(i, j)))
    return pairs


def contract_model(G: Graph, M: MinorModel) -> Graph:
    """The graph on ``h`` vertices with ``ij`` an edge iff some host edge joins ``X_i`` and ``X_j``."""
    check = verify_model(G, M)
    if not check:
        raise DomainError(f"invalid model: {check.reason} {check.witness}")
    return Graph(M.h, sorted(_realized_pairs(G, M.branch_sets)))


def realized_model(G: Graph, branch_sets: Iterable[Iterable[int]]) -> MinorModel:
    """Model whose pattern is every pair the branch sets actually realize."""
    bs = tuple(frozenset(X) for X in branch_sets)
    return MinorModel(bs, frozenset(_realized_pairs(G, bs)))


def identity_model(G: Graph) -> MinorModel:
    return MinorModel(tuple(frozenset((v,)) for v in range(G.n)), G.edge_set())


def model_from_contraction(c: Contraction) -> MinorModel:
    """Model of ``G/S`` in ``G`` given by the contraction classes."""
    return MinorModel(c.classes, c.graph.edge_set())


def model_from_subgraph(sub: Subgraph) -> MinorModel:
    """Model of a subgraph in its parent (singleton branch sets)."""
    return MinorModel(tuple(frozenset((v,)) for v in sub.vertices), sub.graph.edge_set())


def compose_models(outer: MinorModel, inner: MinorModel) -> MinorModel:
    """Pull ``outer`` (a model in ``G'``) back to ``G`` through ``inner`` (a model of ``G'`` in ``G``).

    Each branch set of the result is the union of the inner branch sets of
    the outer set's vertices. Validity is preserved when ``inner`` realizes
    every edge of ``G'``; the width is at most ``outer.width * inner.width``.
    """
    sets = []
    for i, X in enumerate(outer.branch_sets):
        merged = set()
        for v in X:
            if not 0 <= v < inner.h:
                raise DomainError(f"origin map has no entry for vertex {v} (branch set {i})")
            merged |= inner.branch_sets[v]
        sets.append(frozenset(merged))
    return MinorModel(tuple(sets), outer.pattern_edges)


# -- exhaustive clique-minor search ----------------------------------------

DEFAULT_ORACLE_LIMIT = 12


def _connected_masks(G: Graph, max_size: int) -> list[int]:
    nbr = [0] * G.n
    for v in range(G.n):
        for w in G.neighbors(v):
            nbr[v] |= 1 << w
    out = []
    for mask in range(1, 1 << G.n):
        if bin(mask).count("1") > max_size:
            continue
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            grow = nbr[b.bit_length() - 1] & mask & ~seen
            seen |= grow
            frontier |= grow
        if seen == mask:
            out.append(mask)
    return out


def _members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return tuple(out)


def clique_minor_oracle(G: Graph, t: int, max_vertices: int = DEFAULT_ORACLE_LIMIT) -> Optional[MinorModel]:
    """Exhaustively search for a ``K_t`` model; ``None`` proves there is none.

    Candidate branch sets are all connected vertex subsets. Branch sets are
    chosen in increasing order of their smallest vertex, each candidate
    list is filtered incrementally (disjoint from, and adjacent to, every
    chosen set), and a level is abandoned when too few candidates or free
    vertices remain. The first model found is the lexicographically least
    one with branch sets listed by smallest vertex.
    """
    if t < 1:
        raise DomainError("t must be at least 1")
    if G.n > max_vertices:
        raise ResourceLimitError(
            f"exhaustive clique-minor search limited to {max_vertices} vertices, got {G.n}"
        )
    pattern = frozenset(combinations(range(t), 2))
    if t > G.n:
        return None
    nbr = [0] * G.n
    for v in range(G.n):
        for w in G.neighbors(v):
            nbr[v] |= 1 << w
    masks = _connected_masks(G, G.n - t + 1)
    boundary = {}
    for mask in masks:
        b = 0
        for v in _members(mask):
            b |= nbr[v]
        boundary[mask] = b & ~mask
    cands = sorted(masks, key=_members)
    full = (1 << G.n) - 1

    def search(chosen, used, pool):
        need = t - len(chosen)
        if need == 0:
            return list(chosen)
        if len(pool) < need or bin(full & ~used).count("1") < need:
            return None
        for idx, X in enumerate(pool):
            low = X & -X
            rest = [
                Y for Y in pool[idx + 1:]
                if not (Y & X) and (boundary[X] & Y) and (Y & -Y) > low
            ]
            found = search(chosen + [X], used | X, rest)
            if found is not None:
                return found
        return None

    found = search([], 0, cands)
    if found is None:
        return None
    return MinorModel(tuple(frozenset(_members(X)) for X in found), pattern)


# -- JSON --------------------------------------------------------------------


def model_to_json(M: MinorModel) -> dict:
    return {
        "h": M.h,
        "branch_sets": [sorted(X) for X in M.branch_sets],
        "pattern_edges": [list(e) for e in sorted(M.pattern_edges)],
        "width": M.width,
    }


def model_from_json(obj: dict) -> MinorModel:
    try:
        sets = tuple(frozenset(int(v) for v in X) for X in obj["branch_sets"])
        edges = frozenset((int(i), int(j)) for i, j in obj["pattern_edges"])
        width = int(obj["width"])
        h = int(obj["h"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed model JSON: {exc}") from exc
    if h != len(sets):
        raise DomainError(f"model JSON declares h={h} but lists {len(sets)} branch sets")
    return MinorModel(sets, edges, width)
