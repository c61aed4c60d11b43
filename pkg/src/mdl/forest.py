"""Star forests whose contraction loses few edges.

A star of size ``k`` has ``k`` vertices: a center and ``k - 1`` leaves. A
forest ``F`` is ``(c, d)``-clean when ``e(G) - e(G/F) <= c*d*v(F)``.

:func:`build_clean_forest` runs a local search with two moves. *Add*: an
uncovered small vertex with many uncovered small neighbours becomes the
center of a new star. *Swap*: a star containing two vertices that each
see many uncovered small vertices is replaced by two new stars centered
at them. Every successful move adds ``k`` covered vertices, so the search
stops after at most ``v(G)/k`` moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from mdl.errors import DomainError, LemmaViolation
from mdl.graph import Graph, as_fraction, contract_edges, format_graph

__all__ = [
    "Star",
    "StarForest",
    "GrowthResult",
    "ForestResult",
    "ForestViolation",
    "edge_loss",
    "make_forest",
    "grow_star",
    "build_clean_forest",
    "stalled_star_witness",
    "forest_to_json",
]


@dataclass(frozen=True)
class Star:
    center: int
    leaves: tuple[int, ...] = ()

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.center,) + self.leaves

    @property
    def size(self) -> int:
        return 1 + len(self.leaves)

    def edges(self) -> list[tuple[int, int]]:
        return [(self.center, x) for x in self.leaves]


@dataclass(frozen=True)
class StarForest:
    """Vertex-disjoint stars plus the cached loss ``e(G) - e(G/E(F))``."""

    stars: tuple[Star, ...] = ()
    loss: int = 0

    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for s in self.stars for v in s.vertices)

    @property
    def num_vertices(self) -> int:
        return sum(s.size for s in self.stars)

    def edges(self) -> list[tuple[int, int]]:
        return [e for s in self.stars for e in s.edges()]

    def __len__(self):
        return len(self.stars)


def _check_disjoint(G: Graph, stars: Iterable[Star]) -> None:
    seen = set()
    for s in stars:
        for v in s.vertices:
            if v in seen:
                raise DomainError(f"stars overlap at vertex {v}")
            seen.add(v)
        for c, x in s.edges():
            if not G.has_edge(c, x):
                raise DomainError(f"star edge ({c}, {x}) is not an edge of the graph")


def edge_loss(G: Graph, F) -> int:
    """``e(G) - e(G/E(F))`` recomputed from scratch."""
    stars = F.stars if isinstance(F, StarForest) else tuple(F)
    _check_disjoint(G, stars)
    return contract_edges(G, [e for s in stars for e in s.edges()]).loss


def make_forest(G: Graph, stars: Iterable[Star]) -> StarForest:
    stars = tuple(stars)
    return StarForest(stars, edge_loss(G, stars))


@dataclass
class GrowthResult:
    """Outcome of growing one star; ``star`` is ``None`` on failure."""

    star: Optional[Star]
    loss: int
    partial: tuple[int, ...]
    reason: str = ""
    covered: frozenset[int] = frozenset()

    def __bool__(self):
        return self.star is not None


def grow_star(
    G: Graph,
    F0: StarForest,
    v: int,
    k: int,
    eps2,
    d,
    A: Iterable[int],
    exclude: Iterable[int] = (),
) -> GrowthResult:
    """Grow a ``k``-vertex star centered at ``v`` inside ``A - V(F0)``.

    Works in ``G' = G/(E(F0) + E(S))`` where ``S`` is the star so far. Each
    step attaches the neighbour ``u`` of ``v`` that is not an
    ``(eps2, d)``-mate of the contracted star vertex and whose attachment
    costs the fewest edges (``1 +`` common neighbours in ``G'``), ties to the
    smallest index. Fails when no such neighbour exists or when the total
    loss exceeds ``2*k*eps2*d``.
    """
    eps2, d = as_fraction(eps2), as_fraction(d)
    if k < 1:
        raise DomainError("star size must be at least 1")
    covered = F0.vertex_set()
    if v in covered:
        raise DomainError(f"center {v} already lies in the forest")
    allowed = set(A) - covered - set(exclude)
    if k == 1:
        return GrowthResult(Star(v), 0, (v,), covered=covered)
    cls = list(range(G.n))
    for i, s in enumerate(F0.stars):
        for x in s.vertices:
            cls[x] = G.n + i
    SID = -1
    cls[v] = SID
    nbr_S = {cls[w] for w in G.neighbors(v)}
    nbr_S.discard(SID)
    leaves: list[int] = []
    total = 0
    thr = eps2 * d
    candidates = sorted(u for u in G.neighbors(v) if u in allowed and u != v)
    for _ in range(k - 1):
        best = None
        for u in candidates:
            if cls[u] == SID:
                continue
            nu = {cls[w] for w in G.neighbors(u)}
            nu.discard(u)
            common = len(nu & nbr_S)
            if common >= thr:
                continue
            if best is None or common < best[0]:
                best = (common, u)
        if best is None:
            return GrowthResult(
                None, total, (v, *leaves), "no non-mate neighbour left", covered=covered
            )
        common, u = best
        total += 1 + common
        leaves.append(u)
        cls[u] = SID
        nbr_S.discard(u)
        nbr_S.update(cls[w] for w in G.neighbors(u))
        nbr_S.discard(SID)
    if total > 2 * k * eps2 * d:
        return GrowthResult(None, total, (v, *leaves), "star loss above 2*k*eps2*d", covered=covered)
    return GrowthResult(Star(v, tuple(leaves)), total, (v, *leaves), covered=covered)


@dataclass
class ForestResult:
    forest: StarForest
    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]
    A_prime: frozenset[int]
    rounds: int
    failures: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)


class ForestViolation(LemmaViolation):
    """The local search stopped while a required property still fails."""

    def __init__(self, message, result: ForestResult, instance=None):
        super().__init__(message, instance)
        self.result = result


def _count_into(G: Graph, v: int, S) -> int:
    return sum(1 for w in G.neighbors(v) if w in S)


def build_clean_forest(G: Graph, K, k: int, eps1, eps2, d, strict: bool = True) -> ForestResult:
    """Local search for a small, ``(4*eps2, d)``-clean forest of ``k``-vertex stars.

    On return (with ``strict``) the forest satisfies: every vertex is
    small, the cached loss is exact and at most ``4*eps2*d*v(F)``, each
    star has at most one vertex with ``>= 3*eps1*d`` neighbours in ``A'``,
    and each vertex of ``A'`` has at most ``2*eps1*d`` neighbours in
    ``A'``. Here ``A`` is the set of ``(K, d)``-small vertices,
    ``A' = A - V(F)`` and ``C`` collects the forest vertices with at least
    ``3*eps1*d`` neighbours in ``A'``.
    Raises :class:`ForestViolation` (carrying the failed growth attempts)
    when a property fails and no move can repair it.
    """
    K, eps1, eps2, d = (as_fraction(x) for x in (K, eps1, eps2, d))
    if k < 2:
        raise DomainError("stars need at least 2 vertices")
    c = 4 * eps2
    Kd = K * d
    A = frozenset(v for v in range(G.n) if G.degree(v) <= Kd)
    B = frozenset(range(G.n)) - A
    F = StarForest()
    rounds = 0
    failures: list[GrowthResult] = []
    add_thr, swap_thr = 2 * eps1 * d, 3 * eps1 * d

    while True:
        covered = F.vertex_set()
        Ap = A - covered
        moved = False
        failures = []
        for v in sorted(Ap):
            if _count_into(G, v, Ap) < add_thr:
                continue
            res = grow_star(G, F, v, k, eps2, d, A)
            if res and F.loss + res.loss <= c * d * (F.num_vertices + k):
                F = StarForest(F.stars + (res.star,), F.loss + res.loss)
                moved = True
                break
            failures.append(res)
        if not moved:
            for idx, T in enumerate(F.stars):
                hits = [u for u in sorted(T.vertices) if _count_into(G, u, Ap) >= swap_thr]
                if len(hits) < 2:
                    continue
                u1, u2 = hits[0], hits[1]
                F0 = make_forest(G, F.stars[:idx] + F.stars[idx + 1:])
                r1 = grow_star(G, F0, u1, k, eps2, d, A, exclude=(u2,))
                if not r1:
                    failures.append(r1)
                    continue
                F1 = StarForest(F0.stars + (r1.star,), F0.loss + r1.loss)
                r2 = grow_star(G, F1, u2, k, eps2, d, A)
                if not r2:
                    failures.append(r2)
                    continue
                F2 = StarForest(F1.stars + (r2.star,), F1.loss + r2.loss)
                if F2.loss <= c * d * F2.num_vertices:
                    F = F2
                    moved = True
                    break
        if not moved:
            break
        rounds += 1
        if rounds > G.n:
            raise LemmaViolation("local search exceeded v(G) rounds", {"graph": format_graph(G)})

    covered = F.vertex_set()
    Ap = A - covered
    Cset = frozenset(u for u in covered if _count_into(G, u, Ap) >= swap_thr)
    recomputed = edge_loss(G, F)
    checks = {
        "loss_exact": recomputed == F.loss,
        "small": covered <= A,
        "clean": F.loss <= c * d * F.num_vertices,
        "one_heavy_per_star": all(
            sum(1 for u in T.vertices if u in Cset) <= 1 for T in F.stars
        ),
        "sparse_remainder": all(_count_into(G, v, Ap) <= add_thr for v in Ap),
        "sizes": all(T.size == k for T in F.stars),
    }
    result = ForestResult(F, A, B, Cset, Ap, rounds, failures, checks)
    if not (checks["loss_exact"] and checks["small"] and checks["clean"] and checks["sizes"]):
        raise LemmaViolation(f"forest bookkeeping broken: {checks}", {"graph": format_graph(G)})
    if strict and not (checks["one_heavy_per_star"] and checks["sparse_remainder"]):
        raise ForestViolation(
            f"local search stalled with unmet forest properties: {checks}",
            result,
            {"graph": format_graph(G), "K": str(K), "k": k, "eps1": str(eps1), "eps2": str(eps2), "d": str(d)},
        )
    return result


def stalled_star_witness(G: Graph, failure: GrowthResult, A, k: int, eps1, eps2, d) -> Optional[list[int]]:
    """Dense subgraph explaining why a star could not be grown, if one exists.

    ``U`` collects the small uncovered vertices that are
    ``(eps2/k, d)``-mates of some vertex ``v_i`` of the stalled star. If
    some ``v_i`` has at least ``eps1*eps2*d^2/k`` common neighbours with the
    vertices of ``U`` in total, ``G[{v_i} + N(v_i) + U]`` is returned.
    """
    eps1, eps2, d = (as_fraction(x) for x in (eps1, eps2, d))
    S = failure.partial
    pool = set(A) - set(failure.covered) - set(S)
    thr = eps2 * d / k
    codegs = []
    U = set()
    for vi in S:
        row = {}
        for w in G.neighbors(vi):
            for u in G.neighbors(w):
                if u in pool:
                    row[u] = row.get(u, 0) + 1
        codegs.append(row)
        U.update(u for u, c in row.items() if c >= thr)
    bound = eps1 * eps2 * d * d / k
    for vi, row in zip(S, codegs):
        if sum(row.get(u, 0) for u in U) >= bound:
            return sorted({vi} | set(G.neighbors(vi)) | U)
    return None


def forest_to_json(F: StarForest, G: Optional[Graph] = None, c=None, d=None) -> dict:
    out = {
        "stars": [{"center": s.center, "leaves": list(s.leaves)} for s in F.stars],
        "loss": F.loss,
    }
    if c is not None and d is not None:
        margin = as_fraction(c) * as_fraction(d) * F.num_vertices - F.loss
        out["clean_margin"] = margin.numerator if margin.denominator == 1 else str(margin)
    return out
