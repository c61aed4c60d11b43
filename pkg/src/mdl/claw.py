"""Dense subgraph or bounded minor in a one-sided dense bipartite graph.

The input is a bipartite graph with sides ``A`` and ``B`` where ``A`` is at
least ``l0`` times larger than ``B`` and every ``A``-vertex has at least
``d0`` neighbours in ``B``. Three outcomes are possible:

* ``dense_small``: at most ``4*K0*d0`` vertices and ``>= eps10*eps20*d0^2/2`` edges;
* ``dense_wide``: at most ``4*l0*K0*d0`` vertices and ``>= eps10^2*d0^2/2`` edges;
* ``bounded_minor``: an ``(l0+1)``-bounded minor of density at least
  ``l0^2/(l0+1) * (1 - 2*eps10 - 2*l0*eps20 - l0/K0) * d0``.

The construction is contract-driven: each strategy proposes a candidate and
the first one whose certificate verifies is returned. Candidates are tried
in the order given by ``priority``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from mdl.certificates import Certificate, verify
from mdl.errors import DomainError, LemmaViolation, ResourceLimitError
from mdl.graph import Graph, as_fraction, format_graph, induced, peel_to_min_degree
from mdl.mates import MateParams, unmated_dichotomy
from mdl.minors import contract_model, realized_model

__all__ = ["ClawParams", "DEFAULT_PRIORITY", "claw_dichotomy", "greedy_bounded_model", "exhaustive_bounded_model"]

log = logging.getLogger(__name__)

DEFAULT_PRIORITY = ("bounded_minor", "dense_small", "dense_wide")
EXHAUSTIVE_LIMIT = 14


@dataclass(frozen=True)
class ClawParams:
    """Constants of the claw dichotomy.

    Paper mode enforces ``K0, l0 >= 2``, ``K0 >= l0(l0+1)``,
    ``eps10 <= 1/l0``, ``eps20 <= 1/l0^2`` and ``d0 >= 1/eps20``. Desk mode
    only asks for ``K0, l0 >= 1``, ``eps10, eps20`` in ``(0, 1)`` and
    ``d0 > 0``.
    """

    K0: int
    l0: int
    eps10: Fraction
    eps20: Fraction
    d0: Fraction
    mode: str = "paper"

    def __post_init__(self):
        for name in ("eps10", "eps20", "d0"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.mode not in ("paper", "desk"):
            raise DomainError(f"mode must be 'paper' or 'desk', got {self.mode!r}")
        if not (0 < self.eps10 < 1 and 0 < self.eps20 < 1) or self.d0 <= 0:
            raise DomainError("need eps10, eps20 in (0, 1) and d0 > 0")
        if self.mode == "paper":
            if self.l0 < 2 or self.K0 < self.l0 * (self.l0 + 1):
                raise DomainError(f"need l0 >= 2 and K0 >= l0(l0+1), got K0={self.K0}, l0={self.l0}")
            if self.eps10 > Fraction(1, self.l0) or self.eps20 > Fraction(1, self.l0 ** 2):
                raise DomainError("need eps10 <= 1/l0 and eps20 <= 1/l0^2")
            if self.d0 < 1 / self.eps20:
                raise DomainError(f"need d0 >= 1/eps20 = {1 / self.eps20}, got {self.d0}")
        elif self.K0 < 1 or self.l0 < 1:
            raise DomainError("need K0 >= 1 and l0 >= 1")

    @property
    def minor_bound(self) -> Fraction:
        l0 = self.l0
        return Fraction(l0 * l0, l0 + 1) * (1 - 2 * self.eps10 - 2 * l0 * self.eps20 - Fraction(l0, self.K0)) * self.d0

    def as_dict(self) -> dict:
        return {
            "K0": self.K0, "l0": self.l0, "eps10": self.eps10, "eps20": self.eps20,
            "d0": self.d0, "mode": self.mode,
        }


def _check_input(H: Graph, A, B, p: ClawParams):
    A, B = frozenset(A), frozenset(B)
    if A & B or (A | B) != frozenset(range(H.n)):
        raise DomainError("A and B must partition the vertex set")
    for u, v in H.edges():
        if (u in A) == (v in A):
            raise DomainError(f"edge ({u}, {v}) does not cross the bipartition")
    if not A or not B:
        raise DomainError("both sides must be nonempty")
    if len(A) < p.l0 * len(B):
        raise DomainError(f"need |A| >= l0*|B|, got {len(A)} < {p.l0}*{len(B)}")
    worst = min(H.degree(a) for a in A)
    if worst < p.d0:
        raise DomainError(f"an A-vertex has {worst} < d0 = {p.d0} neighbours in B")
    return A, B


def _dense_small(H: Graph, A, B, p: ClawParams) -> Optional[tuple]:
    try:
        mp = MateParams(p.K0, p.d0, p.eps10, p.eps20)
    except DomainError:
        return None
    cert = unmated_dichotomy(H, mp)
    if cert.branch != "dense_subgraph":
        return None
    return cert.vertices, {"source": "mates", "vertex": cert.witness["vertex"]}


def _dense_wide(H: Graph, A, B, p: ClawParams, seeds: int = 20) -> Optional[tuple]:
    """Grow a set ``S`` of A-vertices with overlapping neighbourhoods.

    ``H[S + N(S)]`` has at least ``|S|*d0`` edges, so ``|S| = ceil(eps10^2*d0/2)``
    suffices for the edge count; the greedy keeps ``N(S)`` small.
    """
    size = max(1, math.ceil(p.eps10 * p.eps10 * p.d0 / 2))
    if size > len(A):
        return None
    vmax = 4 * p.l0 * p.K0 * p.d0
    order = sorted(A, key=lambda a: (H.degree(a), a))
    best = None
    for seed in order[:seeds]:
        S, NS = [seed], set(H.neighbors(seed))
        pool = set(A) - {seed}
        while len(S) < size and pool:
            a = min(pool, key=lambda x: (len(H.neighbors(x) - NS), x))
            pool.discard(a)
            S.append(a)
            NS |= H.neighbors(a)
        v = len(S) + len(NS)
        if best is None or v < best[0]:
            best = (v, S, NS)
        if v <= vmax:
            break
    if best is None:
        return None
    _, S, NS = best
    return tuple(sorted(set(S) | NS)), {"source": "cluster", "cluster": sorted(S)}


def greedy_bounded_model(H: Graph, A, B, l0: int) -> list[frozenset]:
    """Branch sets of one B-vertex plus up to ``l0`` private A-neighbours.

    Each B-vertex (ascending) takes unassigned A-neighbours whose other
    B-neighbours overlap least with what the set already reaches, so few
    edges collapse. The contracted graph is then peeled, which never lowers
    its density.
    """
    A = frozenset(A)
    taken: set[int] = set()
    sets = []
    for b in sorted(B):
        reach = set(H.neighbors(b))
        picks = []
        cand = sorted(a for a in H.neighbors(b) if a in A and a not in taken)
        while cand and len(picks) < l0:
            a = min(cand, key=lambda x: (len(H.neighbors(x) & reach), x))
            cand.remove(a)
            picks.append(a)
            taken.add(a)
            reach |= H.neighbors(a)
        sets.append(frozenset([b, *picks]))
    model = realized_model(H, sets)
    J = contract_model(H, model)
    if J.num_edges:
        try:
            kept = peel_to_min_degree(J).vertices
        except DomainError:
            kept = ()
        if kept:
            sets = [model.branch_sets[i] for i in kept]
    return sets


def exhaustive_bounded_model(H: Graph, width: int, bound, max_nodes: int = 500_000) -> Optional[list[frozenset]]:
    """Search all packings of connected sets of size ``<= width`` for one whose
    contraction has density at least ``bound``. Only for tiny graphs."""
    if H.n > EXHAUSTIVE_LIMIT:
        raise ResourceLimitError(f"exhaustive search limited to {EXHAUSTIVE_LIMIT} vertices, got {H.n}")
    bound = as_fraction(bound)
    nbr = [sum(1 << w for w in H.neighbors(v)) for v in range(H.n)]
    conn = []
    for mask in range(1, 1 << H.n):
        if bin(mask).count("1") > width:
            continue
        low = mask & -mask
        seen, frontier = low, low
        while frontier:
            v = frontier.bit_length() - 1
            frontier &= ~(1 << v)
            new = nbr[v] & mask & ~seen
            seen |= new
            frontier |= new
        if seen == mask:
            conn.append(mask)
    by_low: dict[int, list[int]] = {}
    for mask in conn:
        by_low.setdefault((mask & -mask).bit_length() - 1, []).append(mask)

    def reach(mask):
        r = 0
        m = mask
        while m:
            v = m.bit_length() - 1
            m &= ~(1 << v)
            r |= nbr[v]
        return r & ~mask

    reaches = {mask: reach(mask) for mask in conn}
    nodes = 0
    chosen: list[int] = []

    def density_ok(edges):
        return Fraction(edges, len(chosen)) >= bound

    def dfs(start, used, edges):
        nonlocal nodes
        if chosen and density_ok(edges):
            return True
        for v in range(start, H.n):
            if used >> v & 1:
                continue
            for mask in by_low.get(v, ()):
                if mask & used:
                    continue
                nodes += 1
                if nodes > max_nodes:
                    raise ResourceLimitError("exhaustive bounded-model search exceeded its node budget")
                gained = sum(1 for c in chosen if reaches[mask] & c)
                chosen.append(mask)
                if dfs(v + 1, used | mask, edges + gained):
                    return True
                chosen.pop()
        return False

    if dfs(0, 0, 0):
        return [frozenset(v for v in range(H.n) if m >> v & 1) for m in chosen]
    return None


def claw_dichotomy(
    H: Graph,
    A: Iterable[int],
    B: Iterable[int],
    p: ClawParams,
    priority: Sequence[str] = DEFAULT_PRIORITY,
) -> Certificate:
    """Return the first verified outcome in ``priority`` order.

    Raises :class:`DomainError` on a precondition violation and
    :class:`LemmaViolation` (with the instance attached) when no strategy
    produces a certificate that verifies.
    """
    A, B = _check_input(H, A, B, p)
    if sorted(priority) != sorted(DEFAULT_PRIORITY):
        raise DomainError(f"priority must order {DEFAULT_PRIORITY}, got {tuple(priority)}")
    params = p.as_dict()
    tried = []
    for branch in priority:
        cert = _attempt(H, A, B, p, params, branch)
        if cert is None:
            tried.append(f"{branch}: no candidate")
            continue
        cert.meta.update({"priority": list(priority), "tried": list(tried)})
        verdict = verify(cert)
        if verdict:
            return cert
        tried.append(f"{branch}: candidate failed verification")
        log.debug("claw candidate rejected:\n%s", verdict.report())
    if H.n <= EXHAUSTIVE_LIMIT:
        sets = exhaustive_bounded_model(H, p.l0 + 1, p.minor_bound)
        if sets is not None:
            cert = _model_cert(H, params, sets, "exhaustive")
            cert.meta.update({"priority": list(priority), "tried": tried})
            if verify(cert):
                return cert
        tried.append("exhaustive: no model meets the bound")
    raise LemmaViolation(
        "no claw outcome verified: " + "; ".join(tried),
        {"graph": format_graph(H), "A": sorted(A), "B": sorted(B), "params": {k: str(v) for k, v in params.items()}},
    )


def _model_cert(H, params, sets, source):
    model = realized_model(H, sets)
    return Certificate(
        stage="claw", branch="bounded_minor", params=params, host=H, model=model,
        claimed={"width": model.width}, witness={"source": source},
    )


def _attempt(H, A, B, p, params, branch) -> Optional[Certificate]:
    if branch == "bounded_minor":
        return _model_cert(H, params, greedy_bounded_model(H, A, B, p.l0), "greedy")
    found = _dense_small(H, A, B, p) if branch == "dense_small" else _dense_wide(H, A, B, p)
    if found is None:
        return None
    verts, witness = found
    sub = induced(H, verts).graph
    return Certificate(
        stage="claw", branch=branch, params=params, host=H, vertices=tuple(verts),
        claimed={"v": sub.n, "e": sub.num_edges}, witness=witness,
    )
