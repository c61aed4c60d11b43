"""Dense subgraph, one-sided dense bipartite subgraph, or a k-bounded minor.

:func:`dense_bipartite_minor` turns the minimal-counterexample argument into
a loop. The target density ``d = d(G)`` is fixed once. Each level works on a
subgraph ``H`` with ``d(H) >= d``; whenever the argument needs "every proper
subgraph is sparser than ``d``" and this fails, the loop moves into the
denser proper subgraph. Vertex counts strictly decrease, and every outcome
found in a subgraph transfers to ``G`` unchanged.

One level:

1. peel vertices of degree at most ``d``;
2. mate test with ``(K, eps1, eps2/k, d)``: a small vertex with many mates
   gives the dense-subgraph outcome;
3. build the clean star forest (a stalled star whose neighbourhood is
   dense also gives the dense-subgraph outcome);
4. if ``A1`` (uncovered small vertices with at least ``(1 - 6 eps1) d``
   neighbours in ``B + C``) is large, return the bipartite outcome on
   ``(A1, B + C)``;
5. if ``H[A' + B + C]`` still has density at least ``d``, descend into it;
6. otherwise contract the stars, delete ``A'`` and return the minor.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from mdl.certificates import Certificate, verify
from mdl.errors import DomainError, LemmaViolation
from mdl.forest import ForestViolation, build_clean_forest, forest_to_json, stalled_star_witness
from mdl.graph import Graph, as_fraction, density, format_graph, induced, peel_to_min_degree
from mdl.mates import MateParams, unmated_dichotomy
from mdl.minors import realized_model

__all__ = ["DichotomyParams", "PartitionState", "dense_bipartite_minor"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DichotomyParams:
    """Constants of the three-way dichotomy.

    ``mode="paper"`` enforces ``K >= k >= 100``, ``K >= 4k^2`` and
    ``eps1, eps2 <= 1/k``. ``mode="desk"`` only requires ``K >= 1``,
    ``k >= 2`` and ``eps1, eps2`` in ``(0, 1)`` so that small instances can
    be run; the outcome bounds are evaluated with whatever constants are
    given.
    """

    K: int
    k: int
    eps1: Fraction
    eps2: Fraction
    mode: str = "paper"

    def __post_init__(self):
        object.__setattr__(self, "eps1", as_fraction(self.eps1))
        object.__setattr__(self, "eps2", as_fraction(self.eps2))
        if self.mode not in ("paper", "desk"):
            raise DomainError(f"mode must be 'paper' or 'desk', got {self.mode!r}")
        if not (0 < self.eps1 < 1 and 0 < self.eps2 < 1):
            raise DomainError("eps1 and eps2 must lie in (0, 1)")
        if self.mode == "paper":
            if not (self.K >= self.k >= 100 and self.K >= 4 * self.k ** 2):
                raise DomainError(f"need K >= k >= 100 and K >= 4k^2, got K={self.K}, k={self.k}")
            if self.eps1 > Fraction(1, self.k) or self.eps2 > Fraction(1, self.k):
                raise DomainError("need eps1, eps2 <= 1/k")
        elif self.K < 1 or self.k < 2:
            raise DomainError(f"need K >= 1 and k >= 2, got K={self.K}, k={self.k}")

    @property
    def ell(self) -> int:
        return math.ceil(Fraction(self.k, 6))

    @property
    def min_density(self) -> Fraction:
        return self.k / min(self.eps1, self.eps2)

    def as_dict(self, d) -> dict:
        return {"K": self.K, "k": self.k, "eps1": self.eps1, "eps2": self.eps2, "d": as_fraction(d), "mode": self.mode}


@dataclass
class PartitionState:
    """Vertex classes of one level, in the level graph's own labels."""

    A: frozenset
    B: frozenset
    C: frozenset
    A_prime: frozenset
    A1: frozenset
    A2: frozenset

    def sizes(self) -> dict:
        return {name: len(getattr(self, name)) for name in ("A", "B", "C", "A_prime", "A1", "A2")}


def _subgraph_cert(G, params, verts, witness, meta):
    H = induced(G, verts).graph
    return Certificate(
        stage="dichotomy",
        branch="dense_subgraph",
        params=params,
        host=G,
        vertices=tuple(sorted(verts)),
        claimed={"v": H.n, "e": H.num_edges},
        witness=witness,
        meta=meta,
    )


def dense_bipartite_minor(G: Graph, p: DichotomyParams, trace: list | None = None) -> Certificate:
    """Return a verified certificate for one of the three outcomes on ``G``.

    Raises :class:`DomainError` when ``d(G) < k/min(eps1, eps2)`` and
    :class:`LemmaViolation` when no outcome can be produced or the produced
    one fails verification.
    """
    if G.n == 0 or G.num_edges == 0:
        raise DomainError("graph needs at least one edge")
    d = density(G)
    if d < p.min_density:
        raise DomainError(f"density {d} below k/min(eps1, eps2) = {p.min_density}")
    params = p.as_dict(d)
    trace = [] if trace is None else trace
    instance = {"graph": format_graph(G), "params": {k: str(v) for k, v in params.items()}}

    H, verts = G, tuple(range(G.n))
    for level in range(G.n + 1):
        step = {"level": level, "n": H.n, "m": H.num_edges}
        trace.append(step)
        peeled = peel_to_min_degree(H, d)
        if peeled.graph.n < H.n:
            step["action"] = "peel"
            verts = tuple(verts[i] for i in peeled.vertices)
            H = peeled.graph
            continue

        mate = unmated_dichotomy(H, MateParams(p.K, d, p.eps1, p.eps2 / p.k))
        if mate.branch == "dense_subgraph":
            step["action"] = "mated"
            cert = _subgraph_cert(
                G, params, [verts[v] for v in mate.vertices],
                {"source": "mates", "vertex": verts[mate.witness["vertex"]]},
                {"trace": trace},
            )
            return _checked(cert, instance)

        try:
            fr = build_clean_forest(H, p.K, p.k, p.eps1, p.eps2, d)
        except ForestViolation as exc:
            step["action"] = "stalled_star"
            for failure in exc.result.failures:
                found = stalled_star_witness(H, failure, exc.result.A, p.k, p.eps1, p.eps2, d)
                if found is not None:
                    cert = _subgraph_cert(
                        G, params, [verts[v] for v in found],
                        {"source": "stalled_star", "star": [verts[v] for v in failure.partial]},
                        {"trace": trace},
                    )
                    if verify(cert):
                        return cert
            raise LemmaViolation(f"star forest stalled without a dense witness: {exc}", instance) from exc

        F = fr.forest
        A, B, C, Ap = fr.A, fr.B, fr.C, fr.A_prime
        BC = B | C
        need = (1 - 6 * p.eps1) * d
        A1 = frozenset(v for v in Ap if sum(1 for w in H.neighbors(v) if w in BC) >= need)
        part = PartitionState(A, B, C, Ap, A1, Ap - A1)
        step.update(part.sizes(), stars=len(F), forest_loss=F.loss)

        if BC and len(A1) >= (Fraction(1, 3) + Fraction(2, p.k)) * H.n and len(A1) >= p.ell * len(BC):
            step["action"] = "bipartite"
            X = tuple(sorted(verts[v] for v in A1))
            Y = tuple(sorted(verts[v] for v in BC))
            worst = min(sum(1 for w in H.neighbors(v) if w in BC) for v in A1)
            cert = Certificate(
                stage="dichotomy", branch="bipartite", params=params, host=G, X=X, Y=Y,
                claimed={"min_degree_into_Y": worst}, meta={"trace": trace},
            )
            return _checked(cert, instance)

        rest = Ap | BC
        if len(rest) < H.n:
            sub = induced(H, rest)
            if sub.graph.num_edges and density(sub.graph) >= d:
                step["action"] = "descend"
                verts = tuple(verts[i] for i in sub.vertices)
                H = sub.graph
                continue

        if not F.stars and not B:
            raise LemmaViolation("no forest and no big vertices: nothing left to contract", instance)
        step["action"] = "minor"
        branch_sets = [frozenset(verts[x] for x in s.vertices) for s in F.stars]
        branch_sets += [frozenset((verts[b],)) for b in sorted(B)]
        model = realized_model(G, branch_sets)
        Gp = realized_model(H, [s.vertices for s in F.stars] + [(b,) for b in sorted(B)])
        h = Gp.h
        e_minor = len(Gp.pattern_edges)
        a = Fraction(len(Ap), H.n)
        proof_checks = {
            "a_prime_at_most_2/3": a <= Fraction(2, 3),
            "minor_size_bound": h <= Fraction(H.n, p.k) * (Fraction(2 * p.k + 1, 2 * p.k) - a),
            "edge_accounting": H.num_edges - e_minor
            <= (Fraction(2, p.k) + 3 * p.eps1 + 4 * p.eps2 + a) * d * H.n,
        }
        step["proof_checks"] = proof_checks
        cert = Certificate(
            stage="dichotomy", branch="bounded_minor", params=params, host=G, model=model,
            claimed={"width": model.width},
            witness={"forest": _relabel_forest(forest_to_json(F, c=4 * p.eps2, d=d), verts), "a_prime": a},
            meta={"trace": trace, "proof_checks": proof_checks},
        )
        return _checked(cert, instance)

    raise LemmaViolation("recursion depth exceeded v(G)", instance)


def _relabel_forest(obj: dict, verts) -> dict:
    obj["stars"] = [
        {"center": verts[s["center"]], "leaves": [verts[x] for x in s["leaves"]]} for s in obj["stars"]
    ]
    return obj


def _checked(cert: Certificate, instance: dict) -> Certificate:
    verdict = verify(cert)
    if not verdict:
        log.warning("certificate failed verification:\n%s", verdict.report())
        raise LemmaViolation("constructed certificate failed verification:\n" + verdict.report(), instance)
    return cert
