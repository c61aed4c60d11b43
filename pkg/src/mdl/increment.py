"""Density increment: bounded minors of growing density or a small dense subgraph.

:func:`dense_or_bounded_minor` performs one step. It runs the dichotomy
and, on its bipartite outcome, the claw dichotomy, and reports either a
dense subgraph or an ``m``-bounded minor. :func:`density_increment` repeats
the step on the minor until the target density ``D`` is reached or a dense
subgraph appears, composing the minor models and pulling subgraphs back to
the original graph level by level.

Two modes exist. ``paper`` enforces the original constants (``C = 2^50``,
``k = 2^9 (1 + ln s)``, ``K = 4k^2``, ``eps = 1/k``) and therefore refuses
every graph that fits in memory; it remains useful for :func:`paper_k` and
the bound calculators. ``desk`` substitutes smaller constants, records them
in every certificate and verifies all bounds with the substituted values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mdl.certificates import Certificate, content_id, g_function, verify
from mdl.claw import DEFAULT_PRIORITY, ClawParams, claw_dichotomy
from mdl.dichotomy import DichotomyParams, dense_bipartite_minor
from mdl.errors import DomainError, LemmaViolation
from mdl.graph import Graph, as_fraction, density, format_graph, induced
from mdl.minors import MinorModel, compose_models, contract_model, identity_model

__all__ = [
    "PAPER_C",
    "g_value",
    "paper_k",
    "chromatic_bound",
    "degeneracy_ordering",
    "degeneracy_coloring",
    "StepParams",
    "dense_or_bounded_minor",
    "IncrementParams",
    "IncrementOutcome",
    "density_increment",
    "g_ratio_bound",
]

log = logging.getLogger(__name__)

PAPER_C = 2 ** 50


def g_value(s, C) -> float:
    """``C * (1 + ln s)^5`` for ``s >= 1`` and ``C > 0``."""
    if float(s) < 1:
        raise DomainError(f"g is defined for s >= 1, got s={s}")
    if float(C) <= 0:
        raise DomainError(f"C must be positive, got {C}")
    return g_function(s, C)


def paper_k(s) -> int:
    """``ceil(2^9 * (1 + ln s))``."""
    if float(s) < 1:
        raise DomainError(f"s must be at least 1, got {s}")
    return math.ceil(2 ** 9 * (1 + math.log(float(s))))


def g_ratio_bound(s) -> float:
    """Upper bound ``1 - 2/(1 + ln s)`` on ``g(s')/g(s)`` once ``m >= 30(1 + ln s)``."""
    return 1 - 2 / (1 + math.log(float(s)))


def chromatic_bound(t: int, C, hidden_constant) -> float:
    """Reference curve ``hidden_constant * t * (g(3.2 sqrt(ln t)) + (ln ln t)^2)``.

    The constant hidden in the asymptotic statement is unknown, so it must be
    supplied; the value is only meaningful up to that factor.
    """
    if t < 3:
        raise DomainError(f"t must be at least 3, got {t}")
    if hidden_constant is None or float(hidden_constant) <= 0:
        raise DomainError("hidden_constant must be a positive number")
    lt = math.log(t)
    return float(hidden_constant) * t * (g_value(3.2 * math.sqrt(lt), C) + math.log(lt) ** 2)


def degeneracy_ordering(G: Graph) -> tuple[list[int], int]:
    """Smallest-last ordering and the degeneracy.

    Repeatedly removes a vertex of minimum remaining degree (smallest index on
    ties); returns the removal order and the largest degree seen at removal.
    """
    deg = [G.degree(v) for v in range(G.n)]
    buckets: dict[int, set[int]] = {}
    for v, x in enumerate(deg):
        buckets.setdefault(x, set()).add(v)
    gone = [False] * G.n
    order, degen, low = [], 0, 0
    for _ in range(G.n):
        low = max(0, low - 1)
        while not buckets.get(low):
            low += 1
        v = min(buckets[low])
        buckets[low].discard(v)
        gone[v] = True
        order.append(v)
        degen = max(degen, low)
        for w in G.neighbors(v):
            if not gone[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets.setdefault(deg[w], set()).add(w)
    return order, degen


def degeneracy_coloring(G: Graph) -> list[int]:
    """Greedy coloring in reverse smallest-last order; uses at most degeneracy + 1 colors."""
    if G.n < 1:
        raise DomainError("graph must have at least one vertex")
    order, _ = degeneracy_ordering(G)
    color = [-1] * G.n
    for v in reversed(order):
        used = {color[w] for w in G.neighbors(v)}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


# -- one step ---------------------------------------------------------------------


@dataclass(frozen=True)
class StepParams:
    """Constants of one increment step.

    In paper mode ``K = 4k^2`` and ``eps1 = eps2 = 1/k`` are forced and the
    claw stage uses ``l0 = ceil(k/6)``, ``K0 = l0(l0+1)``, ``eps10 = 1/l0``,
    ``eps20 = 1/l0^2`` and ``d0 = (1 - 6 eps1) d``. Desk mode accepts
    overrides; unset values fall back to the paper-mode formulas, except that the
    claw epsilons default to ``1/(l0+1)`` and its square so they stay below 1.
    """

    k: int
    mode: str = "paper"
    K: Optional[int] = None
    eps1: Optional[Fraction] = None
    eps2: Optional[Fraction] = None
    claw_priority: tuple = DEFAULT_PRIORITY

    def dichotomy(self) -> DichotomyParams:
        k = self.k
        if self.mode == "paper":
            if self.K is not None or self.eps1 is not None or self.eps2 is not None:
                raise DomainError("paper mode fixes K = 4k^2 and eps = 1/k; use mode='desk' to override")
            return DichotomyParams(4 * k * k, k, Fraction(1, k), Fraction(1, k), "paper")
        K = 4 * k * k if self.K is None else self.K
        e1 = Fraction(1, k) if self.eps1 is None else as_fraction(self.eps1)
        e2 = Fraction(1, k) if self.eps2 is None else as_fraction(self.eps2)
        return DichotomyParams(K, k, e1, e2, "desk")

    def claw(self, d, min_degree_into_Y) -> ClawParams:
        dp = self.dichotomy()
        l0 = math.ceil(Fraction(self.k, 6))
        d0 = (1 - 6 * dp.eps1) * as_fraction(d)
        if self.mode == "paper":
            return ClawParams(l0 * (l0 + 1), l0, Fraction(1, l0), Fraction(1, l0 * l0), d0, "paper")
        if d0 <= 0:
            d0 = Fraction(min_degree_into_Y)
        e10 = Fraction(1, l0 + 1)
        return ClawParams(l0 * (l0 + 1), l0, e10, e10 * e10, d0, "desk")

    def as_dict(self, d) -> dict:
        dp = self.dichotomy()
        return {"k": self.k, "d": as_fraction(d), "K": dp.K, "eps1": dp.eps1, "eps2": dp.eps2, "mode": self.mode}


def dense_or_bounded_minor(G: Graph, p: StepParams) -> Certificate:
    """One increment step on ``G``: a dense subgraph or an ``m``-bounded minor.

    Paper mode requires ``k >= 100`` and ``d(G) >= k^2``. The returned
    certificate is verified with the step bounds ``v <= 12k^3 d``,
    ``d(H) >= d/(24k^5)`` or ``m`` in ``[k/6, k]`` and density
    ``>= m(1 - 30/m) d``.
    """
    if G.num_edges == 0:
        raise DomainError("graph needs at least one edge")
    d = density(G)
    if p.mode == "paper" and (p.k < 100 or d < p.k * p.k):
        raise DomainError(f"paper mode needs k >= 100 and d >= k^2, got k={p.k}, d={d}")
    params = p.as_dict(d)
    instance = {"graph": format_graph(G), "params": {k: str(v) for k, v in params.items()}}
    trace: list = []
    inner = dense_bipartite_minor(G, p.dichotomy(), trace)
    path = [f"dichotomy/{inner.branch}"]
    if inner.branch == "dense_subgraph":
        cert = _step_subgraph(G, params, inner.vertices, path)
    elif inner.branch == "bounded_minor":
        cert = Certificate(
            stage="increment_step", branch="bounded_minor", params={**params, "m": p.k}, host=G,
            model=inner.model, claimed={"width": inner.model.width}, witness={"path": path},
        )
    else:
        X, Y = inner.X, inner.Y
        cp = p.claw(d, inner.claimed["min_degree_into_Y"])
        H, A, B = _bipartite_part(G, X, Y)
        claw = claw_dichotomy(H, A, B, cp, p.claw_priority)
        path.append(f"claw/{claw.branch}")
        labels = X + Y
        params = {**params, **{f"claw_{k}": v for k, v in cp.as_dict().items() if k != "mode"}}
        if claw.branch == "bounded_minor":
            sets = [frozenset(labels[v] for v in bs) for bs in claw.model.branch_sets]
            model = MinorModel(tuple(sets), claw.model.pattern_edges)
            cert = Certificate(
                stage="increment_step", branch="bounded_minor", params={**params, "m": cp.l0 + 1}, host=G,
                model=model, claimed={"width": model.width}, witness={"path": path},
            )
        else:
            cert = _step_subgraph(G, params, [labels[v] for v in claw.vertices], path)
    cert.meta["dichotomy_trace"] = trace
    verdict = verify(cert)
    if not verdict:
        raise LemmaViolation("increment step failed verification:\n" + verdict.report(), instance)
    return cert


def _bipartite_part(G: Graph, X, Y):
    """The bipartite graph of ``X``-``Y`` edges, relabelled ``X`` first."""
    labels = list(X) + list(Y)
    pos = {v: i for i, v in enumerate(labels)}
    ys = set(Y)
    edges = [(pos[x], pos[y]) for x in X for y in G.neighbors(x) if y in ys]
    H = Graph(len(labels), edges)
    return H, range(len(X)), range(len(X), len(labels))


def _step_subgraph(G, params, verts, path):
    verts = tuple(sorted(verts))
    H = induced(G, verts).graph
    return Certificate(
        stage="increment_step", branch="dense_subgraph", params=params, host=G, vertices=verts,
        claimed={"v": H.n, "e": H.num_edges}, witness={"path": path},
    )


# -- the loop -----------------------------------------------------------------------


@dataclass(frozen=True)
class IncrementParams:
    """Constants of the increment loop.

    ``C`` scales ``g(s) = C(1 + ln s)^5`` and ``D`` is the target density.
    Paper mode uses ``k = ceil(2^9 (1 + ln s))``. Desk mode uses
    ``k = max(k_min, ceil(k_coeff (1 + ln s)))``, optionally capped by
    ``k_max``, and lowered further when needed so that
    ``d >= k / min(eps1, eps2)`` holds for the dichotomy; ``K``, ``eps1`` and
    ``eps2`` are passed to each step.
    """

    C: Fraction
    D: Fraction
    mode: str = "paper"
    k_coeff: Fraction = Fraction(1)
    k_min: int = 2
    k_max: Optional[int] = None
    K: Optional[int] = None
    eps1: Optional[Fraction] = None
    eps2: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("C", "D", "k_coeff"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.mode not in ("paper", "desk"):
            raise DomainError(f"mode must be 'paper' or 'desk', got {self.mode!r}")
        if self.D <= 0 or self.C <= 0:
            raise DomainError("need C > 0 and D > 0")
        if self.mode == "paper" and self.C != PAPER_C:
            raise DomainError("paper mode fixes C = 2^50")
        if self.k_min < 2:
            raise DomainError("k_min must be at least 2")

    def k_for(self, s, d) -> int:
        if self.mode == "paper":
            return paper_k(s)
        k = max(self.k_min, math.ceil(float(self.k_coeff) * (1 + math.log(float(s)))))
        if self.k_max is not None:
            k = min(k, self.k_max)
        k_cap = self._density_cap(d)
        return max(2, min(k, k_cap))

    def _density_cap(self, d) -> int:
        # largest k whose dichotomy precondition d >= k/min(eps) holds
        if self.eps1 is None and self.eps2 is None:
            return max(2, math.isqrt(math.floor(d)))
        eps = min(x for x in (self.eps1, self.eps2) if x is not None)
        return max(2, math.floor(as_fraction(d) * as_fraction(eps)))

    def step(self, k: int) -> StepParams:
        if self.mode == "paper":
            return StepParams(k, "paper")
        e1 = None if self.eps1 is None else as_fraction(self.eps1)
        e2 = None if self.eps2 is None else as_fraction(self.eps2)
        return StepParams(k, "desk", self.K, e1, e2)

    def as_dict(self) -> dict:
        out = {"C": self.C, "D": self.D, "mode": self.mode}
        if self.mode == "desk":
            out.update(k_coeff=self.k_coeff, k_min=self.k_min, k_max=self.k_max, K=self.K, eps1=self.eps1, eps2=self.eps2)
        return out


@dataclass
class IncrementOutcome:
    """Final certificate (stage ``increment``) plus the per-iteration log."""

    tag: str
    certificate: Certificate
    iterations: list = field(default_factory=list)
    models: list = field(default_factory=list)
    final_density: Fraction = Fraction(0)

    def to_json(self) -> dict:
        from mdl.certificates import _enc

        return {
            "tag": self.tag,
            "certificate": content_id(self.certificate),
            "final_density": _enc(self.final_density),
            "iterations": _enc(self.iterations),
        }


def _pull_back(model: MinorModel, host: Graph, verts) -> tuple[int, ...]:
    out = set()
    for v in verts:
        out |= model.branch_sets[v]
    return tuple(sorted(out))


def density_increment(G: Graph, p: IncrementParams) -> IncrementOutcome:
    """Run the increment loop on ``G``.

    Returns ``minor_found`` with a model of a minor of density at least
    ``D``, or ``dense_subgraph`` with ``v(H) <= g(s) D^2 / d(G)`` and
    ``d(H) >= d(G)/g(s)`` where ``s = D/d(G)``. Raises :class:`DomainError`
    when ``d(G) < C`` and :class:`LemmaViolation` when ``s`` fails to drop,
    a pull-back inequality breaks or the final certificate does not verify.
    """
    if G.num_edges == 0:
        raise DomainError("graph needs at least one edge")
    d0 = density(G)
    if d0 < p.C:
        raise DomainError(f"density {d0} below C = {p.C}")
    params = {**p.as_dict(), "d": d0}
    instance = {"graph": format_graph(G), "params": {k: str(v) for k, v in params.items()}}

    levels: list[tuple[Graph, MinorModel]] = []  # (graph at level i, model of level i+1 in level i)
    current, total = G, identity_model(G)
    iterations: list[dict] = []
    dense = None  # (level index, vertex set in that level's graph, source)

    while True:
        d = density(current)
        s = p.D / d
        row = {"iteration": len(iterations), "n": current.n, "m": current.num_edges, "d": d, "s": s}
        iterations.append(row)
        if s <= 1:
            row["branch"] = "target_reached"
            break
        g = g_value(s, p.C)
        row["g"] = g
        if g >= 2 * d:
            row["branch"] = "single_edge"
            dense = (len(levels), current.edges()[0], "single_edge")
            break
        k = p.k_for(s, d)
        step = dense_or_bounded_minor(current, p.step(k))
        row.update(k=k, branch=step.branch, path=step.witness.get("path"), certificate=content_id(step))
        if step.branch == "dense_subgraph":
            dense = (len(levels), step.vertices, "step")
            break
        m = step.params["m"]
        nxt = contract_model(current, step.model)
        d_new = density(nxt)
        s_new = p.D / d_new
        row.update(width=m, d_next=d_new, s_next=s_new)
        if d_new <= d:
            raise LemmaViolation(
                f"minor density {d_new} does not exceed current density {d}; s would not decrease", instance
            )
        if float(m) >= 30 * (1 + math.log(float(s))) and s_new >= 1:
            ratio = g_value(s_new, p.C) / g
            row["g_ratio"] = ratio
            if ratio > g_ratio_bound(s):
                raise LemmaViolation(f"g(s')/g(s) = {ratio} exceeds 1 - 2/(1+ln s)", instance)
        levels.append((current, step.model))
        total = compose_models(step.model, total)
        current = nxt

    if dense is None:
        tag = "minor_found"
        cert = Certificate(
            stage="increment", branch="minor_found", params=params, host=G, model=total,
            claimed={"width": total.width}, witness={"levels": len(levels)},
        )
    else:
        tag = "dense_subgraph"
        level, verts, source = dense
        verts = tuple(verts)
        for i in range(level - 1, -1, -1):
            host_i, model_i = levels[i]
            upper = induced(levels[i + 1][0] if i + 1 < len(levels) else current, verts).graph
            pulled = _pull_back(model_i, host_i, verts)
            lower = induced(host_i, pulled).graph
            width = model_i.width
            ok_v = lower.n <= width * upper.n
            ok_d = density(lower) * width >= density(upper)
            iterations[i].setdefault("pull_back", {}).update(
                v=lower.n, v_inner=upper.n, d=density(lower), d_inner=density(upper), ok=ok_v and ok_d
            )
            if not (ok_v and ok_d):
                raise LemmaViolation("pull-back inequality v(H) <= m v(H'), d(H) >= d(H')/m failed", instance)
            verts = pulled
        H = induced(G, verts).graph
        cert = Certificate(
            stage="increment", branch="dense_subgraph", params=params, host=G, vertices=verts,
            claimed={"v": H.n, "e": H.num_edges}, witness={"source": source, "levels": level},
        )
    cert.meta["iterations"] = iterations
    verdict = verify(cert)
    if not verdict:
        raise LemmaViolation("final increment certificate failed verification:\n" + verdict.report(), instance)
    final = density(contract_model(G, total)) if tag == "minor_found" else density(cert.subgraph())
    return IncrementOutcome(tag, cert, iterations, [m for _, m in levels], final)
