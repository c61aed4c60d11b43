"""Certificates: serializable outcome records and their independent verifier.

Every construction in the package returns a :class:`Certificate`. The
verifier in this module recomputes every quantity from the embedded host
graph using only :mod:`mdl.graph` and :mod:`mdl.minors`; it never consults
the state of the module that produced the certificate. The bound each
outcome must meet is derived from the certificate's parameters by the
formula table below, so a certificate cannot vouch for itself.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from mdl.errors import CertificateParseError
from mdl.graph import Graph, as_fraction, density, induced
from mdl.minors import MinorModel, contract_model, model_from_json, model_to_json, verify_model

__all__ = [
    "Certificate",
    "Check",
    "Verdict",
    "verify",
    "certificate_to_json",
    "certificate_from_json",
    "dumps",
    "loads",
    "content_id",
    "verify_certificate",
    "g_function",
    "SCHEMA",
]

SCHEMA = "mdl/certificate-v1"

# (stage, branch) pairs the verifier understands
BRANCHES = {
    "unmated": ("dense_subgraph", "unmated"),
    "claw": ("dense_small", "dense_wide", "bounded_minor"),
    "dichotomy": ("dense_subgraph", "bipartite", "bounded_minor"),
    "increment_step": ("dense_subgraph", "bounded_minor"),
    "increment": ("dense_subgraph", "minor_found"),
}


@dataclass
class Certificate:
    """One outcome of one construction, in terms of the host graph's vertices.

    ``vertices`` holds the vertex set of a subgraph outcome, ``X``/``Y`` the
    two sides of a bipartite outcome, ``model`` the branch sets of a minor
    outcome. ``claimed`` carries the measured values the producer asserts
    (they must match a recount). ``meta`` is free-form and ignored by the
    verifier.
    """

    stage: str
    branch: str
    params: dict
    host: Graph
    vertices: Optional[tuple[int, ...]] = None
    X: Optional[tuple[int, ...]] = None
    Y: Optional[tuple[int, ...]] = None
    model: Optional[MinorModel] = None
    claimed: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def subgraph(self) -> Graph:
        return induced(self.host, self.vertices).graph

    def minor(self) -> Graph:
        return contract_model(self.host, self.model)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: object = None
    bound: object = None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        if self.value is None and self.bound is None:
            return f"{mark} {self.name}"
        return f"{mark} {self.name}: value={_fmt(self.value)} bound={_fmt(self.bound)}"


@dataclass
class Verdict:
    stage: str
    branch: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def report(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.stage}/{self.branch}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])


def _fmt(x):
    if isinstance(x, Fraction):
        return f"{x} (~{float(x):.6g})" if x.denominator != 1 else str(x.numerator)
    return str(x)


def g_function(s, C) -> float:
    """``C * (1 + ln s)**5``."""
    return float(C) * (1.0 + math.log(float(s))) ** 5


# -- verification -------------------------------------------------------------


def _p(cert, key):
    try:
        return as_fraction(cert.params[key])
    except KeyError:
        raise CertificateParseError("missing parameter", field=f"params.{key}") from None


def _subgraph_counts(cert, checks):
    vs = cert.vertices
    if not vs:
        checks.append(Check("subgraph vertex set nonempty", False))
        return None
    if min(vs) < 0 or max(vs) >= cert.host.n or len(set(vs)) != len(vs):
        checks.append(Check("subgraph vertices lie in host", False))
        return None
    H = induced(cert.host, vs).graph
    v, e = H.n, H.num_edges
    _claims(cert, checks, {"v": v, "e": e, "density": Fraction(e, v)})
    return v, e


def _claims(cert, checks, actual):
    for key, measured in actual.items():
        if key in cert.claimed:
            claimed = as_fraction(cert.claimed[key])
            checks.append(Check(f"claimed {key} matches recount", claimed == measured, measured, claimed))


def _model_density(cert, checks):
    M = cert.model
    if M is None:
        checks.append(Check("model present", False))
        return None
    mc = verify_model(cert.host, M)
    checks.append(Check(f"model valid{'' if mc else ': ' + mc.reason + ' ' + str(mc.witness)}", mc.ok))
    if not mc:
        return None
    J = contract_model(cert.host, M)
    dj = density(J)
    _claims(cert, checks, {"density": dj, "h": J.n, "width": M.width})
    return M.width, dj


def _check_host_density(cert, checks):
    if "d" in cert.params:
        d = _p(cert, "d")
        checks.append(Check("parameter d equals host density", d == density(cert.host), density(cert.host), d))


def _verify_unmated(cert, checks):
    K, d, e1, e2 = (_p(cert, k) for k in ("K", "d", "eps1", "eps2"))
    if cert.branch == "dense_subgraph":
        counts = _subgraph_counts(cert, checks)
        if counts:
            v, e = counts
            checks.append(Check("v(H) <= 3Kd", v <= 3 * K * d, v, 3 * K * d))
            checks.append(Check("2e(H) >= eps1*eps2*d^2", 2 * e >= e1 * e2 * d * d, 2 * e, e1 * e2 * d * d))
    else:
        G = cert.host
        worst, who = 0, None
        for u in range(G.n):
            if G.degree(u) > K * d:
                continue
            codeg = {}
            for w in G.neighbors(u):
                for x in G.neighbors(w):
                    if x != u:
                        codeg[x] = codeg.get(x, 0) + 1
            mates = sum(1 for c in codeg.values() if c >= e2 * d)
            if mates > worst:
                worst, who = mates, u
        checks.append(Check(f"every small vertex has < eps1*d mates (worst vertex {who})", worst < e1 * d, worst, e1 * d))


def _verify_claw(cert, checks):
    K0, l0, e10, e20, d0 = (_p(cert, k) for k in ("K0", "l0", "eps10", "eps20", "d0"))
    if cert.branch in ("dense_small", "dense_wide"):
        counts = _subgraph_counts(cert, checks)
        if counts:
            v, e = counts
            if cert.branch == "dense_small":
                vb, eb = 4 * K0 * d0, e10 * e20 * d0 * d0 / 2
                checks.append(Check("v(H) <= 4*K0*d0", v <= vb, v, vb))
                checks.append(Check("e(H) >= eps10*eps20*d0^2/2", e >= eb, e, eb))
            else:
                vb, eb = 4 * l0 * K0 * d0, e10 * e10 * d0 * d0 / 2
                checks.append(Check("v(H) <= 4*l0*K0*d0", v <= vb, v, vb))
                checks.append(Check("e(H) >= eps10^2*d0^2/2", e >= eb, e, eb))
    else:
        got = _model_density(cert, checks)
        if got:
            width, dj = got
            bound = l0 * l0 / (l0 + 1) * (1 - 2 * e10 - 2 * l0 * e20 - l0 / K0) * d0
            checks.append(Check("width <= l0+1", width <= l0 + 1, width, l0 + 1))
            checks.append(Check("minor density >= l0^2/(l0+1)*(1-2eps10-2*l0*eps20-l0/K0)*d0", dj >= bound, dj, bound))


def _verify_dichotomy(cert, checks):
    K, k, e1, e2, d = (_p(cert, key) for key in ("K", "k", "eps1", "eps2", "d"))
    _check_host_density(cert, checks)
    if cert.branch == "dense_subgraph":
        counts = _subgraph_counts(cert, checks)
        if counts:
            v, e = counts
            dens, lb = Fraction(e, v), e1 * e2 * d / (6 * K * k)
            checks.append(Check("v(H) <= 3Kd", v <= 3 * K * d, v, 3 * K * d))
            checks.append(Check("d(H) >= eps1*eps2*d/(6Kk)", dens >= lb, dens, lb))
    elif cert.branch == "bipartite":
        G = cert.host
        X, Y = cert.X or (), cert.Y or ()
        sx, sy = set(X), set(Y)
        sane = bool(X) and bool(Y) and not (sx & sy) and all(0 <= v < G.n for v in sx | sy)
        checks.append(Check("X, Y nonempty disjoint vertex sets of host", sane))
        if sane:
            ell = math.ceil(k / 6)
            checks.append(Check("|X| >= ceil(k/6)*|Y|", len(sx) >= ell * len(sy), len(sx), ell * len(sy)))
            need = (1 - 6 * e1) * d
            worst = min(len(G.neighbors(x) & sy) for x in sx)
            checks.append(Check("every X-vertex has >= (1-6eps1)d neighbours in Y", worst >= need, worst, need))
            _claims(cert, checks, {"min_degree_into_Y": worst})
    else:
        got = _model_density(cert, checks)
        if got:
            width, dj = got
            bound = k * (1 - Fraction(30) / k) * d
            checks.append(Check("width <= k", width <= k, width, k))
            checks.append(Check("minor density >= k(1-30/k)d", dj >= bound, dj, bound))


def _verify_step(cert, checks):
    k, d = _p(cert, "k"), _p(cert, "d")
    _check_host_density(cert, checks)
    if cert.branch == "dense_subgraph":
        counts = _subgraph_counts(cert, checks)
        if counts:
            v, e = counts
            dens = Fraction(e, v)
            checks.append(Check("v(H) <= 12k^3 d", v <= 12 * k ** 3 * d, v, 12 * k ** 3 * d))
            checks.append(Check("d(H) >= d/(24k^5)", dens >= d / (24 * k ** 5), dens, d / (24 * k ** 5)))
    else:
        m = _p(cert, "m")
        got = _model_density(cert, checks)
        checks.append(Check("k/6 <= m <= k", k / 6 <= m <= k, m, k))
        if got:
            width, dj = got
            bound = m * (1 - 30 / m) * d
            checks.append(Check("width <= m", width <= m, width, m))
            checks.append(Check("minor density >= m(1-30/m)d", dj >= bound, dj, bound))


def _verify_increment(cert, checks):
    C, D, d = _p(cert, "C"), _p(cert, "D"), _p(cert, "d")
    _check_host_density(cert, checks)
    if cert.branch == "minor_found":
        got = _model_density(cert, checks)
        if got:
            checks.append(Check("d(J) >= D", got[1] >= D, got[1], D))
    else:
        s = D / d
        checks.append(Check("s > 1", s > 1, s, 1))
        counts = _subgraph_counts(cert, checks)
        if counts and s > 1:
            v, e = counts
            g = Fraction(g_function(s, C))
            dens = Fraction(e, v)
            checks.append(Check("v(H) <= g(s) D^2 / d(G)", v <= g * D * D / d, v, g * D * D / d))
            checks.append(Check("d(H) >= d(G)/g(s)", dens >= d / g, dens, d / g))


_DISPATCH = {
    "unmated": _verify_unmated,
    "claw": _verify_claw,
    "dichotomy": _verify_dichotomy,
    "increment_step": _verify_step,
    "increment": _verify_increment,
}


def verify(cert: Certificate) -> Verdict:
    """Recompute every claimed quantity and compare against the stage's bounds."""
    checks: list[Check] = []
    if cert.stage not in BRANCHES or cert.branch not in BRANCHES[cert.stage]:
        checks.append(Check(f"known stage/branch {cert.stage}/{cert.branch}", False))
        return Verdict(cert.stage, cert.branch, checks)
    _DISPATCH[cert.stage](cert, checks)
    return Verdict(cert.stage, cert.branch, checks)


# -- JSON -------------------------------------------------------------------------


def _enc(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_enc(v) for v in x)
    return x


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "schema": SCHEMA,
        "stage": cert.stage,
        "branch": cert.branch,
        "params": _enc(cert.params),
        "graph": {"n": cert.host.n, "edges": [list(e) for e in cert.host.edges()]},
        "subgraph": list(cert.vertices) if cert.vertices is not None else None,
        "bipartite": {"X": list(cert.X), "Y": list(cert.Y)} if cert.X is not None else None,
        "model": model_to_json(cert.model) if cert.model is not None else None,
        "claimed": _enc(cert.claimed),
        "witness": _enc(cert.witness),
        "meta": _enc(cert.meta),
    }


def _need(obj, key, kind):
    if key not in obj:
        raise CertificateParseError("missing field", field=key)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise CertificateParseError(f"expected {getattr(kind, '__name__', kind)}", field=key)
    return val


def certificate_from_json(obj: dict) -> Certificate:
    if not isinstance(obj, dict):
        raise CertificateParseError("certificate must be a JSON object")
    if obj.get("schema") != SCHEMA:
        raise CertificateParseError(f"unsupported schema {obj.get('schema')!r}", field="schema")
    stage = _need(obj, "stage", str)
    branch = _need(obj, "branch", str)
    params = _need(obj, "params", dict)
    g = _need(obj, "graph", dict)
    try:
        host = Graph(int(g["n"]), [tuple(e) for e in g["edges"]])
    except Exception as exc:
        raise CertificateParseError(f"bad host graph: {exc}", field="graph") from exc
    sub = obj.get("subgraph")
    bip = obj.get("bipartite")
    mod = obj.get("model")
    try:
        model = model_from_json(mod) if mod is not None else None
    except Exception as exc:
        raise CertificateParseError(str(exc), field="model") from exc
    try:
        vertices = tuple(int(v) for v in sub) if sub is not None else None
        X = tuple(int(v) for v in bip["X"]) if bip is not None else None
        Y = tuple(int(v) for v in bip["Y"]) if bip is not None else None
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateParseError(f"bad vertex list: {exc}", field="subgraph/bipartite") from exc
    return Certificate(
        stage=stage,
        branch=branch,
        params=dict(params),
        host=host,
        vertices=vertices,
        X=X,
        Y=Y,
        model=model,
        claimed=dict(obj.get("claimed") or {}),
        witness=dict(obj.get("witness") or {}),
        meta=dict(obj.get("meta") or {}),
    )


def dumps(cert: Certificate, indent=None) -> str:
    return json.dumps(certificate_to_json(cert), indent=indent, sort_keys=True)


def loads(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return certificate_from_json(obj)


def content_id(cert: Certificate) -> str:
    """SHA-256 of the canonical JSON encoding (first 16 hex digits)."""
    canon = json.dumps(certificate_to_json(cert), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def verify_certificate(path) -> Verdict:
    """Load a certificate file and verify it."""
    return verify(loads(Path(path).read_text()))
