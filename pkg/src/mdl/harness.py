"""Experiment orchestration: configs in, certificates and reports out.

A config is a JSON object::

    {
      "name": "gnp-dichotomy",
      "stage": "dichotomy",                # unmated | dichotomy | increment | oracle
      "mode": "desk",
      "seed": 7,
      "generator": {"family": "gnp", "n": 80, "p": 0.1, "count": 20},
      "params": {"K": 2, "k": 3, "eps1": "2/5", "eps2": "9/10"}
    }

``generator`` with ``count`` yields instances whose seeds are ``seed + i``;
an explicit ``instances`` list may be given instead. Numbers in ``params``
may be strings such as ``"2/5"`` and are read as exact fractions. A run
writes ``report.json``, ``summary.csv`` and one content-addressed file per
certificate under ``certs/``.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from mdl.certificates import _enc, content_id, dumps, verify
from mdl.dichotomy import DichotomyParams, dense_bipartite_minor
from mdl.errors import ConfigError, DomainError, LemmaViolation, MDLError, ResourceLimitError
from mdl.generators import generate_graph
from mdl.graph import Graph, density, format_graph, peel_to_min_degree
from mdl.increment import PAPER_C, IncrementParams, density_increment
from mdl.mates import MateParams, unmated_dichotomy
from mdl.minors import clique_minor_oracle, model_to_json, verify_model

__all__ = ["STAGES", "CSV_COLUMNS", "ExperimentConfig", "RunReport", "load_config", "run_experiment", "run_instance"]

log = logging.getLogger(__name__)

STAGES = ("unmated", "dichotomy", "increment", "oracle")
CSV_COLUMNS = ("instance_id", "n", "m", "density", "stage", "branch", "verified", "wall_ms")
_RANDOM_FAMILIES = {"gnp", "tree", "planted-clique"}


def _frac(x, name):
    try:
        return Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(10 ** 9)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"parameter {name!r} is not a number: {x!r}") from None


@dataclass
class ExperimentConfig:
    stage: str
    seed: int
    instances: list[dict]
    params: dict = field(default_factory=dict)
    mode: str = "desk"
    name: str = "experiment"
    out: Optional[str] = None

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ConfigError(f"stage must be one of {', '.join(STAGES)}, got {self.stage!r}")
        if self.mode not in ("paper", "desk"):
            raise ConfigError(f"mode must be 'paper' or 'desk', got {self.mode!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    @classmethod
    def from_dict(cls, obj: dict, seed: Optional[int] = None, mode: Optional[str] = None, out=None):
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(obj) - {"name", "stage", "mode", "seed", "generator", "instances", "params", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "stage" not in obj:
            raise ConfigError("config needs a 'stage'")
        base = obj.get("seed") if seed is None else seed
        if base is None:
            raise ConfigError("a seed is mandatory (config 'seed' or --seed)")
        if "generator" in obj and "instances" in obj:
            raise ConfigError("give either 'generator' or 'instances', not both")
        if "generator" in obj:
            gen = dict(obj["generator"])
            count = gen.pop("count", 1)
            if not isinstance(count, int) or count < 0:
                raise ConfigError("generator count must be a non-negative integer")
            specs = [dict(gen) for _ in range(count)]
        else:
            specs = [dict(s) for s in obj.get("instances", [])]
        for i, spec in enumerate(specs):
            if not isinstance(spec, dict) or "family" not in spec:
                raise ConfigError(f"instance {i} needs a 'family'")
            if "seed" not in spec and spec["family"] in _RANDOM_FAMILIES:
                spec["seed"] = base + i
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'params' must be an object")
        return cls(
            stage=obj["stage"], seed=base, instances=specs, params=params,
            mode=mode or obj.get("mode", "desk"), name=obj.get("name", "experiment"),
            out=out or obj.get("out"),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name, "stage": self.stage, "mode": self.mode, "seed": self.seed,
            "instances": self.instances, "params": self.params,
        }


def load_config(path, seed=None, mode=None, out=None) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} line {exc.lineno}: {exc.msg}") from exc
    return ExperimentConfig.from_dict(obj, seed=seed, mode=mode, out=out)


@dataclass
class RunReport:
    config: dict
    rows: list[dict]
    histogram: dict
    failures: list[dict]
    certificates: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, timings: bool = True) -> dict:
        rows = self.rows if timings else [{k: v for k, v in r.items() if k != "wall_ms"} for r in self.rows]
        return {
            "config": self.config,
            "instances": rows,
            "histogram": self.histogram,
            "failures": self.failures,
        }


def _stage_params(cfg_params: dict, keys: dict) -> dict:
    """Fill defaults; integers and booleans pass through, other numbers become fractions."""
    extra = set(cfg_params) - set(keys)
    if extra:
        raise ConfigError(f"unknown parameters for this stage: {', '.join(sorted(extra))}")
    out = {}
    for key, default in keys.items():
        val = cfg_params.get(key, default)
        out[key] = val if val is None or isinstance(val, (bool, int)) else _frac(val, key)
    return out


def _run_stage(G: Graph, stage: str, mode: str, params: dict):
    """Run one stage; returns ``(branch, certificate-or-None, payload)``."""
    if stage == "unmated":
        q = _stage_params(params, {"K": 2, "eps1": "1/2", "eps2": "1/2", "d": None, "peel": False})
        d = q["d"] if q["d"] is not None else density(G)
        H = peel_to_min_degree(G).graph if q["peel"] else G
        cert = unmated_dichotomy(H, MateParams(q["K"], d, q["eps1"], q["eps2"]))
        return cert.branch, cert, None
    if stage == "dichotomy":
        q = _stage_params(params, {"K": 2, "k": 3, "eps1": "2/5", "eps2": "9/10"})
        cert = dense_bipartite_minor(G, DichotomyParams(int(q["K"]), int(q["k"]), q["eps1"], q["eps2"], mode))
        return cert.branch, cert, None
    if stage == "increment":
        q = _stage_params(params, {
            "C": None, "D": None, "D_factor": None, "k_coeff": 1, "k_min": 2, "k_max": None,
            "K": None, "eps1": None, "eps2": None,
        })
        if (q["D"] is None) == (q["D_factor"] is None):
            raise ConfigError("increment needs exactly one of 'D' and 'D_factor'")
        D = q["D"] if q["D"] is not None else q["D_factor"] * density(G)
        if q["C"] is None:
            q["C"] = PAPER_C if mode == "paper" else Fraction(1, 2)
        p = IncrementParams(
            C=q["C"], D=D, mode=mode, k_coeff=q["k_coeff"], k_min=int(q["k_min"]),
            k_max=None if q["k_max"] is None else int(q["k_max"]),
            K=None if q["K"] is None else int(q["K"]), eps1=q["eps1"], eps2=q["eps2"],
        )
        outcome = density_increment(G, p)
        return outcome.tag, outcome.certificate, {"iterations": _enc(outcome.iterations)}
    q = _stage_params(params, {"t": 5, "max_vertices": 12})
    model = clique_minor_oracle(G, int(q["t"]), max_vertices=int(q["max_vertices"]))
    if model is None:
        return f"no_K{int(q['t'])}", None, {"model": None}
    return f"K{int(q['t'])}", None, {"model": model_to_json(model)}


def run_instance(args) -> dict:
    """Run one instance; never raises for per-instance failures."""
    idx, spec, stage, mode, params = args
    iid = f"{idx:05d}"
    row: dict[str, Any] = {"instance_id": iid, "spec": spec}
    t0 = time.perf_counter()
    G = None
    try:
        G = generate_graph(spec)
        row.update(n=G.n, m=G.num_edges, density=str(density(G)) if G.n else "0")
        branch, cert, payload = _run_stage(G, stage, mode, params)
        row["branch"] = branch
        if cert is not None:
            verdict = verify(cert)
            row["verified"] = verdict.ok
            text = dumps(cert)
            row["certificate"] = content_id(cert)
            row["_cert_text"] = text
            if not verdict.ok:
                row["error"] = verdict.report()
        else:
            model = payload.get("model")
            if model is not None:
                from mdl.minors import model_from_json

                row["verified"] = bool(verify_model(G, model_from_json(model)))
            else:
                row["verified"] = True
        if payload:
            row["payload"] = payload
    except ConfigError:
        raise
    except (DomainError, LemmaViolation, ResourceLimitError, MDLError) as exc:
        row.setdefault("branch", "error")
        row["verified"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
        inst = getattr(exc, "instance", None)
        row["instance"] = inst if inst else ({"graph": format_graph(G)} if G is not None else {"spec": spec})
    row.setdefault("n", 0)
    row.setdefault("m", 0)
    row.setdefault("density", "0")
    row["stage"] = stage
    row["wall_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return row


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, out=None) -> RunReport:
    """Run every instance, verify every certificate and write the outputs (if ``out``)."""
    if jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    tasks = [(i, spec, cfg.stage, cfg.mode, cfg.params) for i, spec in enumerate(cfg.instances)]
    if jobs == 1 or len(tasks) <= 1:
        rows = [run_instance(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_instance, tasks))
    rows.sort(key=lambda r: r["instance_id"])
    certs = {}
    for r in rows:
        text = r.pop("_cert_text", None)
        if text is not None:
            certs[r["certificate"]] = text
    hist: dict[str, int] = {}
    for r in rows:
        hist[r["branch"]] = hist.get(r["branch"], 0) + 1
    failures = [
        {"instance_id": r["instance_id"], "error": r.get("error", "unverified"), "instance": r.get("instance")}
        for r in rows if not r["verified"]
    ]
    report = RunReport(cfg.to_dict(), rows, dict(sorted(hist.items())), failures, certs)
    target = out or cfg.out
    if target:
        write_outputs(report, Path(target))
    return report


def write_outputs(report: RunReport, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "certs").mkdir(exist_ok=True)
    for cid, text in report.certificates.items():
        (out / "certs" / f"{cid}.json").write_text(text + "\n")
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in report.rows:
            w.writerow([r["instance_id"], r["n"], r["m"], r["density"], r["stage"], r["branch"], r["verified"], r["wall_ms"]])
