"""Command line: ``mdl gen | run | verify | oracle``.

Exit codes: 0 success, 1 verification failure, 2 config or parse error.
``MDL_LOG`` sets the log level (``DEBUG``, ``INFO``, ``WARNING``, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from mdl.certificates import loads, verify
from mdl.errors import CertificateParseError, ConfigError, DomainError, ResourceLimitError
from mdl.generators import FAMILIES, generate_graph
from mdl.graph import density, format_graph, load_graph
from mdl.harness import ExperimentConfig, load_config, run_experiment
from mdl.minors import clique_minor_oracle, model_to_json, verify_model

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _setup_logging():
    level = os.environ.get("MDL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _parse_kv(pairs):
    spec = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            spec[key] = json.loads(val)
        except json.JSONDecodeError:
            spec[key] = val
    return spec


def _config(args) -> ExperimentConfig:
    if args.config:
        return load_config(args.config, seed=args.seed, mode=args.mode, out=args.out)
    raise ConfigError("--config is required")


def cmd_gen(args) -> int:
    if args.config:
        specs = _config(args).instances
    else:
        if not args.family:
            raise ConfigError("give --config or --family")
        spec = {"family": args.family, **_parse_kv(args.param)}
        if args.seed is not None:
            spec.setdefault("seed", args.seed)
        specs = [spec]
    graphs = [generate_graph(s) for s in specs]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, G in enumerate(graphs):
            (out / f"{i:05d}.graph").write_text(format_graph(G))
        print(f"wrote {len(graphs)} graph(s) to {out}")
    else:
        for G in graphs:
            sys.stdout.write(format_graph(G))
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _config(args)
    report = run_experiment(cfg, jobs=args.jobs, out=args.out or cfg.out)
    for r in report.rows:
        mark = "ok" if r["verified"] else "FAIL"
        print(f"{r['instance_id']} n={r['n']} m={r['m']} {r['stage']}/{r['branch']} {mark}")
    print("histogram: " + ", ".join(f"{k}={v}" for k, v in report.histogram.items()))
    if report.failures:
        print(f"{len(report.failures)} instance(s) failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            cert = loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        verdict = verify(cert)
        print(f"{path}:")
        print(verdict.report())
        if not verdict:
            status = EXIT_FAIL
    return status


def cmd_oracle(args) -> int:
    if args.graph:
        try:
            G = load_graph(args.graph)
        except OSError as exc:
            raise ConfigError(f"cannot read {args.graph}: {exc}") from exc
    else:
        if not args.family:
            raise ConfigError("give --graph or --family")
        spec = {"family": args.family, **_parse_kv(args.param)}
        if args.seed is not None:
            spec.setdefault("seed", args.seed)
        G = generate_graph(spec)
    model = clique_minor_oracle(G, args.t, max_vertices=args.max_vertices)
    result = {"n": G.n, "m": G.num_edges, "density": str(density(G)) if G.n else "0", "t": args.t}
    if model is None:
        result["model"] = None
        print(json.dumps(result, sort_keys=True))
        return EXIT_OK
    result["model"] = model_to_json(model)
    ok = bool(verify_model(G, model))
    result["verified"] = ok
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (JSON)")
    common.add_argument("--seed", type=int, help="base seed, overrides the config")
    common.add_argument("--out", help="output directory")
    common.add_argument("--mode", choices=("paper", "desk"), help="constant regime, overrides the config")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    ap = argparse.ArgumentParser(prog="mdl", description="Bounded minors, dense subgraphs and their certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate graphs")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter (repeatable)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", parents=[common], help="run an experiment config")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", parents=[common], help="verify certificate files")
    v.add_argument("paths", nargs="+")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", parents=[common], help="exhaustive K_t-minor search on a small graph")
    o.add_argument("--graph", help="graph file in 'p n m' / 'e u v' format")
    o.add_argument("--family", choices=FAMILIES)
    o.add_argument("--param", action="append", metavar="KEY=VALUE")
    o.add_argument("-t", type=int, default=5, help="clique size")
    o.add_argument("--max-vertices", type=int, default=12)
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CertificateParseError) as exc:
        where = ""
        if isinstance(exc, CertificateParseError):
            where = "".join(f" {k}={v}" for k, v in (("field", exc.field), ("line", exc.line)) if v is not None)
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
