import csv
import json

import networkx as nx
import pytest

from mdl.certificates import loads
from mdl.cli import main
from mdl.errors import ConfigError
from mdl.generators import generate_graph
from mdl.harness import CSV_COLUMNS, ExperimentConfig, run_experiment

SWEEP = {
    "name": "gnp-sweep", "stage": "dichotomy", "mode": "desk", "seed": 100,
    "generator": {"family": "gnp", "n": 70, "p": 0.35, "count": 100},
    "params": {"K": 2, "k": 3, "eps1": "2/5", "eps2": "9/10"},
}

FIXTURES_11 = [
    {"family": "path", "n": 11},
    {"family": "cycle", "n": 11},
    {"family": "tree", "n": 11, "seed": 3},
    {"family": "complete-bipartite", "a": 2, "b": 9},
    {"family": "complete-bipartite", "a": 3, "b": 8},
    {"family": "gnp", "n": 11, "p": 0.25, "seed": 4},
    {"family": "complete", "n": 11},
]


def write(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_sweep_histogram(tmp_path):
    cfg = ExperimentConfig.from_dict(SWEEP)
    rep = run_experiment(cfg, out=tmp_path / "out")
    assert rep.ok and len(rep.rows) == 100
    assert sum(rep.histogram.values()) == 100
    assert all(r["verified"] for r in rep.rows)
    certs = list((tmp_path / "out" / "certs").glob("*.json"))
    assert len(certs) == len({r["certificate"] for r in rep.rows})
    for path in certs[:10]:
        assert loads(path.read_text()).stage == "dichotomy"
    with open(tmp_path / "out" / "summary.csv") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 101


def test_oracle_planar_fixtures():
    cfg = ExperimentConfig.from_dict({
        "stage": "oracle", "seed": 0, "instances": FIXTURES_11, "params": {"t": 5, "max_vertices": 11},
    })
    rep = run_experiment(cfg)
    assert rep.ok
    for spec, row in zip(FIXTURES_11, rep.rows):
        G = generate_graph(spec)
        assert G.n == 11
        H = nx.Graph(list(G.edges()))
        H.add_nodes_from(range(G.n))
        if nx.check_planarity(H)[0]:
            assert row["branch"] == "no_K5"
    assert rep.rows[-1]["branch"] == "K5"


def test_empty(tmp_path):
    cfg = ExperimentConfig.from_dict({"stage": "dichotomy", "seed": 1, "instances": []})
    rep = run_experiment(cfg, out=tmp_path)
    assert rep.ok and rep.rows == [] and rep.histogram == {}
    assert main(["run", "--config", str(write(tmp_path, {"stage": "unmated", "seed": 1, "instances": []}))]) == 0


def test_jobs_do_not_change_report(tmp_path):
    cfg = dict(SWEEP, generator=dict(SWEEP["generator"], count=12))
    a = run_experiment(ExperimentConfig.from_dict(cfg), jobs=1)
    b = run_experiment(ExperimentConfig.from_dict(cfg), jobs=2)
    dump = lambda r: json.dumps(r.to_json(timings=False), sort_keys=True)
    assert dump(a) == dump(b)


def test_seed_override_and_derivation():
    cfg = ExperimentConfig.from_dict(SWEEP, seed=5)
    assert [s["seed"] for s in cfg.instances[:3]] == [5, 6, 7]
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"stage": "dichotomy", "instances": []})


@pytest.mark.parametrize("obj", [
    {"stage": "bogus", "seed": 1},
    {"stage": "dichotomy", "seed": -1},
    {"stage": "dichotomy", "seed": 1, "extra": 1},
    {"stage": "dichotomy", "seed": 1, "mode": "fast"},
    {"stage": "dichotomy", "seed": 1, "generator": {"family": "gnp"}, "instances": []},
    {"stage": "dichotomy", "seed": 1, "instances": [{"n": 3}]},
])
def test_bad_configs(obj):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(obj)


def test_unknown_stage_param():
    cfg = ExperimentConfig.from_dict({"stage": "dichotomy", "seed": 1, "instances": [{"family": "complete", "n": 5}],
                                      "params": {"kk": 3}})
    with pytest.raises(ConfigError):
        run_experiment(cfg)


def test_increment_stage():
    cfg = ExperimentConfig.from_dict({
        "stage": "increment", "seed": 0, "instances": [{"family": "polarity", "q": 17, "seed": 2}],
        "params": {"C": "1/2", "D_factor": "5/2", "k_min": 3, "k_max": 5, "K": 4, "eps1": "2/5", "eps2": "9/10"},
    })
    rep = run_experiment(cfg)
    assert rep.ok, rep.failures
    assert rep.rows[0]["payload"]["iterations"]


class TestCLI:
    def test_run_and_verify(self, tmp_path, capsys):
        cfg = write(tmp_path, dict(SWEEP, generator=dict(SWEEP["generator"], count=3)))
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out), "--jobs", "2"]) == 0
        report = json.loads((out / "report.json").read_text())
        assert len(report["instances"]) == 3
        certs = sorted((out / "certs").glob("*.json"))
        assert main(["verify", *map(str, certs)]) == 0
        assert "PASS" in capsys.readouterr().out.upper()

    def test_failure_exit(self, tmp_path):
        # paper-mode constants refuse a small graph: the run records a failure
        cfg = write(tmp_path, {"stage": "dichotomy", "mode": "paper", "seed": 0,
                               "instances": [{"family": "complete", "n": 6}]})
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 1
        report = json.loads((out / "report.json").read_text())
        assert report["failures"] and report["failures"][0]["instance"]

    def test_config_errors_exit_2(self, tmp_path, capsys):
        assert main(["run", "--config", str(write(tmp_path, {"stage": "x", "seed": 1}))]) == 2
        assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  oops\n}")
        assert main(["run", "--config", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_verify_corrupted(self, tmp_path):
        cfg = write(tmp_path, {"stage": "unmated", "seed": 0, "instances": [{"family": "complete", "n": 8}],
                               "params": {"K": 2, "d": 4, "eps1": "1/2", "eps2": "1/2"}})
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        (path,) = (out / "certs").glob("*.json")
        obj = json.loads(path.read_text())
        obj["claimed"]["e"] = obj["claimed"]["e"] + 5
        path.write_text(json.dumps(obj))
        assert main(["verify", str(path)]) == 1
        path.write_text("{}")
        assert main(["verify", str(path)]) == 2

    def test_gen_and_oracle(self, tmp_path, capsys):
        assert main(["gen", "--family", "petersen"]) == 0
        assert capsys.readouterr().out.startswith("p 10 15")
        assert main(["gen", "--family", "gnp", "--param", "n=10", "--param", "p=0.5", "--seed", "3",
                     "--out", str(tmp_path / "g")]) == 0
        capsys.readouterr()
        (gfile,) = (tmp_path / "g").glob("*.graph")
        assert main(["oracle", "--graph", str(gfile), "-t", "3"]) == 0
        res = json.loads(capsys.readouterr().out)
        assert res["verified"] and res["n"] == 10
        assert main(["oracle", "--family", "petersen", "-t", "5"]) == 0
        assert main(["oracle", "--family", "gnp", "--param", "n=20", "--param", "p=0.5", "--seed", "1"]) == 2
        assert main(["gen", "--family", "gnp", "--param", "n=10"]) == 2
