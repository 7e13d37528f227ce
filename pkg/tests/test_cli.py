import csv
import json

import numpy as np
import pytest

from qlow.cli import (
    DEFAULT_SEED,
    REPRODUCIBLE,
    _default_manifest,
    main,
    mixer_from_manifest,
    problem_from_manifest,
    search_from_manifest,
    validate_manifest,
)
from qlow.errors import ConfigError, NumericError
from qlow.laplacians import BallCut, CompleteGraph, CustomSparse, WeightedHypercube


def write_manifest(tmp_path, payload, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SOLVE_UNCOUPLED = {
    "experiment": "solve",
    "problem": {"family": "uncoupled", "n": 4, "dist": "binary", "seed": 3},
    "search": {"resolution": [16, 16], "top_k": 2},
}


def test_solve_prints_result_json(tmp_path, capsys):
    path = write_manifest(tmp_path, SOLVE_UNCOUPLED)
    assert main(["solve", "--manifest", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["n"] == 4 and out["p"] == 1
    assert out["seed"] == DEFAULT_SEED
    assert out["ground_prob"] > 0.95
    assert len(out["argmax_bitstring"]) == 4
    assert set(out["argmax_bitstring"]) <= {"0", "1"}
    assert out["argmax_value"] == pytest.approx(-4.0, abs=1e-6)
    assert out["ratio_flag"] is None


def test_solve_writes_out_directory(tmp_path, capsys):
    path = write_manifest(tmp_path, SOLVE_UNCOUPLED)
    out_dir = tmp_path / "res"
    assert main(["solve", "--manifest", path, "--out", str(out_dir)]) == 0
    stdout_doc = json.loads(capsys.readouterr().out)
    with open(out_dir / "solve.json") as fh:
        assert json.load(fh) == stdout_doc


def test_solve_requires_solve_experiment(tmp_path, capsys):
    payload = dict(SOLVE_UNCOUPLED, experiment="sample")
    path = write_manifest(tmp_path, payload)
    assert main(["solve", "--manifest", path]) == 2
    assert "config error" in capsys.readouterr().err


def test_constant_problem_sets_ratio_flag(tmp_path, capsys):
    payload = {
        "experiment": "solve",
        "problem": {"family": "terms", "n": 2, "terms": [{"qubits": [], "coeff": 2.0}]},
        "search": {"resolution": [8, 8], "top_k": 1},
    }
    path = write_manifest(tmp_path, payload)
    assert main(["solve", "--manifest", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["approx_ratio"] is None
    assert out["ratio_flag"] == "undefined-constant-problem"
    assert out["mean"] == pytest.approx(2.0, abs=1e-9)


def test_malformed_json_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["solve", "--manifest", str(path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_missing_manifest_is_config_error(tmp_path, capsys):
    assert main(["solve", "--manifest", str(tmp_path / "nope.json")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_schema_violations_report_json_path(tmp_path, capsys):
    payload = dict(SOLVE_UNCOUPLED, problem={"family": "mystery", "n": 4})
    path = write_manifest(tmp_path, payload)
    assert main(["solve", "--manifest", path]) == 2
    assert "$.problem.family" in capsys.readouterr().err

    payload = dict(SOLVE_UNCOUPLED, shots=100)
    path = write_manifest(tmp_path, payload)
    assert main(["solve", "--manifest", path]) == 2
    assert "shots" in capsys.readouterr().err


def test_qubit_cap_is_resource_exit(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QLOW_MAX_QUBITS", "4")
    payload = {
        "experiment": "solve",
        "problem": {"family": "ramp", "n": 5},
        "search": {"resolution": [8, 8], "top_k": 1},
    }
    path = write_manifest(tmp_path, payload)
    assert main(["solve", "--manifest", path]) == 3
    assert "resource cap" in capsys.readouterr().err


def test_numeric_failure_is_exit_four(tmp_path, capsys, monkeypatch):
    import qlow.cli as cli_mod

    def boom(*a, **k):
        raise NumericError("synthetic instability")

    monkeypatch.setattr(cli_mod, "optimize_schedule", boom)
    path = write_manifest(tmp_path, SOLVE_UNCOUPLED)
    assert main(["solve", "--manifest", path]) == 4
    assert "numeric failure" in capsys.readouterr().err


SAMPLE_EXACT = {
    "experiment": "sample",
    "problem": {"family": "uncoupled", "n": 4, "dist": "binary", "seed": 3},
    "schedule": {"gammas": [-0.7853981633974483], "betas": [0.7853981633974483]},
}


def test_sample_exact_schedule_hits_ground_every_shot(tmp_path, capsys):
    path = write_manifest(tmp_path, SAMPLE_EXACT)
    assert main(["sample", "--manifest", path, "--shots", "6"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    assert len(set(lines)) == 1  # the state is a single basis state
    bits, value = lines[0].split(",")
    assert float(value) == pytest.approx(-4.0, abs=1e-9)
    assert len(bits) == 4


def test_sample_deterministic_under_seed(tmp_path, capsys):
    payload = dict(SAMPLE_EXACT, schedule={"gammas": [-0.3], "betas": [0.4]})
    path = write_manifest(tmp_path, payload)
    assert main(["sample", "--manifest", path, "--shots", "20", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert main(["sample", "--manifest", path, "--shots", "20", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first
    assert main(["sample", "--manifest", path, "--shots", "20", "--seed", "10"]) == 0
    assert capsys.readouterr().out != first


def test_sample_zero_shots_and_out_file(tmp_path, capsys):
    path = write_manifest(tmp_path, SAMPLE_EXACT)
    out_dir = tmp_path / "s"
    assert main(
        ["sample", "--manifest", path, "--shots", "0", "--out", str(out_dir)]
    ) == 0
    assert capsys.readouterr().out == ""
    assert (out_dir / "samples.csv").read_text() == "bitstring,value\n"


def test_sample_rejects_negative_shots(tmp_path, capsys):
    path = write_manifest(tmp_path, SAMPLE_EXACT)
    assert main(["sample", "--manifest", path, "--shots", "-1"]) == 2


def strip_wall_ms(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    drop = rows[0].index("wall_ms")
    return [[c for i, c in enumerate(r) if i != drop] for r in rows]


def test_reproduce_fig2_is_deterministic(tmp_path, capsys):
    manifest = write_manifest(
        tmp_path,
        {"experiment": "fig2", "params": {"n": 5, "n_seeds": 300}},
    )
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    assert main(["reproduce", "fig2", "--manifest", manifest, "--out", str(d1)]) == 0
    assert main(["reproduce", "fig2", "--manifest", manifest, "--out", str(d2)]) == 0
    capsys.readouterr()
    assert strip_wall_ms(d1 / "fig2.csv") == strip_wall_ms(d2 / "fig2.csv")
    assert len(strip_wall_ms(d1 / "fig2.csv")) == 8  # header + 7 rows


def test_reproduce_rejects_mismatched_manifest(tmp_path, capsys):
    manifest = write_manifest(tmp_path, {"experiment": "fig2", "params": {}})
    assert main(["reproduce", "scale", "--manifest", manifest]) == 2
    assert "does not match" in capsys.readouterr().err


def test_reproduce_unknown_id_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["reproduce", "nonsense"])
    assert exc.value.code == 2


def test_default_manifests_ship_valid():
    for ident in REPRODUCIBLE:
        manifest = _default_manifest(ident)
        assert manifest["experiment"] == ident


FAMILY_SPECS = [
    ({"family": "ramp", "n": 4}, 4),
    ({"family": "uncoupled", "n": 3, "dist": "gaussian", "seed": 1}, 3),
    ({"family": "chain", "n": 4, "j2": 0.5}, 4),
    ({"family": "grid", "rows": 2, "cols": 2, "j2": 1.0}, 4),
    ({"family": "maxcut", "n": 4, "fraction": 0.5, "j2": 1.0, "seed": 0}, 4),
    ({"family": "spike", "n": 8, "a": 0.5, "b": 1.25}, 8),
    ({"family": "bush", "n": 4}, 4),
    ({"family": "kspin", "n": 3, "k": 3}, 3),
    ({"family": "conflicted", "n": 4, "epsilon": 0.5, "delta": 3.0}, 4),
    ({"family": "fisher", "n": 4, "seed": 2}, 4),
    ({"family": "dense", "n": 2, "values": [0.0, 1.0, -1.0, 2.0]}, 2),
    (
        {"family": "terms", "n": 3, "terms": [{"qubits": [0, 2], "coeff": -1.0}]},
        3,
    ),
]


@pytest.mark.parametrize("spec,n", FAMILY_SPECS)
def test_problem_family_coverage(spec, n):
    validate_manifest({"experiment": "solve", "problem": spec})
    prob = problem_from_manifest(spec)
    assert prob.n == n
    assert prob.dense.size == 1 << n


def test_problem_spec_errors():
    with pytest.raises(ConfigError):
        problem_from_manifest({"family": "mystery"})
    with pytest.raises(ConfigError):
        problem_from_manifest({"family": "ramp"})  # missing n


def test_mixer_coverage():
    assert isinstance(mixer_from_manifest(None, 3), WeightedHypercube)
    weighted = mixer_from_manifest({"kind": "hypercube", "b": [1.0, 0.0, 2.0]}, 3)
    assert weighted.b == (1.0, 0.0, 2.0)
    assert isinstance(mixer_from_manifest({"kind": "complete"}, 3), CompleteGraph)
    cut = mixer_from_manifest({"kind": "ballcut", "radius": 2}, 4)
    assert isinstance(cut, BallCut) and cut.radius == 2 and cut.center == 0
    custom = mixer_from_manifest(
        {"kind": "custom", "edges": [[0, 1], [1, 2, 0.5]]}, 2
    )
    assert isinstance(custom, CustomSparse)
    with pytest.raises(ConfigError):
        mixer_from_manifest({"kind": "torus"}, 3)


def test_search_config_errors():
    with pytest.raises(ConfigError):
        search_from_manifest({"stride": 3})
    cfg = search_from_manifest({"resolution": [8, 8], "method": "simplex"})
    assert cfg.resolution == (8, 8) and cfg.method == "simplex"
