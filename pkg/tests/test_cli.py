import json

import pytest

from fraisse.classes import builtin
from fraisse.cli import main
from fraisse.config import identity_interpretation, parse_formula
from fraisse.config import InterpretationMap


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# -- exit code 0 paths ------------------------------------------------------------------


def test_enumerate(capsys):
    code, data = run_json(capsys, "enumerate", "--class", "G", "--n", "3")
    assert code == 0
    assert data["count"] == 4
    assert len(data["structures"]) == 4


def test_check_class_all_verified(capsys):
    code, data = run_json(capsys, "check-class", "--class", "G", "--bound", "3")
    assert code == 0
    assert set(data["reports"]) == {
        "hereditary", "joint-embedding", "amalgamation", "strong-amalgamation"
    }
    assert all(r["status"] == "verified" for r in data["reports"].values())


def test_types(capsys):
    code, data = run_json(capsys, "types", "--class", "LO^3")
    assert code == 0
    assert data["count"] == 8


def test_generic_model_closed(capsys):
    code, data = run_json(
        capsys, "generic-model", "--class", "G", "--level", "2", "--size-cap", "64"
    )
    assert code == 0
    assert data["closed"] is True
    assert data["model"]["size"] == 22


def test_ramsey_box_bound(capsys):
    code, data = run_json(capsys, "ramsey-box", "--k", "2", "--colors", "2", "--m", "2")
    assert code == 0
    assert data["bound"] == 9
    assert data["directions"] == 5


def test_ramsey_box_demo_with_seed(capsys):
    code, data = run_json(
        capsys, "ramsey-box", "--k", "1", "--colors", "2", "--m", "2", "--seed", "0"
    )
    assert code == 0
    assert data["witness"] is not None


def test_dagger(capsys):
    code, data = run_json(capsys, "dagger")
    assert code == 0
    assert data["pair_types"] == 12
    assert data["base_bound"] == 13


def test_rank_table(capsys):
    code, data = run_json(capsys, "rank", "--class", "LO", "--n", "2")
    assert code == 0
    exacts = [(r["n"], r["exact"]) for r in data["results"]]
    assert exacts == [(1, 0), (2, 3)]


# -- exit code 1 (refuted) ------------------------------------------------------------


def test_self_sim_refuted(capsys):
    code, data = run_json(capsys, "self-sim", "--class", "E", "--bound", "3")
    assert code == 1
    assert data["report"]["status"] == "refuted"


def test_self_sim_verified(capsys):
    code, data = run_json(capsys, "self-sim", "--class", "LO", "--bound", "3")
    assert code == 0


# -- exit code 2 (inconclusive / cap) ---------------------------------------------------


def test_generic_model_cap_hit(capsys):
    code, data = run_json(
        capsys, "generic-model", "--class", "LO*G", "--level", "1", "--size-cap", "32"
    )
    assert code == 2
    assert data["closed"] is False


# -- exit code 3 (usage) ----------------------------------------------------------------


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "no-such-command")
    assert code == 3


def test_missing_required_argument(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "3")
    assert code == 3
    assert "error" in err


def test_bad_class_expression(capsys):
    code, _, err = run(capsys, "enumerate", "--class", "NOPE", "--n", "2")
    assert code == 3


def test_missing_config_file(capsys, tmp_path):
    model_path = tmp_path / "m.json"
    model_path.write_text("{}")
    code, _, err = run(
        capsys, "verify-config", "--config", str(tmp_path / "absent.json"),
        "--target", str(model_path),
    )
    assert code == 3


# -- verify-config via files --------------------------------------------------------------


@pytest.fixture()
def config_files(tmp_path, graph_model):
    interp = identity_interpretation(builtin("G"))
    config_path = tmp_path / "interp.json"
    target_path = tmp_path / "target.json"
    config_path.write_text(json.dumps(interp.to_json()))
    target_path.write_text(graph_model.dumps())
    return str(config_path), str(target_path)


def test_verify_config_verified(capsys, config_files):
    config_path, target_path = config_files
    code, data = run_json(
        capsys, "verify-config", "--config", config_path,
        "--target", target_path, "--bound", "3",
    )
    assert code == 0
    assert data["verdict"] == "verified"
    assert data["recheck"] == "verified"


def test_verify_config_deterministic_and_jobs_equivalent(capsys, config_files):
    config_path, target_path = config_files
    argv = ("verify-config", "--config", config_path, "--target", target_path)
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2  # byte-identical reruns
    _, out4, _ = run(capsys, *argv, "--jobs", "4")
    assert json.loads(out4) == json.loads(out1)


def test_verify_config_refuted(capsys, tmp_path, graph_model):
    # reading the equivalence relation as inequality misses reflexive members
    interp = InterpretationMap(
        index_spec=builtin("E"),
        target_signature=graph_model.structure.signature,
        tuple_length=1,
        parameters=(),
        formulas=(("E", parse_formula("!(0.0 = 1.0)")),),
    )
    config_path = tmp_path / "bad.json"
    target_path = tmp_path / "target.json"
    config_path.write_text(json.dumps(interp.to_json()))
    target_path.write_text(graph_model.dumps())
    code, data = run_json(
        capsys, "verify-config", "--config", str(config_path),
        "--target", str(target_path), "--bound", "3",
    )
    assert code == 1
    assert data["verdict"] == "refuted"


# -- output shape ------------------------------------------------------------------------


def test_pretty_flag_changes_bytes_not_content(capsys):
    _, plain, _ = run(capsys, "types", "--class", "G")
    _, pretty, _ = run(capsys, "types", "--class", "G", "--pretty")
    assert plain != pretty
    assert json.loads(plain) == json.loads(pretty)


def test_timing_flag_adds_field(capsys):
    _, plain = run_json(capsys, "types", "--class", "G")
    _, timed = run_json(capsys, "types", "--class", "G", "--timing")
    assert "elapsed_seconds" not in plain
    assert "elapsed_seconds" in timed


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "0.1.0"
