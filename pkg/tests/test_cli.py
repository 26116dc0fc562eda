import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from factlaw import painting_from_doc, painting_to_doc
from factlaw.cli import main
from factlaw.serialize import dump_json, load_json, sha256_of_file

from conftest import REFERENCE_SPEC


@pytest.fixture()
def spec_file(tmp_path):
    path = tmp_path / "spec.json"
    dump_json(REFERENCE_SPEC.to_doc(), str(path))
    return str(path)


@pytest.fixture()
def painting_file(tmp_path, spec_file):
    path = tmp_path / "painting.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(path)]) == 0
    return str(path)


@pytest.fixture()
def form_file(tmp_path, reference_form):
    path = tmp_path / "form.json"
    dump_json(reference_form.to_doc(), str(path))
    return str(path)


def read_error(capsys):
    err = capsys.readouterr().err.strip().splitlines()[-1]
    return json.loads(err)


# --- gen-painting -----------------------------------------------------------


def test_gen_painting_writes_painting_and_manifest(
    tmp_path, spec_file, reference_painting
):
    out = tmp_path / "p.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(out)]) == 0
    assert painting_from_doc(load_json(str(out))) == reference_painting
    manifest = load_json(str(out) + ".manifest.json")
    assert manifest["command"] == "gen-painting"
    assert manifest["inputs"] == {spec_file: sha256_of_file(spec_file)}
    assert manifest["outputs"] == {str(out): sha256_of_file(str(out))}
    assert manifest["seeds"] == [7]


def test_gen_painting_is_bitwise_deterministic(tmp_path, spec_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(a)]) == 0
    assert main(["gen-painting", "--spec", spec_file, "--out", str(b)]) == 0
    assert sha256_of_file(str(a)) == sha256_of_file(str(b))


def test_gen_painting_seed_flag_overrides_spec(tmp_path, spec_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(a)]) == 0
    assert (
        main(["gen-painting", "--spec", spec_file, "--out", str(b), "--seed", "8"])
        == 0
    )
    assert load_json(str(a)) != load_json(str(b))


def test_gen_painting_without_any_seed_is_a_config_error(tmp_path, capsys):
    doc = REFERENCE_SPEC.to_doc()
    del doc["seed"]
    spec = tmp_path / "seedless.json"
    dump_json(doc, str(spec))
    out = tmp_path / "p.json"
    assert main(["gen-painting", "--spec", str(spec), "--out", str(out)]) == 2
    record = read_error(capsys)
    assert record["error"] == "config"
    assert not out.exists()


def test_gen_painting_missing_spec_file_is_a_runtime_error(tmp_path, capsys):
    out = tmp_path / "p.json"
    code = main(
        ["gen-painting", "--spec", str(tmp_path / "nope.json"), "--out", str(out)]
    )
    assert code == 1
    assert read_error(capsys)["error"] == "runtime"


# --- play-puzzle ------------------------------------------------------------


def test_play_puzzle_border_game(tmp_path, painting_file):
    report_path = tmp_path / "report.json"
    code = main(
        [
            "play-puzzle",
            "--painting",
            painting_file,
            "--mode",
            "border",
            "--seed",
            "3",
            "--report",
            str(report_path),
        ]
    )
    assert code == 0
    report = load_json(str(report_path))
    assert report["completed_replicas"] == 1
    assert report["placements"] == report["trials"] == 100
    assert report["board_sizes"] == [{"width": 10, "height": 10, "pieces": 100}]
    assert report["mode"] == "border"
    assert (tmp_path / "report.json.manifest.json").exists()


def test_play_puzzle_multi_replica(tmp_path, painting_file):
    report_path = tmp_path / "report.json"
    code = main(
        [
            "play-puzzle",
            "--painting",
            painting_file,
            "--mode",
            "border",
            "--replicas",
            "3",
            "--seed",
            "4",
            "--report",
            str(report_path),
        ]
    )
    assert code == 0
    report = load_json(str(report_path))
    assert report["completed_replicas"] == 3
    assert report["placements"] == 300


def test_play_puzzle_location_rejects_replicas(tmp_path, painting_file, capsys):
    code = main(
        [
            "play-puzzle",
            "--painting",
            painting_file,
            "--mode",
            "location",
            "--replicas",
            "2",
            "--seed",
            "1",
            "--report",
            str(tmp_path / "r.json"),
        ]
    )
    assert code == 2
    assert read_error(capsys)["error"] == "config"


# --- play-prob-game ---------------------------------------------------------


def test_prob_game_csv_columns_and_law(tmp_path, painting_file):
    out = tmp_path / "freq.csv"
    code = main(
        [
            "play-prob-game",
            "--painting",
            painting_file,
            "--draws",
            "200",
            "--seed",
            "5",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["label", "count", "rel_freq", "law_prob", "abs_diff"]
    body = rows[1:]
    assert [r[0] for r in body] == ["1", "2", "3"]
    assert sum(int(r[1]) for r in body) == 200
    assert [r[3] for r in body] == ["0.6", "0.3", "0.1"]
    for _, count, rel_freq, law_prob, abs_diff in body:
        assert float(abs_diff) == pytest.approx(
            abs(float(rel_freq) - float(law_prob))
        )


def test_prob_game_csv_is_deterministic(tmp_path, painting_file):
    args = ["play-prob-game", "--painting", painting_file, "--draws", "500", "--seed", "6"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert sha256_of_file(str(a)) == sha256_of_file(str(b))


def test_prob_game_json_format_uses_rationals(tmp_path, painting_file):
    out = tmp_path / "freq.json"
    code = main(
        [
            "play-prob-game",
            "--painting",
            painting_file,
            "--draws",
            "200",
            "--seed",
            "5",
            "--out",
            str(out),
            "--format",
            "json",
        ]
    )
    assert code == 0
    doc = load_json(str(out))
    assert doc["n_draws"] == 200
    rels = [Fraction(r["rel_freq"]) for r in doc["rows"]]
    assert sum(rels) == 1
    assert [r["law_prob"] for r in doc["rows"]] == ["3/5", "3/10", "1/10"]


# --- validate-space ---------------------------------------------------------


def test_validate_space_passes_and_prints_to_stdout(tmp_path, capsys):
    space = tmp_path / "space.json"
    dump_json(
        {"universe": [1, 2, 3], "law": {"1": "3/5", "2": "3/10", "3": "1/10"}},
        str(space),
    )
    assert main(["validate-space", "--space", str(space)]) == 0
    doc = json.loads(capsys.readouterr().out.strip())
    assert doc["passed"] is True
    assert doc["events"] == 8


def test_validate_space_fails_on_short_norm(tmp_path):
    space = tmp_path / "space.json"
    dump_json(
        {"universe": [1, 2], "law": {"1": "3/5", "2": "3/10"}}, str(space)
    )
    out = tmp_path / "report.json"
    assert main(["validate-space", "--space", str(space), "--out", str(out)]) == 1
    doc = load_json(str(out))
    assert doc["passed"] is False
    failed = [c["name"] for c in doc["checks"] if not c["passed"]]
    assert "norm" in failed


def test_validate_space_rejects_malformed_file(tmp_path, capsys):
    space = tmp_path / "space.json"
    dump_json({"universe": [1], "law": {"9": 1}}, str(space))
    assert main(["validate-space", "--space", str(space)]) == 2
    assert read_error(capsys)["error"] == "config"


# --- lln --------------------------------------------------------------------


def lln_config(tmp_path, **params):
    path = tmp_path / "lln.json"
    dump_json({"command": "lln", "params": params}, str(path))
    return str(path)


def test_lln_meta_probability_from_config(tmp_path):
    out = tmp_path / "mp.json"
    config = lln_config(
        tmp_path,
        operation="meta-probability",
        weights=[1, 1],
        label=1,
        target="1/2",
        epsilon="1/20",
        n_draws=256,
        repetitions=40,
        seed=9,
        out=str(out),
    )
    assert main(["lln", "--config", config]) == 0
    doc = load_json(str(out))
    assert doc["operation"] == "meta-probability"
    assert 0.0 <= doc["estimate"] <= 1.0
    assert doc["epsilon"] == "1/20"
    assert (tmp_path / "mp.json.manifest.json").exists()


def test_lln_jobs_env_var_does_not_change_the_estimate(tmp_path, monkeypatch):
    out_serial = tmp_path / "serial.json"
    config = lln_config(
        tmp_path,
        operation="meta-probability",
        weights=[2, 3],
        label=2,
        epsilon="1/10",
        n_draws=128,
        repetitions=30,
        seed=11,
        out=str(out_serial),
    )
    monkeypatch.delenv("FPL_JOBS", raising=False)
    assert main(["lln", "--config", config]) == 0
    monkeypatch.setenv("FPL_JOBS", "4")
    out_parallel = tmp_path / "parallel.json"
    assert main(["lln", "--config", config, "--out", str(out_parallel)]) == 0
    serial = load_json(str(out_serial))
    parallel = load_json(str(out_parallel))
    assert serial["estimate"] == parallel["estimate"]


def test_lln_bad_jobs_env_var(tmp_path, monkeypatch, capsys):
    config = lln_config(
        tmp_path,
        operation="meta-probability",
        weights=[1, 1],
        label=1,
        epsilon="1/10",
        n_draws=16,
        repetitions=4,
        seed=0,
    )
    monkeypatch.setenv("FPL_JOBS", "many")
    assert main(["lln", "--config", config]) == 2
    assert read_error(capsys)["error"] == "config"


def test_lln_needs_painting_xor_weights(tmp_path, painting_file, capsys):
    both = lln_config(
        tmp_path,
        operation="meta-probability",
        painting=painting_file,
        weights=[1, 1],
        label=1,
        epsilon="1/10",
        n_draws=16,
        repetitions=4,
        seed=0,
    )
    assert main(["lln", "--config", both]) == 2
    neither = lln_config(
        tmp_path,
        operation="meta-probability",
        label=1,
        epsilon="1/10",
        n_draws=16,
        repetitions=4,
        seed=0,
    )
    assert main(["lln", "--config", neither]) == 2


def test_lln_find_n0_certifies(tmp_path):
    out = tmp_path / "n0.json"
    config = lln_config(
        tmp_path,
        operation="find-n0",
        weights=[1, 1],
        label=1,
        target="1/2",
        epsilon="1/10",
        delta=0.05,
        repetitions=200,
        seed=43,
        out=str(out),
    )
    assert main(["lln", "--config", config]) == 0
    doc = load_json(str(out))
    assert doc["n0"] == 128
    assert doc["delta"] == "0.05"


def test_lln_target_defaults_to_the_sampled_law(tmp_path, painting_file):
    out = tmp_path / "mp.json"
    config = lln_config(
        tmp_path,
        operation="meta-probability",
        painting=painting_file,
        label=1,
        epsilon="1/10",
        n_draws=128,
        repetitions=30,
        seed=3,
        out=str(out),
    )
    assert main(["lln", "--config", config]) == 0
    assert load_json(str(out))["target"] == "3/5"


# --- integrate and end-to-end -----------------------------------------------


def test_integrate_recovers_law_via_cli(tmp_path, form_file):
    out = tmp_path / "law.json"
    code = main(
        ["integrate", "--form", form_file, "--seed", "1", "--out", str(out)]
    )
    assert code == 0
    doc = load_json(str(out))
    assert doc["law"] == {"1": "3/5", "2": "3/10", "3": "1/10"}
    assert doc["n_phi_total"] == 100
    assert doc["replicas_used_for_confirmation"] == 3
    manifest = load_json(str(out) + ".manifest.json")
    assert manifest["inputs"] == {form_file: sha256_of_file(form_file)}


def test_integrate_budget_exhaustion_is_a_runtime_error(tmp_path, form_file, capsys):
    code = main(
        [
            "integrate",
            "--form",
            form_file,
            "--seed",
            "1",
            "--max-events",
            "10",
            "--out",
            str(tmp_path / "law.json"),
        ]
    )
    assert code == 1
    record = read_error(capsys)
    assert record["type"] == "BudgetExhausted"


def test_end_to_end_within_tolerance(tmp_path, form_file):
    out = tmp_path / "e2e.json"
    code = main(
        [
            "end-to-end",
            "--form",
            form_file,
            "--draws",
            "20000",
            "--seed",
            "99",
            "--tolerance",
            "1/100",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = load_json(str(out))
    assert doc["within_tolerance"] is True
    assert doc["law"] == {"1": "3/5", "2": "3/10", "3": "1/10"}


def test_end_to_end_tolerance_gate_fails_loudly(tmp_path, form_file):
    out = tmp_path / "e2e.json"
    # 777 draws cannot hit 3/5 exactly, so a sub-ppb tolerance must fail.
    code = main(
        [
            "end-to-end",
            "--form",
            form_file,
            "--draws",
            "777",
            "--seed",
            "1",
            "--tolerance",
            "1/1000000000",
            "--out",
            str(out),
        ]
    )
    assert code == 1
    assert load_json(str(out))["within_tolerance"] is False


# --- config plumbing --------------------------------------------------------


def test_unknown_config_keys_are_rejected(tmp_path, capsys):
    config = tmp_path / "c.json"
    dump_json({"command": "lln", "params": {"bogus": 1}}, str(config))
    assert main(["lln", "--config", str(config)]) == 2
    assert "bogus" in read_error(capsys)["message"]


def test_config_for_wrong_command_is_rejected(tmp_path, form_file, capsys):
    config = tmp_path / "c.json"
    dump_json({"command": "lln", "params": {}}, str(config))
    assert main(["integrate", "--config", str(config)]) == 2


def test_broken_config_json_is_rejected(tmp_path, capsys):
    config = tmp_path / "c.json"
    config.write_text("{not json")
    assert main(["lln", "--config", str(config)]) == 2
    assert read_error(capsys)["error"] == "config"


# --- reproduce --------------------------------------------------------------


def test_reproduce_passes_on_faithful_rerun(tmp_path, spec_file, capsys):
    out = tmp_path / "p.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(out)]) == 0
    capsys.readouterr()
    code = main(["reproduce", "--manifest", str(out) + ".manifest.json"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert f"input {spec_file}: ok" in lines
    assert f"output {out}: ok" in lines
    assert lines[-1] == "reproduce: pass"


def test_reproduce_detects_corrupted_artifact(tmp_path, spec_file, capsys):
    out = tmp_path / "p.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(out)]) == 0
    manifest_path = str(out) + ".manifest.json"
    manifest = load_json(manifest_path)
    manifest["outputs"][str(out)] = "0" * 64
    dump_json(manifest, manifest_path)
    capsys.readouterr()
    code = main(["reproduce", "--manifest", manifest_path])
    assert code == 1
    text = capsys.readouterr().out
    assert "DIGEST MISMATCH" in text
    assert text.strip().splitlines()[-1] == "reproduce: fail"


def test_reproduce_detects_changed_input(tmp_path, spec_file, capsys):
    out = tmp_path / "p.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(out)]) == 0
    doc = load_json(spec_file)
    doc["seed"] = 1234
    dump_json(doc, spec_file)
    capsys.readouterr()
    code = main(["reproduce", "--manifest", str(out) + ".manifest.json"])
    assert code == 1
    text = capsys.readouterr().out
    assert f"input {spec_file}: CHANGED" in text


def test_reproduce_missing_manifest(tmp_path, capsys):
    assert main(["reproduce", "--manifest", str(tmp_path / "no.json")]) == 1
    assert read_error(capsys)["error"] == "runtime"


def test_reproduce_rejects_broken_manifest(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text("{]")
    assert main(["reproduce", "--manifest", str(path)]) == 2


# --- installed entry point --------------------------------------------------


def test_console_script_roundtrip(tmp_path, spec_file):
    out = tmp_path / "p.json"
    proc = subprocess.run(
        ["factlaw", "gen-painting", "--spec", spec_file, "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    inproc = tmp_path / "q.json"
    assert main(["gen-painting", "--spec", spec_file, "--out", str(inproc)]) == 0
    assert sha256_of_file(str(out)) == sha256_of_file(str(inproc))


def test_help_lists_all_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for command in (
        "gen-painting",
        "play-puzzle",
        "play-prob-game",
        "validate-space",
        "lln",
        "integrate",
        "end-to-end",
        "reproduce",
    ):
        assert command in text
