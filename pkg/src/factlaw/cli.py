"""Experiment runner: every game and check behind one reproducible CLI.

Commands: gen-painting, play-puzzle, play-prob-game, validate-space, lln,
integrate, end-to-end, reproduce.  All randomness flows from explicit seeds
(a run without one fails validation), results are written as canonical JSON
or CSV, and every file-producing run also writes a RunManifest recording
input/output digests so `reproduce` can re-run it and diff byte-for-byte.

Exit codes: 0 success, 1 failed check or runtime error, 2 config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping

from . import __version__
from .integration import (
    HiddenForm,
    IntegrationConfig,
    complexified_phenomenon,
    end_to_end_check,
    integrate as run_integration,
)
from .painting import PaintingSpec, generate_painting, painting_from_doc, painting_to_doc
from .phenomenon import (
    RandomPhenomenon,
    factual_space_from_painting,
    probabilise_painting,
    run_frequency_experiment,
)
from .prob import (
    Measure,
    NotReached,
    Universe,
    find_N0,
    generate_algebra,
    meta_probability,
    validate_measure,
)
from .puzzle import FragmentPool, solve_by_borders, solve_by_location
from .serialize import (
    canonical_dumps,
    dump_json,
    fraction_from_str,
    load_json,
    sha256_of_doc,
    sha256_of_file,
)

SCHEMA_VERSION = 1
JOBS_ENV_VAR = "FPL_JOBS"


class ConfigError(Exception):
    """The run configuration is invalid; nothing was executed."""


class MissingInput(Exception):
    """A file referenced by a manifest or config does not exist."""


# --- configuration ----------------------------------------------------------


def _as_int(value: Any, key: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _as_str(value: Any, key: str) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{key} must be a non-empty string, got {value!r}")
    return value


def _as_number(value: Any, key: str) -> Any:
    """Exact numbers: int, float, or a "num/den" string; kept exact."""
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return fraction_from_str(value)
        except ValueError:
            raise ConfigError(f"{key} must be a number or num/den, got {value!r}") from None
    raise ConfigError(f"{key} must be a number or num/den, got {value!r}")


def _as_choice(options: tuple[str, ...]) -> Callable[[Any, str], str]:
    def cast(value: Any, key: str) -> str:
        if value not in options:
            raise ConfigError(f"{key} must be one of {options}, got {value!r}")
        return value

    return cast


def _as_int_list(value: Any, key: str) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{key} must be a non-empty list of integers")
    return [_as_int(v, key) for v in value]


# key -> (caster, required)
_SCHEMAS: dict[str, dict[str, tuple[Callable[[Any, str], Any], bool]]] = {
    "gen-painting": {
        "spec": (_as_str, True),
        "seed": (_as_int, False),  # may come from the spec file instead
        "out": (_as_str, True),
    },
    "play-puzzle": {
        "painting": (_as_str, True),
        "mode": (_as_choice(("location", "border")), True),
        "replicas": (_as_int, False),
        "seed": (_as_int, True),
        "report": (_as_str, True),
        "trial_budget": (_as_int, False),
    },
    "play-prob-game": {
        "painting": (_as_str, True),
        "draws": (_as_int, True),
        "seed": (_as_int, True),
        "out": (_as_str, True),
        "format": (_as_choice(("csv", "json")), False),
    },
    "validate-space": {
        "space": (_as_str, True),
        "out": (_as_str, False),
    },
    "lln": {
        "operation": (_as_choice(("meta-probability", "find-n0")), True),
        "painting": (_as_str, False),
        "weights": (_as_int_list, False),
        "label": (_as_int, True),
        "target": (_as_number, False),
        "epsilon": (_as_number, True),
        "n_draws": (_as_int, False),
        "repetitions": (_as_int, True),
        "delta": (_as_number, False),
        "start": (_as_int, False),
        "cap": (_as_int, False),
        "seed": (_as_int, True),
        "jobs": (_as_int, False),
        "out": (_as_str, False),
    },
    "integrate": {
        "form": (_as_str, True),
        "seed": (_as_int, True),
        "confirm": (_as_int, False),
        "max_events": (_as_int, False),
        "ambiguity_budget": (_as_int, False),
        "out": (_as_str, True),
    },
    "end-to-end": {
        "form": (_as_str, True),
        "draws": (_as_int, True),
        "seed": (_as_int, True),
        "confirm": (_as_int, False),
        "max_events": (_as_int, False),
        "tolerance": (_as_number, False),
        "out": (_as_str, False),
    },
}

# Which parameter names the primary output file of each command.
_OUT_PARAM = {
    "gen-painting": "out",
    "play-puzzle": "report",
    "play-prob-game": "out",
    "validate-space": "out",
    "lln": "out",
    "integrate": "out",
    "end-to-end": "out",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated parameter block for one command."""

    command: str
    params: Mapping[str, Any]
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {self.schema_version!r}"
            )
        schema = _SCHEMAS.get(self.command)
        if schema is None:
            raise ConfigError(f"unknown command {self.command!r}")
        params = dict(self.params)
        unknown = set(params) - set(schema)
        if unknown:
            raise ConfigError(f"unknown parameters for {self.command}: {sorted(unknown)}")
        validated = {}
        for key, (cast, required) in schema.items():
            if key in params and params[key] is not None:
                validated[key] = cast(params[key], key)
            elif required:
                raise ConfigError(f"{self.command} requires parameter {key!r}")
        object.__setattr__(self, "params", validated)


def load_config(
    command: str,
    config_path: str | None,
    overrides: Mapping[str, Any] | None = None,
) -> ExperimentConfig:
    """Merge a JSON config file with CLI overrides and validate the result."""
    params: dict[str, Any] = {}
    schema_version = SCHEMA_VERSION
    if config_path is not None:
        if not os.path.exists(config_path):
            raise ConfigError(f"config file not found: {config_path}")
        try:
            doc = load_json(config_path)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
        if "params" in doc:
            if doc.get("command", command) != command:
                raise ConfigError(
                    f"config is for {doc.get('command')!r}, not {command!r}"
                )
            schema_version = doc.get("schema_version", SCHEMA_VERSION)
            body = doc["params"]
            if not isinstance(body, dict):
                raise ConfigError("config params must be a JSON object")
            params.update(body)
        else:
            schema_version = doc.pop("schema_version", SCHEMA_VERSION)
            params.update(doc)
    for key, value in (overrides or {}).items():
        if value is not None:
            params[key] = value
    return ExperimentConfig(command, params, schema_version)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to re-run a command and diff its outputs."""

    command: str
    params: Mapping[str, Any]
    config_hash: str
    seeds: tuple[int, ...]
    artifact_version: str
    inputs: Mapping[str, str]
    outputs: Mapping[str, str]
    wall_clock_s: float
    schema_version: int = SCHEMA_VERSION

    def to_doc(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "params": _jsonable_params(self.params),
            "config_hash": self.config_hash,
            "seeds": list(self.seeds),
            "artifact_version": self.artifact_version,
            "inputs": dict(self.inputs),
            "outputs": dict(self.outputs),
            "wall_clock_s": self.wall_clock_s,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "RunManifest":
        return cls(
            command=doc["command"],
            params=dict(doc["params"]),
            config_hash=doc["config_hash"],
            seeds=tuple(doc["seeds"]),
            artifact_version=doc["artifact_version"],
            inputs=dict(doc["inputs"]),
            outputs=dict(doc["outputs"]),
            wall_clock_s=doc["wall_clock_s"],
            schema_version=doc.get("schema_version", SCHEMA_VERSION),
        )


def _jsonable_params(params: Mapping[str, Any]) -> dict[str, Any]:
    doc = {}
    for key, value in params.items():
        if isinstance(value, Fraction):
            doc[key] = f"{value.numerator}/{value.denominator}"
        else:
            doc[key] = value
    return doc


def _config_hash(command: str, params: Mapping[str, Any]) -> str:
    return sha256_of_doc({"command": command, "params": _jsonable_params(params)})


def _resolve_jobs(params: Mapping[str, Any]) -> int:
    if params.get("jobs") is not None:
        return max(1, int(params["jobs"]))
    env = os.environ.get(JOBS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{JOBS_ENV_VAR} must be an integer, got {env!r}") from None
    return 1


# --- command workers --------------------------------------------------------
#
# Each worker returns (exit_status, outputs, inputs, seeds) where outputs and
# inputs map paths to digests.


def _require_file(path: str, what: str) -> str:
    if not os.path.exists(path):
        raise MissingInput(f"{what} not found: {path}")
    return path


def _write_doc(doc: dict[str, Any], out: str | None) -> dict[str, str]:
    if out is None:
        sys.stdout.write(canonical_dumps(doc) + "\n")
        return {}
    dump_json(doc, out)
    return {out: sha256_of_file(out)}


def _cmd_gen_painting(params: Mapping[str, Any]):
    spec_path = _require_file(params["spec"], "painting spec")
    spec_doc = load_json(spec_path)
    if params.get("seed") is None and "seed" not in spec_doc:
        raise ConfigError("no seed: pass --seed or put one in the spec file")
    if params.get("seed") is not None:
        spec_doc = dict(spec_doc, seed=params["seed"])
    spec = PaintingSpec.from_doc(spec_doc)
    painting = generate_painting(spec)
    outputs = _write_doc(painting_to_doc(painting), params["out"])
    return 0, outputs, {spec_path: sha256_of_file(spec_path)}, (spec.seed,)


def _cmd_play_puzzle(params: Mapping[str, Any]):
    painting_path = _require_file(params["painting"], "painting")
    painting = painting_from_doc(load_json(painting_path))
    mode = params["mode"]
    replicas = params.get("replicas", 1)
    if mode == "location" and replicas != 1:
        raise ConfigError("the location game is a single-replica game")
    pool = FragmentPool.from_painting(
        painting, mode=mode, replicas=replicas, seed=params["seed"]
    )
    if mode == "location":
        report = solve_by_location(pool)
    else:
        report = solve_by_borders(pool, trial_budget=params.get("trial_budget"))
    doc = report.to_doc()
    doc.update({"mode": mode, "replicas": replicas, "seed": params["seed"]})
    outputs = _write_doc(doc, params["report"])
    return 0, outputs, {painting_path: sha256_of_file(painting_path)}, (params["seed"],)


def _cmd_play_prob_game(params: Mapping[str, Any]):
    painting_path = _require_file(params["painting"], "painting")
    painting = painting_from_doc(load_json(painting_path))
    seed = params["seed"]
    phenomenon = probabilise_painting(painting, seed)
    table = run_frequency_experiment(phenomenon, params["draws"])
    law = factual_space_from_painting(painting).law
    rows = []
    for label in sorted(table.counts):
        freq = table.relative_frequency(label)
        prob = law[label]
        rows.append(
            {
                "label": label,
                "count": table.counts[label],
                "rel_freq": freq,
                "law_prob": prob,
                "abs_diff": abs(freq - prob),
            }
        )
    out = params["out"]
    fmt = params.get("format", "csv")
    if fmt == "json":
        doc = {
            "n_draws": table.n_draws,
            "rows": [
                {
                    "label": r["label"],
                    "count": r["count"],
                    "rel_freq": f"{r['rel_freq'].numerator}/{r['rel_freq'].denominator}",
                    "law_prob": f"{r['law_prob'].numerator}/{r['law_prob'].denominator}",
                    "abs_diff": f"{r['abs_diff'].numerator}/{r['abs_diff'].denominator}",
                }
                for r in rows
            ],
        }
        outputs = _write_doc(doc, out)
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["label", "count", "rel_freq", "law_prob", "abs_diff"])
        for r in rows:
            writer.writerow(
                [
                    r["label"],
                    r["count"],
                    repr(float(r["rel_freq"])),
                    repr(float(r["law_prob"])),
                    repr(float(r["abs_diff"])),
                ]
            )
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(buffer.getvalue())
        outputs = {out: sha256_of_file(out)}
    return 0, outputs, {painting_path: sha256_of_file(painting_path)}, (seed,)


def _space_from_doc(doc: Mapping[str, Any]):
    if "universe" not in doc or "law" not in doc:
        raise ConfigError("space file needs 'universe' and 'law' entries")
    universe = Universe(tuple(doc["universe"]))
    by_name = {str(e): e for e in universe.elements}
    law = {}
    for key, value in doc["law"].items():
        if key not in by_name:
            raise ConfigError(f"law names unknown element {key!r}")
        law[by_name[key]] = _as_number(value, f"law[{key}]")
    missing = [e for e in universe.elements if e not in law]
    if missing:
        raise ConfigError(f"law misses elements {missing!r}")
    generators = doc.get("algebra_generators")
    if generators is None:
        generator_sets = [{e} for e in universe.elements]
    else:
        generator_sets = [
            {by_name[str(member)] for member in gen} for gen in generators
        ]
    algebra = generate_algebra(universe, generator_sets)
    return Measure(law), algebra


def _cmd_validate_space(params: Mapping[str, Any]):
    space_path = _require_file(params["space"], "space file")
    measure, algebra = _space_from_doc(load_json(space_path))
    report = validate_measure(measure, algebra)
    doc = report.to_doc()
    doc["events"] = len(algebra)
    outputs = _write_doc(doc, params.get("out"))
    status = 0 if report.passed else 1
    return status, outputs, {space_path: sha256_of_file(space_path)}, ()


def _lln_sampler(params: Mapping[str, Any], seed: int):
    has_painting = params.get("painting") is not None
    has_weights = params.get("weights") is not None
    if has_painting == has_weights:
        raise ConfigError("lln needs exactly one of 'painting' or 'weights'")
    if has_painting:
        painting_path = _require_file(params["painting"], "painting")
        painting = painting_from_doc(load_json(painting_path))
        sampler = probabilise_painting(painting, seed)
        inputs = {painting_path: sha256_of_file(painting_path)}
    else:
        weights = params["weights"]
        universe = Universe(tuple(range(1, len(weights) + 1)))
        sampler = RandomPhenomenon(
            "weighted-draw", universe, tuple(weights), seed=seed
        )
        inputs = {}
    return sampler, inputs


def _cmd_lln(params: Mapping[str, Any]):
    seed = params["seed"]
    sampler, inputs = _lln_sampler(params, seed)
    label = params["label"]
    target = params.get("target")
    if target is None:
        target = sampler.underlying_law()[label]
    epsilon = params["epsilon"]
    jobs = _resolve_jobs(params)
    operation = params["operation"]
    doc: dict[str, Any] = {
        "operation": operation,
        "label": label,
        "target": str(Fraction(target) if not isinstance(target, float) else target),
        "epsilon": str(epsilon),
        "repetitions": params["repetitions"],
        "seed": seed,
    }
    if operation == "meta-probability":
        if "n_draws" not in params:
            raise ConfigError("meta-probability requires n_draws")
        estimate = meta_probability(
            sampler,
            label,
            target,
            epsilon,
            params["n_draws"],
            params["repetitions"],
            seed,
            jobs=jobs,
        )
        doc.update({"n_draws": params["n_draws"], "estimate": estimate})
    else:
        if "delta" not in params:
            raise ConfigError("find-n0 requires delta")
        n0 = find_N0(
            sampler,
            label,
            target,
            epsilon,
            float(params["delta"]),
            params["repetitions"],
            seed,
            start=params.get("start", 16),
            cap=params.get("cap", 2**20),
            jobs=jobs,
        )
        doc.update({"delta": str(params["delta"]), "n0": n0})
    outputs = _write_doc(doc, params.get("out"))
    return 0, outputs, inputs, (seed,)


def _cmd_integrate(params: Mapping[str, Any]):
    form_path = _require_file(params["form"], "hidden form")
    form = HiddenForm.from_doc(load_json(form_path))
    seed = params["seed"]
    config = IntegrationConfig(
        max_events=params.get("max_events", 1_000_000),
        confirmation_replicas=params.get("confirm", 3),
        ambiguity_budget=params.get("ambiguity_budget", 0),
    )
    result = run_integration(complexified_phenomenon(form, seed), config)
    outputs = _write_doc(result.to_doc(), params["out"])
    return 0, outputs, {form_path: sha256_of_file(form_path)}, (seed,)


def _cmd_end_to_end(params: Mapping[str, Any]):
    form_path = _require_file(params["form"], "hidden form")
    form = HiddenForm.from_doc(load_json(form_path))
    seed = params["seed"]
    config = IntegrationConfig(
        max_events=params.get("max_events", 1_000_000),
        confirmation_replicas=params.get("confirm", 3),
    )
    report = end_to_end_check(form, params["draws"], seed, config)
    doc = report.to_doc()
    status = 0
    tolerance = params.get("tolerance")
    if tolerance is not None:
        within = report.sup_distance <= Fraction(tolerance)
        doc["tolerance"] = str(tolerance)
        doc["within_tolerance"] = within
        status = 0 if within else 1
    outputs = _write_doc(doc, params.get("out"))
    return status, outputs, {form_path: sha256_of_file(form_path)}, (seed,)


_WORKERS = {
    "gen-painting": _cmd_gen_painting,
    "play-puzzle": _cmd_play_puzzle,
    "play-prob-game": _cmd_play_prob_game,
    "validate-space": _cmd_validate_space,
    "lln": _cmd_lln,
    "integrate": _cmd_integrate,
    "end-to-end": _cmd_end_to_end,
}


def _emit_error(kind: str, exc: Exception) -> None:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(canonical_dumps(record) + "\n")


def run(
    command: str,
    config_path: str | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> int:
    """Validate, dispatch, write outputs plus a manifest; return the exit code."""
    try:
        config = load_config(command, config_path, overrides)
    except ConfigError as exc:
        _emit_error("config", exc)
        return 2
    started = time.monotonic()
    try:
        status, outputs, inputs, seeds = _WORKERS[command](config.params)
    except ConfigError as exc:
        _emit_error("config", exc)
        return 2
    except Exception as exc:
        _emit_error("runtime", exc)
        return 1
    if outputs:
        manifest = RunManifest(
            command=command,
            params=config.params,
            config_hash=_config_hash(command, config.params),
            seeds=tuple(seeds),
            artifact_version=__version__,
            inputs=inputs,
            outputs=outputs,
            wall_clock_s=round(time.monotonic() - started, 6),
        )
        primary_out = config.params.get(_OUT_PARAM[command])
        dump_json(manifest.to_doc(), str(primary_out) + ".manifest.json")
    return status


def reproduce(manifest_path: str) -> int:
    """Re-run a manifest in a scratch directory and diff output digests."""
    try:
        _require_file(manifest_path, "manifest")
        manifest = RunManifest.from_doc(load_json(manifest_path))
    except MissingInput as exc:
        _emit_error("runtime", exc)
        return 1
    except (json.JSONDecodeError, KeyError) as exc:
        _emit_error("config", ConfigError(f"bad manifest: {exc}"))
        return 2
    failures = []
    for path, digest in manifest.inputs.items():
        if not os.path.exists(path):
            _emit_error("runtime", MissingInput(f"input not found: {path}"))
            return 1
        actual = sha256_of_file(path)
        line = f"input {path}: {'ok' if actual == digest else 'CHANGED'}"
        print(line)
        if actual != digest:
            failures.append(line)
    out_key = _OUT_PARAM[manifest.command]
    with tempfile.TemporaryDirectory(prefix="factlaw-reproduce-") as scratch:
        params = dict(manifest.params)
        rerun_map = {}
        for recorded_path in manifest.outputs:
            fresh = str(Path(scratch) / Path(recorded_path).name)
            rerun_map[recorded_path] = fresh
        if params.get(out_key) in rerun_map:
            params[out_key] = rerun_map[params[out_key]]
        status = run(manifest.command, None, params)
        if status == 2:
            return 2
        for recorded_path, recorded_digest in manifest.outputs.items():
            fresh = rerun_map[recorded_path]
            if not os.path.exists(fresh):
                line = f"output {recorded_path}: MISSING on re-run"
            else:
                match = sha256_of_file(fresh) == recorded_digest
                line = f"output {recorded_path}: {'ok' if match else 'DIGEST MISMATCH'}"
            print(line)
            if not line.endswith("ok"):
                failures.append(line)
    print(f"reproduce: {'pass' if not failures else 'fail'}")
    return 0 if not failures else 1


# --- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factlaw",
        description=(
            "Factual-probability laboratory: generate parcelled paintings,"
            " play the reconstruction and probability games, estimate"
            " law-of-large-numbers meta-probabilities, and run semantic"
            " integration end to end."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, jobs: bool = False) -> None:
        p.add_argument("--config", help="JSON file with parameters for this command")
        p.add_argument("--seed", type=int, help="root seed (required unless configured)")
        if jobs:
            p.add_argument(
                "--jobs",
                type=int,
                help=f"worker processes (default: ${JOBS_ENV_VAR} or 1)",
            )

    p = sub.add_parser("gen-painting", help="generate a parcelled painting")
    p.add_argument("--spec", help="painting spec JSON file")
    p.add_argument("--out", help="output painting JSON path")
    add_common(p)

    p = sub.add_parser("play-puzzle", help="reconstruct a painting from fragments")
    p.add_argument("--painting", help="painting JSON file")
    p.add_argument("--mode", choices=("location", "border"))
    p.add_argument("--replicas", type=int)
    p.add_argument("--report", help="assembly report JSON path")
    p.add_argument("--trial-budget", type=int, dest="trial_budget")
    add_common(p)

    p = sub.add_parser("play-prob-game", help="draw-with-replacement frequencies")
    p.add_argument("--painting", help="painting JSON file")
    p.add_argument("--draws", type=int)
    p.add_argument("--out", help="frequency table path (CSV by default)")
    p.add_argument("--format", choices=("csv", "json"))
    add_common(p)

    p = sub.add_parser("validate-space", help="check measure axioms on a space file")
    p.add_argument("--space", help="probability space JSON file")
    p.add_argument("--out", help="validation report JSON path (default: stdout)")
    add_common(p)

    p = sub.add_parser("lln", help="meta-probability estimation and N0 search")
    p.add_argument("--out", help="report JSON path (default: stdout)")
    add_common(p, jobs=True)

    p = sub.add_parser("integrate", help="recover the law from a complexified stream")
    p.add_argument("--form", help="hidden form JSON file")
    p.add_argument("--confirm", type=int, help="confirmation replicas K")
    p.add_argument("--max-events", type=int, dest="max_events")
    p.add_argument("--out", help="integration result JSON path")
    add_common(p)

    p = sub.add_parser("end-to-end", help="integrated law vs fresh frequencies")
    p.add_argument("--form", help="hidden form JSON file")
    p.add_argument("--draws", type=int)
    p.add_argument("--confirm", type=int)
    p.add_argument("--max-events", type=int, dest="max_events")
    p.add_argument("--tolerance", help="optional sup-distance bound, e.g. 1/100 or 0.01")
    p.add_argument("--out", help="comparison report JSON path (default: stdout)")
    add_common(p)

    p = sub.add_parser("reproduce", help="re-run a manifest and diff digests")
    p.add_argument("--manifest", required=True, help="run manifest JSON file")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "reproduce":
        return reproduce(args.manifest)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config") and value is not None
    }
    return run(args.command, args.config, overrides)


def console_main() -> None:
    sys.exit(main())
