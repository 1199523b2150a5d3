"""Command-line front end.

    tdfpp {speed,shape,verify,mixing,oracle-check} --config CFG [--out DIR]
          [--workers K] [--seed S]

Writes ``DIR/<experiment>.json`` (result envelope) and ``DIR/<experiment>.csv``.
Exit status: 0 success, 1 verification failure, 2 configuration error.
"""
import argparse
import csv
import json
import logging
import math
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema

from . import __version__, kernels
from ._prf import TAG_SAMPLE, derive_seed, hash_words
from .analysis import estimate_shape, estimate_speed, mixing_diagnostic, verify_hypotheses
from .analysis._parallel import default_workers
from .environment import EnvironmentSpec, sample_environment
from .errors import ConfigurationError, OracleInfeasible
from .solver import MODES, PassageQuery, brute_force_first_passage, first_passage
from .travel import MODELS

log = logging.getLogger("tdfpp")

EXPERIMENTS = ("speed", "shape", "verify", "mixing", "oracle-check")
ORACLE_TOL = 1e-9

_number_list = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_int_list = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["environment"],
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "environment": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "d", "L"],
            "properties": {
                "kind": {"enum": ["block", "poisson"]},
                "d": {"type": "integer", "minimum": 1},
                "L": {"type": "number", "minimum": 1},
                "C": {"type": "number", "exclusiveMinimum": 0},
                "lambda": {"type": "number", "exclusiveMinimum": 0},
                "field": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "dist": {"enum": ["uniform", "two_point"]},
                        "p": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                },
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            },
        },
        "model": {"enum": list(MODELS)},
        "direction": _int_list,
        "n_grid": _int_list,
        "t_list": _number_list,
        "modes": {"type": "array", "items": {"enum": list(MODES)}, "minItems": 1},
        "lags": _number_list,
        "replicates": {"type": "integer", "minimum": 1},
        "samples": {"type": "integer", "minimum": 1},
        "instances": {"type": "integer", "minimum": 1},
        "max_distance": {"type": "integer", "minimum": 1},
        "base_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "fekete_constant": {"type": "number", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "output": {"type": "string"},
    },
}

REQUIRED = {
    "speed": ("direction", "n_grid", "replicates"),
    "shape": ("t_list", "replicates"),
    "verify": ("samples",),
    "mixing": ("lags", "replicates"),
    "oracle-check": ("instances",),
}


@dataclass
class RunConfig:
    experiment: str
    environment: EnvironmentSpec
    model: str = "integral"
    params: dict = field(default_factory=dict)

    @property
    def base_seed(self):
        return self.params.get("base_seed", self.environment.seed)

    @classmethod
    def from_json(cls, obj, experiment=None):
        try:
            jsonschema.validate(obj, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigurationError(f"invalid config: {exc.message}") from None
        exp = obj.get("experiment", experiment)
        if exp is None:
            raise ConfigurationError("config names no experiment")
        if experiment is not None and exp != experiment:
            raise ConfigurationError(f"config is for {exp!r}, not {experiment!r}")
        missing = [k for k in REQUIRED[exp] if k not in obj]
        if missing:
            raise ConfigurationError(f"{exp} config is missing {missing}")
        params = {k: v for k, v in obj.items() if k not in ("experiment", "environment", "model")}
        return cls(exp, EnvironmentSpec.from_json(obj["environment"]),
                   obj.get("model", "integral"), params)

    def to_json(self):
        out = {"experiment": self.experiment, "environment": self.environment.to_json(),
               "model": self.model}
        out.update(self.params)
        return out


@dataclass
class ResultEnvelope:
    config: dict
    payload: dict
    seeds: list
    tool_version: str = __version__
    backend: str = kernels.BACKEND_NAME
    wall_clock_seconds: float = 0.0
    finished_at: str = ""
    table: tuple = None  # (header, rows) for the CSV sidecar; not serialised

    def to_json(self):
        out = asdict(self)
        out.pop("table")
        return out


def payload_bytes(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _oracle_check(cfg, workers):
    spec = cfg.environment
    L = spec.L
    n = cfg.params["instances"]
    max_dist = cfg.params.get("max_distance", 3)
    base = cfg.base_seed
    worst, mismatches, seeds, rows = 0.0, [], [], []
    for i in range(n):
        seed = derive_seed(base, i)
        rng = random.Random(hash_words(base, TAG_SAMPLE, i))
        env = sample_environment(spec.with_seed(seed))
        A = tuple(rng.randint(-3, 3) for _ in range(spec.d))
        dist = rng.randint(1, max_dist)
        B = list(A)
        for _ in range(dist):
            B[rng.randrange(spec.d)] += rng.choice((-1, 1))
        q = PassageQuery(A, tuple(B), rng.uniform(0.0, 10.0))
        fast = first_passage(env, cfg.model, q)
        slow = brute_force_first_passage(env, cfg.model, q,
                                         max(1, math.ceil(L * L * sum(abs(a - b) for a, b in zip(A, B)))))
        diff = abs(fast - slow)
        worst = max(worst, diff)
        seeds.append(seed)
        rows.append([i, seed, fast, slow, diff])
        if diff > ORACLE_TOL:
            mismatches.append({"instance": i, "seed": seed, "fast": fast, "oracle": slow})
    payload = {"instances": n, "max_abs_diff": worst, "tolerance": ORACLE_TOL,
               "mismatches": mismatches, "passed": not mismatches}
    return payload, seeds, (["instance", "seed", "first_passage", "brute_force", "abs_diff"], rows)


def run_experiment(cfg, workers=None):
    """Execute ``cfg``; returns a ResultEnvelope (no files written)."""
    workers = workers or cfg.params.get("workers") or default_workers()
    p = cfg.params
    spec, model, base = cfg.environment, cfg.model, cfg.base_seed
    t_start = time.perf_counter()
    if cfg.experiment == "speed":
        res = estimate_speed(spec, model, p["direction"], p["n_grid"], p["replicates"], base,
                             workers=workers, constant=p.get("fekete_constant"))
        payload, seeds, table = res.to_json(), res.seeds, res.csv_rows()
    elif cfg.experiment == "shape":
        res = estimate_shape(spec, model, p["t_list"], p["replicates"], base,
                             modes=p.get("modes", MODES), workers=workers)
        payload, table = res.to_json(), res.csv_rows()
        seeds = [r.seed for r in res.replicates]
    elif cfg.experiment == "verify":
        res = verify_hypotheses(spec, model, p["samples"], base, workers=workers)
        payload, table = res.to_json(), res.csv_rows()
        seeds = [derive_seed(base, i) for i in range(p["samples"])]
    elif cfg.experiment == "mixing":
        res = mixing_diagnostic(spec, p["lags"], p["replicates"], base, workers=workers)
        payload, table = res.to_json(), res.csv_rows()
        seeds = [derive_seed(base, i) for i in range(p["replicates"])]
    else:
        payload, seeds, table = _oracle_check(cfg, workers)
    return ResultEnvelope(
        config=cfg.to_json(), payload=payload, seeds=seeds,
        wall_clock_seconds=time.perf_counter() - t_start,
        finished_at=time.strftime("%Y-%m-%dT%H:%M:%S%z"), table=table,
    )


def _fmt(x):
    if isinstance(x, float):
        return repr(float(x))  # numpy scalars subclass float but repr differently
    return str(x)


def emit_csv(result, path):
    header, rows = result.table
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def write_result(result, out_dir, experiment):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = experiment.replace("-", "_")
    jpath = out_dir / f"{stem}.json"
    jpath.write_text(json.dumps(result.to_json(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    emit_csv(result, out_dir / f"{stem}.csv")
    return jpath


def _failure(experiment, payload):
    if experiment == "verify" and not payload["passed"]:
        bad = {k: v for k, v in payload["checks"].items() if v["violations"]}
        seed = next(iter(bad.values()))["first_failing_seed"]
        return f"hypothesis violations in {sorted(bad)}; reproduce with seed {seed}"
    if experiment == "oracle-check" and not payload["passed"]:
        m = payload["mismatches"][0]
        return f"oracle mismatch on instance {m['instance']}; reproduce with seed {m['seed']}"
    return None


def build_parser():
    ap = argparse.ArgumentParser(prog="tdfpp", description=__doc__.splitlines()[0] if __doc__ else None)
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", default=None, help="output directory (default: config 'output' or '.')")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None, help="override environment and base seed")
    return ap


def _setup_logging():
    level = os.environ.get("TDFPP_LOG", "error").upper()
    if level not in ("ERROR", "INFO", "DEBUG"):
        level = "ERROR"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _setup_logging()
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigurationError("--seed must be a 64-bit unsigned integer")
            raw.setdefault("environment", {})["seed"] = args.seed
            raw["base_seed"] = args.seed
        if args.workers is not None and args.workers < 1:
            raise ConfigurationError("--workers must be >= 1")
        cfg = RunConfig.from_json(raw, args.experiment)
    except (OSError, json.JSONDecodeError, ConfigurationError) as exc:
        print(f"tdfpp: configuration error: {exc}", file=sys.stderr)
        return 2
    log.info("running %s with %s backend", cfg.experiment, kernels.BACKEND_NAME)
    try:
        result = run_experiment(cfg, args.workers)
    except ConfigurationError as exc:
        print(f"tdfpp: configuration error: {exc}", file=sys.stderr)
        return 2
    except OracleInfeasible as exc:
        print(f"tdfpp: oracle infeasible: {exc}", file=sys.stderr)
        return 1
    out_dir = args.out or cfg.params.get("output") or "."
    try:
        path = write_result(result, out_dir, cfg.experiment)
    except OSError as exc:
        print(f"tdfpp: cannot write results: {exc}", file=sys.stderr)
        return 2
    log.info("wrote %s", path)
    msg = _failure(cfg.experiment, result.payload)
    if msg:
        print(f"tdfpp: verification failed: {msg}", file=sys.stderr)
        return 1
    return 0
