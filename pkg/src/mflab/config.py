"""Declarative batch runs: one JSON config in, one report file per experiment.

Config schema (all paths relative to the invoking directory):

    {
      "experiments": [
        {"id": "mobius_exponential", "name": "dav_gold",
         "params": {"theta_over_2pi": 0.618...}, "n_grid": [100000, 1000000]}
      ],
      "output_dir": "reports",
      "cache_dir": null,
      "workers": 1,
      "allow_large": false,
      "golden_file": "goldens/decay_battery.json"
    }

Exit code semantics of run(): 0 all good, 1 a golden comparison failed,
2 the config did not parse or validate, 3 a referenced sieve cache is
corrupt.  Window lengths above 1e7 are refused unless allow_large is set.

A golden file maps experiment names to expected indicator values:

    {"dav_gold": {"final_abs": 0.0123, "tol": 1e-4, "require_decreasing": true}}

final_abs is compared within tol; require_decreasing checks strict grid-wise
decay, require_endpoint_decay only compares the last magnitude against the
first, and max_final_abs is an absolute ceiling on the final magnitude.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .cache import read_cache
from .errors import CacheChecksumError, CacheFormatError, ConfigError
from .experiments import (
    _MEMO,
    DEFAULT_GRID,
    EXPERIMENT_IDS,
    LARGE_N_LIMIT,
    run_experiment,
)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_CACHE = 3


@dataclass
class ExperimentSpec:
    id: str
    name: str
    params: dict = field(default_factory=dict)
    n_grid: list[int] = field(default_factory=lambda: list(DEFAULT_GRID))


@dataclass
class RunConfig:
    experiments: list[ExperimentSpec]
    output_dir: str = "reports"
    cache_dir: str | None = None
    workers: int = 1
    allow_large: bool = False
    golden_file: str | None = None


def parse_config(obj: dict) -> RunConfig:
    """Validate a parsed JSON object into a RunConfig; raises ConfigError."""
    if not isinstance(obj, dict):
        raise ConfigError("config root must be an object")
    raw = obj.get("experiments")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("config needs a non-empty 'experiments' list")
    allow_large = bool(obj.get("allow_large", False))
    specs: list[ExperimentSpec] = []
    seen: set[str] = set()
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "id" not in entry:
            raise ConfigError(f"experiment #{i} must be an object with an 'id'")
        exp_id = entry["id"]
        if exp_id not in EXPERIMENT_IDS:
            raise ConfigError(f"unknown experiment id {exp_id!r}")
        name = str(entry.get("name", exp_id))
        if name in seen:
            raise ConfigError(f"duplicate experiment name {name!r}")
        seen.add(name)
        params = entry.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"params of {name!r} must be an object")
        grid = entry.get("n_grid", list(DEFAULT_GRID))
        if (not isinstance(grid, list) or not grid
                or not all(isinstance(n, int) and n >= 1 for n in grid)):
            raise ConfigError(f"n_grid of {name!r} must be a list of positive integers")
        if max(grid) > LARGE_N_LIMIT and not allow_large:
            raise ConfigError(
                f"n_grid of {name!r} exceeds {LARGE_N_LIMIT}; set allow_large to opt in")
        specs.append(ExperimentSpec(exp_id, name, params, sorted(grid)))
    workers = obj.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be an integer >= 1")
    return RunConfig(
        experiments=specs,
        output_dir=str(obj.get("output_dir", "reports")),
        cache_dir=obj.get("cache_dir"),
        workers=workers,
        allow_large=allow_large,
        golden_file=obj.get("golden_file"),
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(obj)


def _preload_caches(cache_dir: str) -> None:
    """Verify every cache file under cache_dir and seed the window memo.

    Any malformed or corrupt file raises, which run() maps to exit 3; a
    batch never silently recomputes around a damaged cache.
    """
    for path in sorted(Path(cache_dir).glob("*.bin")):
        seq = read_cache(path)
        if seq.start != 1:
            continue
        have = _MEMO.get(seq.label)
        if have is None or len(seq.values) > len(have):
            _MEMO[seq.label] = seq.values


def _compare_golden(report, golden: dict) -> list[str]:
    failures = []
    expected = golden.get("final_abs")
    tol = golden.get("tol", 0.0)
    if expected is not None:
        got = report.indicators["final_abs"]
        if abs(got - expected) > tol:
            failures.append(
                f"final_abs {got!r} differs from golden {expected!r} beyond tol {tol!r}")
    if golden.get("require_decreasing") and not report.indicators["decreasing_abs"]:
        failures.append("|value| is not non-increasing along the N grid")
    if golden.get("require_endpoint_decay") and not report.indicators["endpoint_decay"]:
        failures.append("|value| at the last N exceeds |value| at the first N")
    ceiling = golden.get("max_final_abs")
    if ceiling is not None and report.indicators["final_abs"] > ceiling:
        failures.append(f"final_abs {report.indicators['final_abs']!r} above {ceiling!r}")
    return failures


def run(config: RunConfig) -> int:
    """Execute a batch: write one report per experiment, compare goldens."""
    try:
        if config.cache_dir is not None:
            _preload_caches(config.cache_dir)
    except (CacheFormatError, CacheChecksumError) as exc:
        print(f"cache error: {exc}")
        return EXIT_CACHE

    goldens = {}
    if config.golden_file is not None:
        try:
            goldens = json.loads(Path(config.golden_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: cannot read golden file: {exc}")
            return EXIT_CONFIG

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures: list[str] = []
    for spec in config.experiments:
        report = run_experiment(spec.id, spec.params, spec.n_grid,
                                cache_dir=config.cache_dir, workers=config.workers)
        report.write(out_dir / f"{spec.name}.json")
        for problem in _compare_golden(report, goldens.get(spec.name, {})):
            failures.append(f"{spec.name}: {problem}")
    for line in failures:
        print(f"tolerance failure: {line}")
    return EXIT_TOLERANCE if failures else EXIT_OK
