"""Seeded multi-run experiment execution and result persistence.

Per-run seeds derive deterministically from the experiment's master seed
as ``mix_seed(master_seed, run_index)``, so the result of an experiment is
a pure function of its config — independent of the parallelism degree,
which exists purely as an execution hint (it is deliberately not
serialized and not part of config equality).

Two persistence formats, dispatched on file suffix:

* ``.csv`` — one row per run, columns exactly
  ``run_index,seed,success,evaluations_used,generations,best_fitness``
  (flat, for plotting pipelines; the config is not stored).
* ``.json`` — ``{"config": {...}, "records": [...]}`` embedding the full
  config for exact reproduction; round-trips structurally.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import algorithms
from .algorithms import AlgorithmConfig, RunRecord
from .benchmarks import BenchmarkSpec
from .core import mix_seed

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ResultsParseError",
    "run_experiment",
    "save_results",
    "load_results",
]

CSV_COLUMNS = ("run_index", "seed", "success", "evaluations_used",
               "generations", "best_fitness")


class ResultsParseError(ValueError):
    """A results file failed to parse; message carries line/field context."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment exactly.

    ``parallelism`` is an execution hint only: it does not influence the
    records, is excluded from equality, and is not serialized.
    """

    algorithm: AlgorithmConfig
    benchmark: BenchmarkSpec
    budget: int
    runs: int
    master_seed: int
    parallelism: int = field(default=1, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.algorithm, AlgorithmConfig):
            raise ValueError("algorithm must be an AlgorithmConfig")
        if not isinstance(self.benchmark, BenchmarkSpec):
            raise ValueError("benchmark must be a BenchmarkSpec")
        if self.budget != math.inf:
            if int(self.budget) != self.budget or self.budget < 1:
                raise ValueError(f"budget must be a positive integer, got {self.budget}")
            object.__setattr__(self, "budget", int(self.budget))
        if int(self.runs) != self.runs or self.runs < 1:
            raise ValueError(f"runs must be a positive integer, got {self.runs}")
        object.__setattr__(self, "runs", int(self.runs))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        if int(self.parallelism) != self.parallelism or self.parallelism < 1:
            raise ValueError(f"parallelism must be a positive integer, got {self.parallelism}")
        object.__setattr__(self, "parallelism", int(self.parallelism))

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm.to_dict(),
            "benchmark": self.benchmark.to_dict(),
            "budget": "inf" if self.budget == math.inf else self.budget,
            "runs": self.runs,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {"algorithm", "benchmark", "budget", "runs", "master_seed"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown experiment config fields: {sorted(extra)}")
        missing = known - set(data)
        if missing:
            raise ValueError(f"experiment config missing fields: {sorted(missing)}")
        budget = data["budget"]
        if budget == "inf":
            budget = math.inf
        return cls(
            algorithm=AlgorithmConfig.from_dict(data["algorithm"]),
            benchmark=BenchmarkSpec.from_dict(data["benchmark"]),
            budget=budget,
            runs=data["runs"],
            master_seed=data["master_seed"],
        )


@dataclass(frozen=True)
class ExperimentResult:
    """An experiment's config plus one RunRecord per run, in run order.

    ``config`` is ``None`` only for results loaded from the flat CSV
    format, which does not store it.
    """

    config: Optional[ExperimentConfig]
    records: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        if self.config is not None and len(self.records) != self.config.runs:
            raise ValueError(
                f"expected {self.config.runs} records, got {len(self.records)}")


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute ``config.runs`` independent runs, seeded
    ``mix_seed(master_seed, i)``, gathered in run-index order."""
    seeds = [mix_seed(config.master_seed, i) for i in range(config.runs)]

    def one(i: int) -> RunRecord:
        return algorithms.run(config.algorithm, config.benchmark,
                              config.budget, seeds[i])

    if config.parallelism == 1 or config.runs == 1:
        records = [one(i) for i in range(config.runs)]
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            records = list(pool.map(one, range(config.runs)))
    return ExperimentResult(config=config, records=tuple(records))


# ---------------------------------------------------------------------------
# Persistence.


def _record_to_dict(r: RunRecord) -> dict:
    return {
        "success": r.success,
        "evaluations_used": r.evaluations_used,
        "generations": r.generations,
        "best_fitness": r.best_fitness,
        "seed": r.seed,
    }


def _record_from_dict(data: dict, where: str) -> RunRecord:
    try:
        return RunRecord(
            success=bool(data["success"]),
            evaluations_used=int(data["evaluations_used"]),
            generations=int(data["generations"]),
            best_fitness=float(data["best_fitness"]),
            seed=int(data["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ResultsParseError(f"{where}: bad record ({exc})") from None


def save_results(result: ExperimentResult, path: str) -> None:
    """Write ``result`` to ``path``; format chosen by suffix (.csv/.json)."""
    suffix = os.path.splitext(path)[1].lower()
    if suffix == ".csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for i, r in enumerate(result.records):
                writer.writerow([
                    i,
                    r.seed,
                    "true" if r.success else "false",
                    r.evaluations_used,
                    r.generations,
                    repr(r.best_fitness),
                ])
    elif suffix == ".json":
        if result.config is None:
            raise ValueError("JSON persistence requires a result with a config")
        payload = {
            "config": result.config.to_dict(),
            "records": [_record_to_dict(r) for r in result.records],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ValueError(f"unsupported results suffix {suffix!r} (use .csv or .json)")


def load_results(path: str) -> ExperimentResult:
    """Load results saved by :func:`save_results`.

    JSON restores the full config; CSV restores records only
    (``config=None``).  Malformed input raises
    :class:`ResultsParseError` with line/field diagnostics.
    """
    suffix = os.path.splitext(path)[1].lower()
    if suffix == ".csv":
        records: List[RunRecord] = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ResultsParseError(f"{path}: empty file") from None
            if tuple(header) != CSV_COLUMNS:
                raise ResultsParseError(
                    f"{path}: line 1: expected header {','.join(CSV_COLUMNS)}")
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(CSV_COLUMNS):
                    raise ResultsParseError(
                        f"{path}: line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
                idx, seed, success, used, gens, best = row
                if success not in ("true", "false"):
                    raise ResultsParseError(
                        f"{path}: line {lineno}: field success must be true/false, got {success!r}")
                try:
                    if int(idx) != lineno - 2:
                        raise ResultsParseError(
                            f"{path}: line {lineno}: run_index out of order")
                    records.append(RunRecord(
                        success=success == "true",
                        evaluations_used=int(used),
                        generations=int(gens),
                        best_fitness=float(best),
                        seed=int(seed),
                    ))
                except ValueError as exc:
                    if isinstance(exc, ResultsParseError):
                        raise
                    raise ResultsParseError(
                        f"{path}: line {lineno}: {exc}") from None
        return ExperimentResult(config=None, records=tuple(records))
    if suffix == ".json":
        with open(path) as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ResultsParseError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(payload, dict) or "config" not in payload or "records" not in payload:
            raise ResultsParseError(f"{path}: expected object with config and records")
        try:
            config = ExperimentConfig.from_dict(payload["config"])
        except ValueError as exc:
            raise ResultsParseError(f"{path}: config: {exc}") from None
        records = tuple(
            _record_from_dict(rec, f"{path}: records[{i}]")
            for i, rec in enumerate(payload["records"])
        )
        if len(records) != config.runs:
            raise ResultsParseError(
                f"{path}: expected {config.runs} records, got {len(records)}")
        return ExperimentResult(config=config, records=records)
    raise ValueError(f"unsupported results suffix {suffix!r} (use .csv or .json)")
