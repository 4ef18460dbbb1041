"""Complete search algorithms with a uniform seeded run interface.

Algorithms
----------
``OptIA``            population clonal-selection loop: clone, static
                     hypermutation (or standard bit mutation when
                     ``variation='sbm'``), hybrid ageing, truncation
                     selection with optional genotype diversity.
``OptIAStar``        as OptIA but every generation also applies
                     hypermacromutation to a second clone block (2*mu*dup
                     mutants per generation) and selection enforces
                     genotype diversity (div=1).
``OnePlusOneIAHyp``  single individual, one hypermutation per generation,
                     offspring accepted iff fitness >= parent's.
``OnePlusOneEA``     single individual, standard bit mutation, accept >=.
``RLS1``             single individual, one-bit flip, accept >=.
``MuRLSpAgeing``     (mu+1): uniform parent, copy w.p. p else one-bit
                     flip, hybrid ageing, selection (div=0).
``MuRLSAgeingDiv``   (mu+1): one-bit flip always, hybrid ageing,
                     selection with genotype diversity (div=1).
``MuEAAgeing``       (mu+1): standard bit mutation, hybrid ageing,
                     selection (div=0).

Every run is driven by one compiled kernel seeded from the given integer;
identical ``(config, benchmark, budget, seed)`` always yields an identical
:class:`RunRecord` regardless of platform or thread count.  Cost is
counted in fitness evaluations; a run succeeds the moment any evaluated
point attains the benchmark's optimal value and fails when the budget is
spent.  Failed runs report ``evaluations_used = budget`` (right-censored)
and ``best_fitness`` = the best fitness in the standing population.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as _k
from .benchmarks import BenchmarkSpec
from .operators import OperatorParams, _cm_code

__all__ = [
    "ALGORITHM_IDS",
    "VARIATIONS",
    "canonical_algorithm_id",
    "AlgorithmConfig",
    "RunRecord",
    "run",
    "run_opt_ia",
    "run_opt_ia_star",
    "run_one_plus_one_ia_hyp",
    "run_one_plus_one_ea",
    "run_rls1",
    "run_mu_rls_p_ageing",
    "run_mu_rls_ageing_div",
    "run_mu_ea_ageing",
]

ALGORITHM_IDS = (
    "OptIA",
    "OptIAStar",
    "OnePlusOneIAHyp",
    "OnePlusOneEA",
    "RLS1",
    "MuRLSpAgeing",
    "MuRLSAgeingDiv",
    "MuEAAgeing",
)

VARIATIONS = ("hyper", "sbm")

# kebab-case aliases (used by the CLI) -> canonical ids
_ALIASES = {
    "optia": "OptIA",
    "optia-star": "OptIAStar",
    "ia-hyp": "OnePlusOneIAHyp",
    "ea": "OnePlusOneEA",
    "rls1": "RLS1",
    "rls-p-ageing": "MuRLSpAgeing",
    "rls-ageing-div": "MuRLSAgeingDiv",
    "ea-ageing": "MuEAAgeing",
}


def canonical_algorithm_id(name: str) -> str:
    """Resolve an algorithm name (canonical id or kebab-case alias)."""
    if name in ALGORITHM_IDS:
        return name
    try:
        return _ALIASES[str(name).lower()]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; known: "
                         f"{', '.join(sorted(_ALIASES))}") from None


_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class AlgorithmConfig:
    """An algorithm id plus its operator parameters.

    ``variation`` selects OptIA's variation operator ('hyper' for static
    hypermutation, 'sbm' for standard bit mutation); it is only
    configurable for OptIA.  Per-algorithm constraints are enforced at
    construction:

    * OnePlusOneIAHyp requires mu=1, dup=1.
    * OnePlusOneEA and RLS1 require mu=1, dup=1 and ignore c/cm_mode.
    * OptIAStar requires div=1 (the algorithm bans genotype duplicates).
    * MuRLSpAgeing and MuEAAgeing require div=0; MuRLSAgeingDiv requires
      div=1.
    * p may be nonzero only for MuRLSpAgeing.
    """

    algorithm_id: str
    operator_params: OperatorParams = field(default_factory=OperatorParams)
    variation: str = "hyper"

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm_id", canonical_algorithm_id(self.algorithm_id))
        aid = self.algorithm_id
        op = self.operator_params
        if self.variation not in VARIATIONS:
            raise ValueError(f"variation must be one of {VARIATIONS}, got {self.variation!r}")
        if self.variation == "sbm" and aid != "OptIA":
            raise ValueError("variation='sbm' applies only to OptIA")
        if aid in ("OnePlusOneIAHyp", "OnePlusOneEA", "RLS1"):
            if op.mu != 1 or op.dup != 1:
                raise ValueError(f"{aid} requires mu=1 and dup=1")
            if op.div != 0:
                raise ValueError(f"{aid} does not use the div flag (need div=0)")
        if aid == "OptIAStar" and op.div != 1:
            raise ValueError("OptIAStar requires div=1 (no genotype duplicates)")
        if aid in ("MuRLSpAgeing", "MuEAAgeing") and op.div != 0:
            raise ValueError(f"{aid} requires div=0")
        if aid == "MuRLSAgeingDiv" and op.div != 1:
            raise ValueError("MuRLSAgeingDiv requires div=1")
        if op.p != 0.0 and aid != "MuRLSpAgeing":
            raise ValueError("p applies only to MuRLSpAgeing")

    def to_dict(self) -> dict:
        return {
            "algorithm_id": self.algorithm_id,
            "operator_params": self.operator_params.to_dict(),
            "variation": self.variation,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlgorithmConfig":
        known = {"algorithm_id", "operator_params", "variation"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown algorithm config fields: {sorted(extra)}")
        if "algorithm_id" not in data:
            raise ValueError("algorithm config requires algorithm_id")
        op = data.get("operator_params", {})
        if not isinstance(op, OperatorParams):
            op = OperatorParams.from_dict(op)
        return cls(
            algorithm_id=data["algorithm_id"],
            operator_params=op,
            variation=data.get("variation", "hyper"),
        )


@dataclass(frozen=True)
class RunRecord:
    """Outcome of a single seeded run.

    On success ``best_fitness`` equals the benchmark's optimal value and
    ``evaluations_used <= budget``; on failure ``evaluations_used`` equals
    the budget (right-censored) and ``best_fitness`` is the best fitness
    present in the standing population at termination.
    """

    success: bool
    evaluations_used: int
    generations: int
    best_fitness: float
    seed: int


def _checked_budget(budget) -> int:
    if budget != math.inf and (int(budget) != budget or budget < 1):
        raise ValueError(f"budget must be a positive integer, got {budget}")
    if budget == math.inf:
        return _k.NO_BUDGET
    return int(budget)


def run(config: AlgorithmConfig, benchmark: BenchmarkSpec, budget, seed: int) -> RunRecord:
    """Execute one seeded run of the configured algorithm on the benchmark."""
    if not isinstance(config, AlgorithmConfig):
        raise ValueError("config must be an AlgorithmConfig")
    if not isinstance(benchmark, BenchmarkSpec):
        raise ValueError("benchmark must be a BenchmarkSpec")
    bud = _checked_budget(budget)
    seed = int(seed)
    seed64 = np.uint64(seed & _MASK64)
    op = config.operator_params
    aid = config.algorithm_id
    cm = _cm_code(op.cm_mode)
    tau_i = -1 if op.tau == math.inf else int(op.tau)
    m_pot = op.potential(benchmark.n)
    packed = benchmark.packed()
    opt_val = benchmark.optimum_value

    if aid == "OnePlusOneIAHyp":
        out = _k.run_one_plus_one(_k.VAR_HYPER, cm, m_pot, *packed, opt_val, bud, seed64)
    elif aid == "OnePlusOneEA":
        out = _k.run_one_plus_one(_k.VAR_SBM, cm, 1, *packed, opt_val, bud, seed64)
    elif aid == "RLS1":
        out = _k.run_one_plus_one(_k.VAR_RLS, cm, 1, *packed, opt_val, bud, seed64)
    elif aid == "OptIA":
        var = _k.VAR_HYPER if config.variation == "hyper" else _k.VAR_SBM
        out = _k.run_optia(var, 0, cm, op.mu, op.dup, tau_i, op.div, m_pot,
                           *packed, opt_val, bud, seed64)
    elif aid == "OptIAStar":
        out = _k.run_optia(_k.VAR_HYPER, 1, cm, op.mu, op.dup, tau_i, 1, m_pot,
                           *packed, opt_val, bud, seed64)
    elif aid == "MuRLSpAgeing":
        out = _k.run_mu_ageing(_k.VAR_RLSP, op.p, op.mu, tau_i, 0,
                               *packed, opt_val, bud, seed64)
    elif aid == "MuRLSAgeingDiv":
        out = _k.run_mu_ageing(_k.VAR_RLS, 0.0, op.mu, tau_i, 1,
                               *packed, opt_val, bud, seed64)
    else:  # MuEAAgeing
        out = _k.run_mu_ageing(_k.VAR_SBM, 0.0, op.mu, tau_i, 0,
                               *packed, opt_val, bud, seed64)
    success, used, gens, best = out
    return RunRecord(
        success=bool(success),
        evaluations_used=int(used),
        generations=int(gens),
        best_fitness=float(best),
        seed=seed,
    )


def _run_as(expected: str, config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    if config.algorithm_id != expected:
        raise ValueError(f"config targets {config.algorithm_id}, expected {expected}")
    return run(config, benchmark, budget, seed)


def run_opt_ia(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """Opt-IA: clone, hypermutate, age, select (see module docstring)."""
    return _run_as("OptIA", config, benchmark, budget, seed)


def run_opt_ia_star(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """Opt-IA*: hypermutation plus hypermacromutation blocks, div=1."""
    return _run_as("OptIAStar", config, benchmark, budget, seed)


def run_one_plus_one_ia_hyp(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """(1+1) hypermutation hill climber, acceptance >=."""
    return _run_as("OnePlusOneIAHyp", config, benchmark, budget, seed)


def run_one_plus_one_ea(benchmark, budget, seed) -> RunRecord:
    """(1+1) EA with standard bit mutation, acceptance >=."""
    return run(AlgorithmConfig("OnePlusOneEA"), benchmark, budget, seed)


def run_rls1(benchmark, budget, seed) -> RunRecord:
    """Random local search: one-bit flip per generation, acceptance >=."""
    return run(AlgorithmConfig("RLS1"), benchmark, budget, seed)


def run_mu_rls_p_ageing(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """(mu+1) copy-or-flip local search with hybrid ageing."""
    return _run_as("MuRLSpAgeing", config, benchmark, budget, seed)


def run_mu_rls_ageing_div(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """(mu+1) one-bit-flip local search with ageing and genotype diversity."""
    return _run_as("MuRLSAgeingDiv", config, benchmark, budget, seed)


def run_mu_ea_ageing(config: AlgorithmConfig, benchmark, budget, seed) -> RunRecord:
    """(mu+1) EA (standard bit mutation) with hybrid ageing."""
    return _run_as("MuEAAgeing", config, benchmark, budget, seed)
