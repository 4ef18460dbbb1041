"""optia: clonal-selection and local-search algorithms on pseudo-Boolean
benchmarks, with a seeded experiment harness and scaling analysis.

The package provides bit-string genotypes and evaluation accounting
(:mod:`optia.core`), a benchmark function suite (:mod:`optia.benchmarks`),
hypermutation/ageing/selection operators (:mod:`optia.operators`),
complete algorithms behind a uniform run interface
(:mod:`optia.algorithms`), a deterministic multi-run harness with CSV/JSON
persistence (:mod:`optia.harness`), statistics and operator verifiers
(:mod:`optia.analysis`), figure rendering (:mod:`optia.plots`), and the
``optia`` command-line tool (:mod:`optia.cli`).
"""

from .core import (
    BitString,
    BudgetExhausted,
    EvaluationCounter,
    Individual,
    OptimumFound,
    RngStream,
    count_ones,
    count_zeros,
    evaluate,
    hamming,
    mix_seed,
)
from .benchmarks import (
    FUNCTION_IDS,
    BenchmarkSpec,
    cliff,
    hidden_path,
    hypertrap,
    jump,
    leadingones,
    min_sp_distance,
    onemax,
    parse_benchmark,
    simple_trap,
    zeromax,
)
from .operators import (
    CM_MODES,
    MutationResult,
    OperatorParams,
    clone_population,
    hybrid_ageing,
    hypermacromutation,
    rls_one,
    rls_p,
    sbm,
    select,
    static_hypermutation,
)
from .algorithms import (
    ALGORITHM_IDS,
    AlgorithmConfig,
    RunRecord,
    canonical_algorithm_id,
    run,
    run_mu_ea_ageing,
    run_mu_rls_ageing_div,
    run_mu_rls_p_ageing,
    run_one_plus_one_ea,
    run_one_plus_one_ia_hyp,
    run_opt_ia,
    run_opt_ia_star,
    run_rls1,
)
from .harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentResult,
    ResultsParseError,
    load_results,
    run_experiment,
    save_results,
)
from .analysis import (
    ScalingFit,
    SummaryStats,
    fit_loglog,
    summarize,
    sweep_table,
    verify_ageing_survivors,
    verify_hypermutation_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "BitString", "Individual", "EvaluationCounter", "RngStream",
    "OptimumFound", "BudgetExhausted", "count_ones", "count_zeros",
    "evaluate", "hamming", "mix_seed",
    # benchmarks
    "FUNCTION_IDS", "BenchmarkSpec", "parse_benchmark", "onemax", "zeromax",
    "leadingones", "jump", "cliff", "simple_trap", "hidden_path",
    "hypertrap", "min_sp_distance",
    # operators
    "CM_MODES", "OperatorParams", "MutationResult", "static_hypermutation",
    "hypermacromutation", "sbm", "rls_one", "rls_p", "clone_population",
    "hybrid_ageing", "select",
    # algorithms
    "ALGORITHM_IDS", "AlgorithmConfig", "RunRecord",
    "canonical_algorithm_id", "run", "run_opt_ia", "run_opt_ia_star",
    "run_one_plus_one_ia_hyp", "run_one_plus_one_ea", "run_rls1",
    "run_mu_rls_p_ageing", "run_mu_rls_ageing_div", "run_mu_ea_ageing",
    # harness
    "CSV_COLUMNS", "ExperimentConfig", "ExperimentResult",
    "ResultsParseError", "run_experiment", "save_results", "load_results",
    # analysis
    "SummaryStats", "ScalingFit", "summarize", "fit_loglog",
    "verify_hypermutation_distribution", "verify_ageing_survivors",
    "sweep_table",
]
