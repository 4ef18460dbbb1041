"""Run loops checked by replay: the compiled runs must equal a pure-Python
re-composition of the public operators, record for record.

Because both routes share one random stream implementation, any divergence
in draw order, evaluation accounting, ageing, selection, or censoring shows
up as a record mismatch.  The matrix below covers every algorithm, all
stop modes, bounded/unbounded ageing, both diversity settings, multi-clone
populations, the alternative variation, and budget exhaustion at every
phase (initialization, mid-walk, selection fill).
"""

import math

import pytest

from optia import (
    ALGORITHM_IDS,
    AlgorithmConfig,
    BenchmarkSpec,
    OperatorParams,
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
from optia import BitString, RngStream  # fixture helpers

from _reference import reference_run


def cfg(algo, variation="hyper", **params):
    return AlgorithmConfig(algorithm_id=algo,
                           operator_params=OperatorParams(**params),
                           variation=variation)


REPLAY_CASES = [
    # (config, benchmark, budget)
    (cfg("OnePlusOneIAHyp", cm_mode="strict"),
     BenchmarkSpec("onemax", n=12), 2000),
    (cfg("OnePlusOneIAHyp", cm_mode="nonstrict", c=0.5),
     BenchmarkSpec("leadingones", n=10), 2500),
    (cfg("OnePlusOneIAHyp", cm_mode="none"),
     BenchmarkSpec("onemax", n=12), 300),
    (cfg("OnePlusOneEA"), BenchmarkSpec("onemax", n=12), 1500),
    (cfg("RLS1"), BenchmarkSpec("onemax", n=12), 1500),
    (cfg("OptIA", mu=3, dup=2, tau=5, cm_mode="nonstrict"),
     BenchmarkSpec("cliff", n=12, d=3), 4000),
    (cfg("OptIA", mu=2, tau=3, div=1, cm_mode="strict"),
     BenchmarkSpec("onemax", n=12), 3000),
    (cfg("OptIA", cm_mode="nonstrict"),
     BenchmarkSpec("jump", n=10, k=2), 4000),
    (cfg("OptIA", variation="sbm", mu=3, dup=2, tau=4),
     BenchmarkSpec("onemax", n=12), 2500),
    (cfg("OptIAStar", mu=2, dup=2, tau=6, div=1, cm_mode="nonstrict"),
     BenchmarkSpec("simpletrap", n=12), 4000),
    (cfg("OptIAStar", div=1, cm_mode="strict"),
     BenchmarkSpec("onemax", n=8), 1000),
    (cfg("MuRLSpAgeing", mu=4, p=0.25, tau=8),
     BenchmarkSpec("cliff", n=12, d=3), 3000),
    (cfg("MuRLSAgeingDiv", mu=3, tau=6, div=1),
     BenchmarkSpec("cliff", n=12, d=3), 3000),
    (cfg("MuRLSAgeingDiv", mu=3, tau=1, div=1),
     BenchmarkSpec("onemax", n=10), 1500),
    (cfg("MuEAAgeing", mu=2, tau=8),
     BenchmarkSpec("onemax", n=12), 2000),
    (cfg("OptIA", mu=2, tau=1, div=1, cm_mode="nonstrict"),
     BenchmarkSpec("hypertrap", n=12, gamma=0.125), 1000),
    (cfg("OptIA", mu=2, tau=20, cm_mode="strict"),
     BenchmarkSpec("hiddenpath", n=32), 1500),
]


@pytest.mark.parametrize("config,benchmark,budget",
                         REPLAY_CASES,
                         ids=[f"{c.algorithm_id}-{b.function_id}-n{b.n}-b{bud}"
                              + ("-sbm" if c.variation == "sbm" else "")
                              for c, b, bud in REPLAY_CASES])
def test_compiled_run_equals_operator_replay(config, benchmark, budget):
    saw_success = saw_failure = False
    for seed in range(5):
        got = run(config, benchmark, budget, seed)
        want = reference_run(config, benchmark, budget, seed)
        assert got == want, f"seed {seed}: {got} != {want}"
        assert got.evaluations_used <= budget
        if got.success:
            saw_success = True
            assert got.best_fitness == benchmark.optimum_value
        else:
            saw_failure = True
            # Failures are right-censored at exactly the budget.
            assert got.evaluations_used == budget
            assert got.best_fitness < benchmark.optimum_value
    assert saw_success or saw_failure  # matrix sanity


def tiny_budget_configs():
    return [
        cfg("OnePlusOneIAHyp"),
        cfg("OnePlusOneEA"),
        cfg("RLS1"),
        cfg("OptIA", mu=2, dup=2, tau=2),
        cfg("OptIA", variation="sbm", mu=2, tau=2),
        cfg("OptIAStar", mu=2, div=1, tau=2),
        cfg("MuRLSpAgeing", mu=3, p=0.25, tau=1),
        cfg("MuRLSAgeingDiv", mu=3, tau=1, div=1),
        cfg("MuEAAgeing", mu=3, tau=1),
    ]


def test_replay_equality_under_tiny_budgets():
    # Budgets of 1..7 hit exhaustion inside initialization, inside
    # mutation walks, and inside selection fills.
    benchmark = BenchmarkSpec("onemax", n=6)
    for config in tiny_budget_configs():
        for budget in (1, 2, 3, 7):
            for seed in range(3):
                got = run(config, benchmark, budget, seed)
                want = reference_run(config, benchmark, budget, seed)
                assert got == want, (config.algorithm_id, budget, seed, got, want)
                if not got.success:
                    assert got.evaluations_used == budget
                    assert got.best_fitness >= 0.0  # a standing point exists


def test_run_is_deterministic_and_seed_sensitive():
    config = cfg("OptIA", mu=2, tau=10)
    benchmark = BenchmarkSpec("onemax", n=20)
    a = run(config, benchmark, 10_000, 42)
    b = run(config, benchmark, 10_000, 42)
    assert a == b
    others = [run(config, benchmark, 10_000, s) for s in range(43, 47)]
    assert any(o.evaluations_used != a.evaluations_used for o in others)


def test_success_during_initialization_counts_zero_generations():
    benchmark = BenchmarkSpec("onemax", n=4)

    def first_four_bits_ones(s):
        r = RngStream(s)
        return all(r.bit() == 1 for _ in range(4))

    seed = next(s for s in range(100_000) if first_four_bits_ones(s))
    rec = run(cfg("OnePlusOneIAHyp"), benchmark, 100, seed)
    assert rec == RunRecord(success=True, evaluations_used=1, generations=0,
                            best_fitness=4.0, seed=seed)


def test_single_bit_problem_resolves_within_two_evaluations():
    benchmark = BenchmarkSpec("onemax", n=1)
    for seed in range(20):
        rec = run(cfg("OptIA"), benchmark, 10, seed)
        assert rec.success and rec.evaluations_used <= 2
        rec = run(cfg("OptIAStar", div=1), benchmark, 10, seed)
        assert rec.success and rec.evaluations_used <= 3


def test_elitist_configurations_never_lose_the_best():
    # Unbounded ageing with div=0 keeps a best individual forever: the best
    # fitness traced through the replay loop is non-decreasing.
    config = cfg("OptIA", mu=3, tau=math.inf, cm_mode="nonstrict")
    benchmark = BenchmarkSpec("cliff", n=10, d=2)
    for seed in range(3):
        trace = []
        reference_run(config, benchmark, 600, seed, trace_best=trace)
        assert all(x <= y for x, y in zip(trace, trace[1:]))


def test_best_fitness_on_failure_is_the_standing_best():
    # Impossible-within-budget setup; the record's best must equal the
    # maximum fitness among individuals alive at exhaustion, which the
    # replay exposes directly.
    config = cfg("OnePlusOneIAHyp", cm_mode="none", c=0.5)
    benchmark = BenchmarkSpec("onemax", n=16)
    for seed in range(5):
        got = run(config, benchmark, 200, seed)
        want = reference_run(config, benchmark, 200, seed)
        assert not got.success
        assert got == want
        assert 0.0 <= got.best_fitness < 16.0


# -- config plumbing -----------------------------------------------------------

def test_algorithm_ids_and_aliases():
    assert set(ALGORITHM_IDS) == {
        "OptIA", "OptIAStar", "OnePlusOneIAHyp", "OnePlusOneEA", "RLS1",
        "MuRLSpAgeing", "MuRLSAgeingDiv", "MuEAAgeing"}
    assert canonical_algorithm_id("ia-hyp") == "OnePlusOneIAHyp"
    assert canonical_algorithm_id("optia") == "OptIA"
    assert canonical_algorithm_id("optia-star") == "OptIAStar"
    assert canonical_algorithm_id("ea") == "OnePlusOneEA"
    assert canonical_algorithm_id("rls1") == "RLS1"
    assert canonical_algorithm_id("rls-p-ageing") == "MuRLSpAgeing"
    assert canonical_algorithm_id("rls-ageing-div") == "MuRLSAgeingDiv"
    assert canonical_algorithm_id("ea-ageing") == "MuEAAgeing"
    assert canonical_algorithm_id("OptIA") == "OptIA"
    with pytest.raises(ValueError):
        canonical_algorithm_id("nosuch")


def test_algorithm_config_validation():
    bad_cases = [
        dict(algorithm_id="NoSuch"),
        dict(algorithm_id="OnePlusOneIAHyp",
             operator_params=OperatorParams(mu=2)),
        dict(algorithm_id="OnePlusOneEA",
             operator_params=OperatorParams(dup=2)),
        dict(algorithm_id="RLS1", operator_params=OperatorParams(div=1)),
        dict(algorithm_id="OptIAStar"),  # div must be 1
        dict(algorithm_id="OptIAStar",
             operator_params=OperatorParams(div=1), variation="sbm"),
        dict(algorithm_id="OnePlusOneIAHyp", variation="sbm"),
        dict(algorithm_id="OptIA", variation="mystery"),
        dict(algorithm_id="OptIA", operator_params=OperatorParams(p=0.25)),
        dict(algorithm_id="MuRLSpAgeing", operator_params=OperatorParams(div=1, p=0.25)),
        dict(algorithm_id="MuRLSAgeingDiv"),  # div must be 1
        dict(algorithm_id="MuEAAgeing", operator_params=OperatorParams(div=1)),
    ]
    for kwargs in bad_cases:
        with pytest.raises(ValueError):
            AlgorithmConfig(**kwargs)


def test_algorithm_config_dict_round_trip():
    configs = [
        cfg("OptIA", mu=4, dup=2, tau=25, cm_mode="strict"),
        cfg("OptIA", variation="sbm"),
        cfg("OptIAStar", div=1),
        cfg("MuRLSpAgeing", mu=5, p=0.25, tau=922),
    ]
    for config in configs:
        assert AlgorithmConfig.from_dict(config.to_dict()) == config


def test_run_rejects_bad_budget():
    with pytest.raises(ValueError):
        run(cfg("RLS1"), BenchmarkSpec("onemax", n=5), 0, 1)
    with pytest.raises(ValueError):
        run(cfg("RLS1"), BenchmarkSpec("onemax", n=5), -5, 1)


def test_named_wrappers_dispatch_and_guard():
    benchmark = BenchmarkSpec("onemax", n=8)
    assert run_opt_ia(cfg("OptIA"), benchmark, 500, 3) == \
        run(cfg("OptIA"), benchmark, 500, 3)
    assert run_opt_ia_star(cfg("OptIAStar", div=1), benchmark, 500, 3) == \
        run(cfg("OptIAStar", div=1), benchmark, 500, 3)
    assert run_one_plus_one_ia_hyp(cfg("OnePlusOneIAHyp"), benchmark, 500, 3) == \
        run(cfg("OnePlusOneIAHyp"), benchmark, 500, 3)
    assert run_mu_rls_p_ageing(cfg("MuRLSpAgeing", mu=3, p=0.1, tau=5),
                               benchmark, 500, 3) == \
        run(cfg("MuRLSpAgeing", mu=3, p=0.1, tau=5), benchmark, 500, 3)
    assert run_mu_rls_ageing_div(cfg("MuRLSAgeingDiv", mu=3, tau=5, div=1),
                                 benchmark, 500, 3) == \
        run(cfg("MuRLSAgeingDiv", mu=3, tau=5, div=1), benchmark, 500, 3)
    assert run_mu_ea_ageing(cfg("MuEAAgeing", mu=3, tau=5), benchmark, 500, 3) == \
        run(cfg("MuEAAgeing", mu=3, tau=5), benchmark, 500, 3)
    with pytest.raises(ValueError):
        run_opt_ia(cfg("OnePlusOneEA"), benchmark, 500, 3)


def test_baseline_runners_take_no_config():
    benchmark = BenchmarkSpec("onemax", n=8)
    assert run_one_plus_one_ea(benchmark, 500, 3) == \
        run(cfg("OnePlusOneEA"), benchmark, 500, 3)
    assert run_rls1(benchmark, 500, 3) == run(cfg("RLS1"), benchmark, 500, 3)


def test_seed_is_reported_verbatim():
    rec = run(cfg("RLS1"), BenchmarkSpec("onemax", n=6), 100, 123456789)
    assert rec.seed == 123456789
