"""Command-line interface: seeded experiments, sweeps, operator
verification, scaling fits, and report rendering.

Subcommands: ``run`` (one experiment, results to <out>.csv + <out>.json),
``sweep`` (one experiment per n with an aggregated table and fit),
``verify-op`` (Monte Carlo operator-distribution checks), ``fit``
(power-law fit of a sweep table), ``report`` (tables, summaries, and
figures from saved results).

Exit codes: 0 success/pass, 1 validation error, 2 verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional, Tuple

from .algorithms import AlgorithmConfig, canonical_algorithm_id
from .analysis import fit_loglog, summarize, sweep_table, \
    verify_ageing_survivors, verify_hypermutation_distribution
from .benchmarks import FUNCTION_IDS, BenchmarkSpec
from .core import RngStream, mix_seed
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    ResultsParseError,
    load_results,
    run_experiment,
    save_results,
)
from .operators import CM_MODES, OperatorParams

__all__ = ["main", "build_parser", "FLAGS",
           "EXIT_OK", "EXIT_VALIDATION", "EXIT_VERIFY_FAIL", "EXIT_IO"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFY_FAIL = 2
EXIT_IO = 3

ALGO_NAMES = ("optia", "optia-star", "ia-hyp", "ea", "rls1",
              "rls-p-ageing", "rls-ageing-div", "ea-ageing")


class CliError(Exception):
    """Validation/verification/I-O failure carrying its exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports errors as CliError(1) instead of
    exiting the process."""

    def error(self, message):  # noqa: D102 (argparse hook)
        raise CliError(EXIT_VALIDATION, message)


# ---------------------------------------------------------------------------
# Flag registry: one help string (stating the flag's domain) per flag and
# subcommand.  build_parser() draws help text from here, and a test
# cross-references the registry against the constructed parsers, so the
# registry cannot drift from reality.

_ALGO_FLAGS = {
    "--algo": "algorithm: one of " + ", ".join(ALGO_NAMES),
    "--mu": "population size, integer >= 1 (default 1)",
    "--dup": "clones per parent, integer >= 1 (default 1)",
    "--c": "mutation potential factor, real in (0,1]; potential M = ceil(c*n) (default 1.0)",
    "--cm-mode": "hypermutation stopping rule, one of none, strict, nonstrict (default nonstrict)",
    "--tau": "age threshold: positive integer or inf (default inf)",
    "--p": "copy probability, real in [0,1/2), rls-p-ageing only (default 0)",
    "--div": "genotype-diversity selection flag, 0 or 1 (default: algorithm's standard setting)",
    "--variation": "optia variation operator, one of hyper, sbm (default hyper)",
}

_BENCH_FLAGS = {
    "--function": "benchmark function: one of " + ", ".join(FUNCTION_IDS),
    "--k": "jump gap parameter, integer in [1, n]",
    "--d": "cliff drop parameter, integer in [1, n]",
    "--gamma": "hypertrap distance factor, real in (0, 1/8]",
    "--epsilon": "hiddenpath path reward, real in (0, 1) (default 0.5)",
    "--z": "simpletrap slope break, real with 1 <= z <= n-2 (default floor(n/4))",
    "--a": "simpletrap optimum value, real with 3b/2 <= a <= 2b (default 2b)",
    "--b": "simpletrap all-ones value, real; must equal n - z - 1 (default n-z-1)",
}

_EXEC_FLAGS = {
    "--budget": "evaluation budget, positive integer; scientific notation accepted (e.g. 1e7)",
    "--runs": "independent runs, integer >= 1",
    "--seed": "master seed, integer; per-run seeds derive deterministically",
    "--out": "output stem (suffixes added per format)",
    "--parallelism": "worker threads, integer >= 1; never affects results (default 1)",
}

FLAGS = {
    "run": {
        **_ALGO_FLAGS,
        **_BENCH_FLAGS,
        "--n": "genotype length, integer >= 1",
        **_EXEC_FLAGS,
    },
    "sweep": {
        **_ALGO_FLAGS,
        **_BENCH_FLAGS,
        "--n-list": "comma-separated genotype lengths, at least 3 distinct integers >= 1",
        **_EXEC_FLAGS,
    },
    "verify-op": {
        "--which": "verifier to run: hypermutation or ageing",
        "--n": "genotype length for hypermutation, integer with k <= n <= 20 (default 12)",
        "--k": "target Hamming distance for hypermutation, integer >= 1 (default 2)",
        "--samples": "Monte Carlo samples for hypermutation, integer >= 1e5 (default 1e6)",
        "--mu": "population size for ageing, integer >= 2 (default 4)",
        "--trials": "Monte Carlo trials for ageing, integer >= 1e5 (default 1e5)",
        "--seed": "sampler seed, integer (default 1)",
    },
    "fit": {
        "--in": "sweep table to fit (tab-separated, as written by sweep/report)",
        "--out": "optional file to append the fit line to",
    },
    "report": {
        "--in": "one or more .json result files saved by run/sweep",
        "--out": "output stem for the table and figure (default: derived from the first input)",
    },
}


def _count(text: str) -> int:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isinf(value) or value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return int(value)


def _tau_value(text: str):
    if text.strip().lower() == "inf":
        return math.inf
    return _count(text)


def _n_list(text: str) -> List[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None
    if len(set(sizes)) != len(sizes):
        raise argparse.ArgumentTypeError("n-list sizes must be distinct")
    if len(sizes) < 3:
        raise argparse.ArgumentTypeError("n-list needs at least 3 sizes")
    if any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("n-list sizes must be >= 1")
    return sorted(sizes)


def _add_algo_bench_flags(sub: argparse.ArgumentParser, flags: dict) -> None:
    sub.add_argument("--algo", required=True, choices=ALGO_NAMES,
                     help=flags["--algo"])
    sub.add_argument("--mu", type=int, default=1, help=flags["--mu"])
    sub.add_argument("--dup", type=int, default=1, help=flags["--dup"])
    sub.add_argument("--c", type=float, default=1.0, help=flags["--c"])
    sub.add_argument("--cm-mode", dest="cm_mode", choices=CM_MODES,
                     default="nonstrict", help=flags["--cm-mode"])
    sub.add_argument("--tau", type=_tau_value, default=math.inf, help=flags["--tau"])
    sub.add_argument("--p", type=float, default=0.0, help=flags["--p"])
    sub.add_argument("--div", type=int, choices=(0, 1), default=None,
                     help=flags["--div"])
    sub.add_argument("--variation", choices=("hyper", "sbm"), default=None,
                     help=flags["--variation"])
    sub.add_argument("--function", required=True, choices=FUNCTION_IDS,
                     help=flags["--function"])
    sub.add_argument("--k", type=int, default=None, help=flags["--k"])
    sub.add_argument("--d", type=int, default=None, help=flags["--d"])
    sub.add_argument("--gamma", type=float, default=None, help=flags["--gamma"])
    sub.add_argument("--epsilon", type=float, default=None, help=flags["--epsilon"])
    sub.add_argument("--z", type=float, default=None, help=flags["--z"])
    sub.add_argument("--a", type=float, default=None, help=flags["--a"])
    sub.add_argument("--b", type=float, default=None, help=flags["--b"])


def _add_exec_flags(sub: argparse.ArgumentParser, flags: dict, out_default: str) -> None:
    sub.add_argument("--budget", type=_count, required=True, help=flags["--budget"])
    sub.add_argument("--runs", type=_count, required=True, help=flags["--runs"])
    sub.add_argument("--seed", type=int, required=True, help=flags["--seed"])
    sub.add_argument("--out", default=out_default, help=flags["--out"])
    sub.add_argument("--parallelism", type=_count, default=1,
                     help=flags["--parallelism"])


def build_parser() -> _Parser:
    parser = _Parser(
        prog="optia",
        description="Clonal-selection and local-search algorithms on "
                    "pseudo-Boolean benchmarks: seeded experiments, operator "
                    "verification, and scaling analysis.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                parser_class=_Parser)

    p_run = sub.add_parser("run", help="execute one experiment (many seeded runs)")
    _add_algo_bench_flags(p_run, FLAGS["run"])
    p_run.add_argument("--n", type=int, required=True, help=FLAGS["run"]["--n"])
    _add_exec_flags(p_run, FLAGS["run"], out_default="results")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="one experiment per n plus table and fit")
    _add_algo_bench_flags(p_sweep, FLAGS["sweep"])
    p_sweep.add_argument("--n-list", dest="n_list", type=_n_list, required=True,
                         help=FLAGS["sweep"]["--n-list"])
    _add_exec_flags(p_sweep, FLAGS["sweep"], out_default="sweep")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify-op", help="Monte Carlo operator checks")
    vf = FLAGS["verify-op"]
    p_verify.add_argument("--which", required=True,
                          choices=("hypermutation", "ageing"), help=vf["--which"])
    p_verify.add_argument("--n", type=int, default=12, help=vf["--n"])
    p_verify.add_argument("--k", type=int, default=2, help=vf["--k"])
    p_verify.add_argument("--samples", type=_count, default=10 ** 6,
                          help=vf["--samples"])
    p_verify.add_argument("--mu", type=int, default=4, help=vf["--mu"])
    p_verify.add_argument("--trials", type=_count, default=10 ** 5,
                          help=vf["--trials"])
    p_verify.add_argument("--seed", type=int, default=1, help=vf["--seed"])
    p_verify.set_defaults(func=cmd_verify_op)

    p_fit = sub.add_parser("fit", help="power-law fit of a sweep table")
    p_fit.add_argument("--in", dest="infile", required=True,
                       help=FLAGS["fit"]["--in"])
    p_fit.add_argument("--out", default=None, help=FLAGS["fit"]["--out"])
    p_fit.set_defaults(func=cmd_fit)

    p_rep = sub.add_parser("report", help="tables, summaries, and figures "
                                          "from saved results")
    p_rep.add_argument("--in", dest="infiles", required=True, nargs="+",
                       help=FLAGS["report"]["--in"])
    p_rep.add_argument("--out", default=None, help=FLAGS["report"]["--out"])
    p_rep.set_defaults(func=cmd_report)
    return parser


# ---------------------------------------------------------------------------
# Config assembly.


def _build_benchmark(args, n: int) -> BenchmarkSpec:
    kwargs = {}
    for name in ("k", "d", "gamma", "epsilon", "z", "a", "b"):
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    return BenchmarkSpec(function_id=args.function, n=n, **kwargs)


def _build_algorithm(args) -> AlgorithmConfig:
    algorithm_id = canonical_algorithm_id(args.algo)
    div = args.div
    if div is None:
        div = 1 if algorithm_id in ("OptIAStar", "MuRLSAgeingDiv") else 0
    params = OperatorParams(c=args.c, cm_mode=args.cm_mode, dup=args.dup,
                            tau=args.tau, mu=args.mu, p=args.p, div=div)
    return AlgorithmConfig(algorithm_id=algorithm_id, operator_params=params,
                           variation=args.variation or "hyper")


def _stem(path: str) -> str:
    root, suffix = os.path.splitext(path)
    return root if suffix.lower() in (".csv", ".json", ".tsv", ".png") else path


def _summary_line(tag: str, result: ExperimentResult) -> str:
    stats = summarize(result.records)
    mean = "nan" if stats.mean_evals is None else f"{stats.mean_evals:.1f}"
    cfg = result.config
    return (f"{tag} algorithm={cfg.algorithm.algorithm_id} "
            f"benchmark=[{cfg.benchmark.to_text()}] runs={cfg.runs} "
            f"success_rate={stats.success_rate:.3f} mean_evals={mean} "
            f"censored={stats.censored_count}")


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_run(args) -> int:
    benchmark = _build_benchmark(args, args.n)
    algorithm = _build_algorithm(args)
    config = ExperimentConfig(algorithm=algorithm, benchmark=benchmark,
                              budget=args.budget, runs=args.runs,
                              master_seed=args.seed,
                              parallelism=args.parallelism)
    result = run_experiment(config)
    stem = _stem(args.out)
    save_results(result, stem + ".csv")
    save_results(result, stem + ".json")
    print(_summary_line("run", result) + f" out={stem}.csv,{stem}.json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    algorithm = _build_algorithm(args)
    stem = _stem(args.out)
    results = []
    for n in args.n_list:
        benchmark = _build_benchmark(args, n)
        config = ExperimentConfig(algorithm=algorithm, benchmark=benchmark,
                                  budget=args.budget, runs=args.runs,
                                  master_seed=mix_seed(args.seed, n),
                                  parallelism=args.parallelism)
        result = run_experiment(config)
        save_results(result, f"{stem}_n{n}.csv")
        save_results(result, f"{stem}_n{n}.json")
        results.append(result)
        print(_summary_line("sweep", result))
    table = sweep_table(results)
    with open(stem + ".tsv", "w") as fh:
        fh.write(table)
    sys.stdout.write(table)
    print(f"sweep table written to {stem}.tsv")
    return EXIT_OK


def cmd_verify_op(args) -> int:
    rng = RngStream(args.seed)
    if args.which == "hypermutation":
        empirical, exact, passed = verify_hypermutation_distribution(
            args.n, args.k, args.samples, rng)
        rel = abs(empirical - exact) / exact
        print(f"verify-op hypermutation n={args.n} k={args.k} "
              f"samples={args.samples} empirical={empirical:.6g} "
              f"exact={exact:.6g} rel_err={rel:.4f} -> "
              f"{'PASS' if passed else 'FAIL'}")
    else:
        histogram, passed = verify_ageing_survivors(args.mu, args.trials, rng)
        hist_text = ",".join(str(int(v)) for v in histogram)
        print(f"verify-op ageing mu={args.mu} trials={args.trials} "
              f"survivor_histogram={hist_text} -> "
              f"{'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_VERIFY_FAIL


def _read_sweep_rows(path: str) -> List[Tuple[float, float]]:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    rows: List[Tuple[float, float]] = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split("\t")
        if fields[0] == "n":
            continue  # header
        if len(fields) < 2:
            raise CliError(EXIT_IO, f"{path}: line {lineno}: expected "
                                    f"tab-separated n and mean")
        try:
            rows.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise CliError(EXIT_IO, f"{path}: line {lineno}: non-numeric "
                                    f"value {text!r}") from None
    return rows


def cmd_fit(args) -> int:
    rows = _read_sweep_rows(args.infile)
    if any(math.isnan(mean) for _n, mean in rows):
        raise CliError(EXIT_VALIDATION,
                       "cannot fit: table contains censored (nan) means")
    fit = fit_loglog(rows)
    line = (f"fit slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
            f"r_squared={fit.r_squared:.6f} points={len(fit.points)}")
    print(line)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(line + "\n")
    return EXIT_OK


def _config_signature(config: ExperimentConfig) -> dict:
    data = config.to_dict()
    data["benchmark"] = {key: value for key, value in data["benchmark"].items()
                         if key != "n"}
    data.pop("master_seed")
    return data


def cmd_report(args) -> int:
    results = []
    for path in args.infiles:
        if not path.lower().endswith(".json"):
            raise CliError(EXIT_VALIDATION,
                           f"report requires .json result files, got {path!r}")
        try:
            results.append(load_results(path))
        except ResultsParseError as exc:
            raise CliError(EXIT_IO, str(exc)) from None
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    stem = _stem(args.out) if args.out else _stem(args.infiles[0]) + "_report"

    from .plots import plot_histogram, plot_scaling  # deferred: pulls in matplotlib

    if len(results) == 1:
        result = results[0]
        stats = summarize(result.records)
        header = ("algorithm\tbenchmark\truns\tsuccess_rate\tmean\tmedian"
                  "\tstd\tci_low\tci_high\tcensored")
        fmt = lambda v: "nan" if v is None else repr(float(v))  # noqa: E731
        row = "\t".join([
            result.config.algorithm.algorithm_id,
            result.config.benchmark.to_text(),
            str(result.config.runs),
            repr(stats.success_rate),
            fmt(stats.mean_evals), fmt(stats.median_evals), fmt(stats.std_evals),
            fmt(stats.ci_low), fmt(stats.ci_high),
            str(stats.censored_count),
        ])
        with open(stem + ".tsv", "w") as fh:
            fh.write(header + "\n" + row + "\n")
        plot_histogram(
            [r.evaluations_used for r in result.records if r.success],
            stem + ".png",
            title=f"{result.config.algorithm.algorithm_id} on "
                  f"{result.config.benchmark.to_text()}",
        )
        print(_summary_line("report", result) + f" out={stem}.tsv,{stem}.png")
        return EXIT_OK

    reference = _config_signature(results[0].config)
    for res in results[1:]:
        if _config_signature(res.config) != reference:
            raise CliError(EXIT_VALIDATION, "heterogeneous configs")
    sizes = [res.config.benchmark.n for res in results]
    if len(set(sizes)) != len(sizes):
        raise CliError(EXIT_VALIDATION, "heterogeneous configs: duplicate n")
    table = sweep_table(results)
    with open(stem + ".tsv", "w") as fh:
        fh.write(table)
    sys.stdout.write(table)

    rows = []
    all_complete = True
    for res in sorted(results, key=lambda r: r.config.benchmark.n):
        stats = summarize(res.records)
        if stats.mean_evals is None:
            all_complete = False
            continue
        if stats.success_rate < 1.0:
            all_complete = False
        rows.append((res.config.benchmark.n, stats.mean_evals,
                     stats.ci_low, stats.ci_high))
    fit = fit_loglog([(n, m) for n, m, _lo, _hi in rows]) \
        if all_complete and len(rows) >= 3 else None
    if rows:
        plot_scaling(rows, fit, stem + ".png",
                     title=f"{results[0].config.algorithm.algorithm_id} on "
                           f"{results[0].config.benchmark.function_id}")
    print(f"report written to {stem}.tsv and {stem}.png")
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
