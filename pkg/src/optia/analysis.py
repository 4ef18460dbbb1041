"""Statistics over experiment results.

Success rates and central tendencies are computed over *successful* runs
only; failed runs are right-censored (their evaluation counts are lower
bounds) and are counted separately, never mixed into means.  Confidence
intervals come from a seeded bootstrap, and asymptotic growth claims are
checked by least-squares fits in log-log space — attempted only when
every sweep point has success rate 1, since censoring invalidates a
runtime mean.

The two ``verify_*`` functions are Monte Carlo distribution checks of the
randomized operators' core laws (uniform distinct-position hypermutation
walks; independent ageing deaths with survival probability 1/mu), driving
the identical compiled primitives the runs use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats as _scipy_stats

from . import _kernels as _k
from .core import RngStream
from .harness import ExperimentResult

__all__ = [
    "SummaryStats",
    "ScalingFit",
    "summarize",
    "fit_loglog",
    "verify_hypermutation_distribution",
    "verify_ageing_survivors",
    "sweep_table",
]

BOOTSTRAP_RESAMPLES = 4000
_BOOTSTRAP_SEED = 178431


@dataclass(frozen=True)
class SummaryStats:
    """Statistics of one experiment's records.

    Evaluation statistics cover successful runs only and are ``None``
    when no run succeeded; ``censored_count`` is the number of failed
    (budget-exhausted) runs.
    """

    success_rate: float
    mean_evals: Optional[float]
    median_evals: Optional[float]
    std_evals: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    censored_count: int


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line in (log n, log mean) space.

    ``slope`` estimates the power-law exponent, ``intercept`` the log of
    the leading constant; ``r_squared`` is computed on the log-log scale.
    """

    slope: float
    intercept: float
    r_squared: float
    points: Tuple[Tuple[float, float], ...]


def summarize(records: Sequence, resamples: int = BOOTSTRAP_RESAMPLES,
              seed: int = _BOOTSTRAP_SEED) -> SummaryStats:
    """Summary statistics over one experiment's run records.

    Bootstrap 95% interval for the mean uses ``resamples`` (>= 2000)
    seeded resamples, so summaries are deterministic.
    """
    if len(records) == 0:
        raise ValueError("summarize requires at least one record")
    if resamples < 2000:
        raise ValueError(f"resamples must be >= 2000, got {resamples}")
    evals = np.array([r.evaluations_used for r in records if r.success], dtype=np.float64)
    censored = sum(1 for r in records if not r.success)
    rate = float(len(evals)) / float(len(records))
    if evals.size == 0:
        return SummaryStats(success_rate=0.0, mean_evals=None, median_evals=None,
                            std_evals=None, ci_low=None, ci_high=None,
                            censored_count=censored)
    mean = float(np.mean(evals))
    median = float(np.median(evals))
    std = float(np.std(evals))
    boot_rng = np.random.default_rng(seed)
    idx = boot_rng.integers(0, evals.size, size=(resamples, evals.size))
    boot_means = evals[idx].mean(axis=1)
    ci_low = float(np.percentile(boot_means, 2.5))
    ci_high = float(np.percentile(boot_means, 97.5))
    return SummaryStats(success_rate=rate, mean_evals=mean, median_evals=median,
                        std_evals=std, ci_low=ci_low, ci_high=ci_high,
                        censored_count=censored)


def fit_loglog(points: Sequence[Tuple[float, float]]) -> ScalingFit:
    """Least-squares power-law fit of (n, mean) points in log-log space.

    Requires at least 3 points with strictly positive coordinates.
    """
    pts = tuple((float(n), float(y)) for n, y in points)
    if len(pts) < 3:
        raise ValueError(f"fit_loglog requires >= 3 points, got {len(pts)}")
    for n, y in pts:
        if n <= 0 or y <= 0:
            raise ValueError(f"fit_loglog requires strictly positive coordinates, got ({n}, {y})")
    x = np.log(np.array([p[0] for p in pts]))
    y = np.log(np.array([p[1] for p in pts]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingFit(slope=float(slope), intercept=float(intercept),
                      r_squared=float(r2), points=pts)


def verify_hypermutation_distribution(
    n: int, k: int, samples: int, rng: RngStream
) -> Tuple[float, float, bool]:
    """Monte Carlo check of the hypermutation walk's k-step law.

    On a constant-fitness landscape with strict stopping (so no stop ever
    fires), the walk's k-th point equals a fixed target at Hamming
    distance k with probability exactly 1/binom(n,k).  Returns
    ``(empirical, exact, passed)`` with pass iff the relative error is
    within 5%.
    """
    if not 1 <= k <= n <= 20:
        raise ValueError(f"need 1 <= k <= n <= 20, got k={k}, n={n}")
    if samples < 10 ** 5:
        raise ValueError(f"samples must be >= 1e5, got {samples}")
    hits = int(_k.sample_hyper_first_k(int(n), int(k), int(samples), rng.state))
    empirical = hits / float(samples)
    exact = 1.0 / math.comb(n, k)
    passed = abs(empirical - exact) / exact <= 0.05
    return empirical, exact, passed


def verify_ageing_survivors(mu: int, trials: int, rng: RngStream) -> Tuple[np.ndarray, bool]:
    """Monte Carlo check of hybrid ageing's death law.

    Ages a size-mu population sitting exactly at the threshold ``trials``
    times; each individual independently survives with probability 1/mu,
    so the survivor count is Binomial(mu, 1/mu).  Returns the survivor
    histogram (length mu+1) and a pass flag from a chi-square test at
    significance 0.01 (low-expectation bins merged below count 5).
    """
    if int(mu) != mu or mu < 2:
        raise ValueError(f"mu must be an integer >= 2, got {mu}")
    if trials < 10 ** 5:
        raise ValueError(f"trials must be >= 1e5, got {trials}")
    hist = np.asarray(_k.sample_ageing_survivors(int(mu), int(trials), rng.state))
    expected = _scipy_stats.binom.pmf(np.arange(mu + 1), mu, 1.0 / mu) * trials
    # merge trailing low-expectation bins so every chi-square cell has
    # expected count >= 5
    obs_bins, exp_bins = [], []
    acc_o, acc_e = 0.0, 0.0
    for o, e in zip(hist, expected):
        acc_o += float(o)
        acc_e += float(e)
        if acc_e >= 5.0:
            obs_bins.append(acc_o)
            exp_bins.append(acc_e)
            acc_o, acc_e = 0.0, 0.0
    if acc_e > 0.0:
        if exp_bins:
            obs_bins[-1] += acc_o
            exp_bins[-1] += acc_e
        else:
            obs_bins.append(acc_o)
            exp_bins.append(acc_e)
    obs = np.array(obs_bins)
    exp = np.array(exp_bins)
    # normalize the tiny float deficit (the pmf sums to 1 exactly)
    exp *= obs.sum() / exp.sum()
    if len(obs) < 2:
        return hist, True
    _stat, pvalue = _scipy_stats.chisquare(obs, exp)
    return hist, bool(pvalue >= 0.01)


def sweep_table(results: Sequence[ExperimentResult]) -> str:
    """Plot-ready tab-separated sweep table plus a fit summary line.

    One row per experiment (ordered by benchmark n):
    ``n\\tmean\\tci_low\\tci_high``.  The trailing comment line carries the
    log-log fit — or states why it was skipped, since a fit is only
    attempted when every n has success rate 1 (censored runs invalidate
    runtime means).
    """
    if len(results) == 0:
        raise ValueError("sweep_table requires at least one result")
    rows = []
    for res in results:
        if res.config is None:
            raise ValueError("sweep_table requires results with configs")
        rows.append((res.config.benchmark.n, summarize(res.records)))
    rows.sort(key=lambda t: t[0])
    lines = ["n\tmean\tci_low\tci_high"]
    incomplete = [n for n, s in rows if s.success_rate < 1.0]
    for n, s in rows:
        if s.mean_evals is None:
            lines.append(f"{n}\tnan\tnan\tnan")
        else:
            lines.append(f"{n}\t{s.mean_evals!r}\t{s.ci_low!r}\t{s.ci_high!r}")
    if incomplete:
        ns = ",".join(str(n) for n in incomplete)
        lines.append(f"# fit skipped: success_rate < 1 at n={ns}")
    elif len(rows) < 3:
        lines.append("# fit skipped: need >= 3 sweep points")
    else:
        fit = fit_loglog([(n, s.mean_evals) for n, s in rows])
        lines.append(
            f"# fit slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
            f"r_squared={fit.r_squared:.6f}"
        )
    return "\n".join(lines) + "\n"
