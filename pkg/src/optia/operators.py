"""Variation, ageing, and selection operators for clonal-selection algorithms.

Every randomized operator here delegates to the identical jitted primitive
used by the compiled run loops in :mod:`optia.algorithms`, consuming the
same random draws in the same order, so a run composed from these wrappers
replays a compiled run bit for bit.

Evaluation accounting: operators that evaluate (the two hypermutation
walks and the selection fill) charge the shared
:class:`~optia.core.EvaluationCounter` one unit per evaluated point,
checking the budget *before* consuming any randomness for a point, and
raise :class:`~optia.core.OptimumFound` / :class:`~optia.core.BudgetExhausted`
exactly like :func:`optia.core.evaluate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import _kernels as _k
from .benchmarks import BenchmarkSpec
from .core import (
    BitString,
    BudgetExhausted,
    EvaluationCounter,
    Individual,
    OptimumFound,
    RngStream,
)

__all__ = [
    "CM_MODES",
    "OperatorParams",
    "MutationResult",
    "static_hypermutation",
    "hypermacromutation",
    "sbm",
    "rls_one",
    "rls_p",
    "clone_population",
    "hybrid_ageing",
    "select",
]

CM_MODES = ("none", "strict", "nonstrict")

_CM_CODE = {"none": _k.CM_NONE, "strict": _k.CM_STRICT, "nonstrict": _k.CM_NONSTRICT}


def _cm_code(mode: str) -> int:
    try:
        return _CM_CODE[mode]
    except KeyError:
        raise ValueError(f"cm_mode must be one of {CM_MODES}, got {mode!r}") from None


def _budget_i64(counter: Optional[EvaluationCounter]) -> int:
    if counter is None or counter.budget == math.inf:
        return _k.NO_BUDGET
    return int(counter.budget)


@dataclass(frozen=True)
class OperatorParams:
    """Shared operator parameters.

    ``c``: mutation potential factor in (0, 1]; the potential is
    M = ceil(c*n).  ``cm_mode``: stopping rule for hypermutation walks —
    ``none`` (flip all M, one evaluation), ``strict`` (stop at the first
    point strictly fitter than the parent), ``nonstrict`` (stop at the
    first point at least as fit).  ``dup``: clones per parent.  ``tau``:
    age threshold, a positive integer or ``math.inf`` to disable ageing
    deaths.  ``mu``: population size (sets the ageing survival probability
    1/mu and the selection target size).  ``p``: copy probability of the
    one-bit-flip-or-copy variation, in [0, 1/2).  ``div``: genotype
    diversity flag {0,1} for selection.
    """

    c: float = 1.0
    cm_mode: str = "nonstrict"
    dup: int = 1
    tau: float = math.inf
    mu: int = 1
    p: float = 0.0
    div: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < float(self.c) <= 1.0:
            raise ValueError(f"c must be in (0, 1], got {self.c}")
        object.__setattr__(self, "c", float(self.c))
        _cm_code(self.cm_mode)
        if int(self.dup) != self.dup or self.dup < 1:
            raise ValueError(f"dup must be a positive integer, got {self.dup}")
        object.__setattr__(self, "dup", int(self.dup))
        if self.tau != math.inf:
            if int(self.tau) != self.tau or self.tau < 1:
                raise ValueError(f"tau must be a positive integer or math.inf, got {self.tau}")
            object.__setattr__(self, "tau", int(self.tau))
        if int(self.mu) != self.mu or self.mu < 1:
            raise ValueError(f"mu must be a positive integer, got {self.mu}")
        object.__setattr__(self, "mu", int(self.mu))
        if not 0.0 <= float(self.p) < 0.5:
            raise ValueError(f"p must be in [0, 1/2), got {self.p}")
        object.__setattr__(self, "p", float(self.p))
        if self.div not in (0, 1):
            raise ValueError(f"div must be 0 or 1, got {self.div}")
        object.__setattr__(self, "div", int(self.div))

    def potential(self, n: int) -> int:
        """Mutation potential M = ceil(c*n); satisfies 1 <= M <= n."""
        return int(math.ceil(self.c * n))

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "cm_mode": self.cm_mode,
            "dup": self.dup,
            "tau": "inf" if self.tau == math.inf else self.tau,
            "mu": self.mu,
            "p": self.p,
            "div": self.div,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorParams":
        known = {"c", "cm_mode", "dup", "tau", "mu", "p", "div"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown operator parameter fields: {sorted(extra)}")
        kwargs = dict(data)
        if kwargs.get("tau") == "inf":
            kwargs["tau"] = math.inf
        return cls(**kwargs)


@dataclass(frozen=True)
class MutationResult:
    """Outcome of one hypermutation walk.

    ``offspring`` is the stopping point, ``evals_used`` the number of
    evaluations charged (1 without FCM, between 1 and M with it),
    ``constructive`` whether the active stopping rule held at the
    offspring, ``offspring_fitness`` its evaluated fitness, and
    ``offspring_age`` the age the offspring carries: 0 on strict fitness
    improvement over the parent, else the parent's age.
    """

    offspring: BitString
    evals_used: int
    constructive: bool
    offspring_fitness: float
    offspring_age: int


def _check_parent(x: Individual, f: BenchmarkSpec) -> None:
    if len(x.genotype) != f.n:
        raise ValueError(f"parent length {len(x.genotype)} does not match benchmark n={f.n}")
    if math.isnan(x.fitness):
        raise ValueError("parent fitness must be cached before mutation")


def static_hypermutation(
    x: Individual,
    f: BenchmarkSpec,
    params: OperatorParams,
    rng: RngStream,
    counter: EvaluationCounter,
) -> MutationResult:
    """Static hypermutation with potential M = ceil(c*n).

    Flips M distinct uniformly chosen positions one after another.  Under
    ``cm_mode='none'`` all M flips happen and the single final point is
    evaluated; under ``strict``/``nonstrict`` every intermediate point is
    evaluated and the walk stops at the first constructive one (fitness
    > resp. >= the parent's).  Raises :class:`OptimumFound` the moment any
    evaluated point attains the optimum and :class:`BudgetExhausted` when
    the budget cannot cover the next evaluation.
    """
    _check_parent(x, f)
    n = f.n
    m_pot = params.potential(n)
    bits = np.array(x.genotype.array, dtype=np.uint8)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    fpos = np.zeros(n, np.int64)
    before = int(counter.used)
    cnt = np.array([before], np.int64)
    bid, nn, ip1, fp1, fp2, fp3 = f.packed()
    status, _ones, fit, constructive, _steps = _k.hyper_walk(
        bits, x.genotype.count_ones(), float(x.fitness), m_pot, _cm_code(params.cm_mode),
        bid, nn, ip1, fp1, fp2, fp3, f.optimum_value,
        perm, jbuf, fpos, rng.state, cnt, _budget_i64(counter),
    )
    counter.used = int(cnt[0])
    if status == _k.ST_FOUND:
        raise OptimumFound(float(fit), counter.used, point=BitString(bits))
    if status == _k.ST_EXHAUSTED:
        raise BudgetExhausted(counter.used)
    fit = float(fit)
    return MutationResult(
        offspring=BitString(bits),
        evals_used=counter.used - before,
        constructive=bool(constructive),
        offspring_fitness=fit,
        offspring_age=0 if fit > x.fitness else x.age,
    )


def hypermacromutation(
    x: Individual,
    f: BenchmarkSpec,
    cm_mode: str,
    rng: RngStream,
    counter: EvaluationCounter,
) -> MutationResult:
    """Contiguous-region hypermacromutation.

    Draws 1-indexed i uniform on [1, n-1] and j uniform on [i+1, n], then
    flips positions i..j in order, evaluating stepwise under the given
    ``cm_mode`` (or once at the end for ``'none'``).  The degenerate n=1
    genotype flips its single bit with no draws.  Signals as
    :func:`static_hypermutation`.
    """
    _check_parent(x, f)
    n = f.n
    bits = np.array(x.genotype.array, dtype=np.uint8)
    before = int(counter.used)
    cnt = np.array([before], np.int64)
    bid, nn, ip1, fp1, fp2, fp3 = f.packed()
    status, _ones, fit, constructive, _steps = _k.macro_walk(
        bits, x.genotype.count_ones(), float(x.fitness), _cm_code(cm_mode),
        bid, nn, ip1, fp1, fp2, fp3, f.optimum_value,
        rng.state, cnt, _budget_i64(counter),
    )
    counter.used = int(cnt[0])
    if status == _k.ST_FOUND:
        raise OptimumFound(float(fit), counter.used, point=BitString(bits))
    if status == _k.ST_EXHAUSTED:
        raise BudgetExhausted(counter.used)
    fit = float(fit)
    return MutationResult(
        offspring=BitString(bits),
        evals_used=counter.used - before,
        constructive=bool(constructive),
        offspring_fitness=fit,
        offspring_age=0 if fit > x.fitness else x.age,
    )


def sbm(x: BitString, rng: RngStream) -> BitString:
    """Standard bit mutation: each bit flips independently with rate 1/n.

    No evaluation happens here; the caller evaluates (and charges for)
    the offspring.
    """
    n = len(x)
    bits = np.array(x.array, dtype=np.uint8)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    q0 = ((n - 1.0) / n) ** n
    _k.sbm_apply(bits, x.count_ones(), n, q0, rng.state, perm, jbuf)
    return BitString(bits)


def rls_one(x: BitString, rng: RngStream) -> BitString:
    """Flip exactly one uniformly chosen bit."""
    bits = np.array(x.array, dtype=np.uint8)
    _k.rls_apply(bits, x.count_ones(), len(x), rng.state)
    return BitString(bits)


def rls_p(x: BitString, p: float, rng: RngStream) -> BitString:
    """With probability p return a copy of x, else a one-bit flip.

    The copy-or-flip uniform draw is always consumed, even for p = 0.
    """
    if not 0.0 <= p < 0.5:
        raise ValueError(f"p must be in [0, 1/2), got {p}")
    u = rng.uniform()
    if u >= p:
        return rls_one(x, rng)
    return BitString(x)


def clone_population(P: Sequence[Individual], dup: int) -> List[Individual]:
    """dup independent copies of every individual, parent-major order,
    preserving age and cached fitness; charges no evaluations."""
    if int(dup) != dup or dup < 1:
        raise ValueError(f"dup must be a positive integer, got {dup}")
    return [ind.copy() for ind in P for _ in range(int(dup))]


def hybrid_ageing(
    P: Sequence[Individual], tau: float, mu: int, rng: RngStream
) -> List[Individual]:
    """Hybrid ageing: increment every age, then kill each over-threshold
    individual independently with probability 1 - 1/mu.

    Ages mutate in place; the returned list holds the survivors in order.
    One uniform draw is consumed per over-threshold individual (in index
    order); ``tau = math.inf`` disables deaths but still increments ages.
    """
    if int(mu) != mu or mu < 1:
        raise ValueError(f"mu must be a positive integer, got {mu}")
    if tau != math.inf and (int(tau) != tau or tau < 1):
        raise ValueError(f"tau must be a positive integer or math.inf, got {tau}")
    count = len(P)
    ages = np.array([ind.age for ind in P], dtype=np.int64).reshape(count)
    alive = np.ones(count, dtype=np.bool_)
    tau_i = -1 if tau == math.inf else int(tau)
    _k.ageing_pass(ages, alive, count, tau_i, 1.0 / int(mu), rng.state)
    for ind, age in zip(P, ages):
        ind.age = int(age)
    return [ind for ind, ok in zip(P, alive) if ok]


def select(
    parents: Sequence[Individual],
    offspring: Sequence[Individual],
    mu: int,
    div: int,
    rng: RngStream,
    benchmark: Optional[BenchmarkSpec] = None,
    counter: Optional[EvaluationCounter] = None,
) -> List[Individual]:
    """Truncation selection of parents ∪ offspring down (or up) to mu.

    With ``div=1`` any offspring whose genotype equals some parent's is
    discarded first (offspring-offspring duplicates are retained).  While
    more than mu individuals remain, one lowest-fitness individual is
    removed, ties broken uniformly at random.  If fewer than mu remain,
    fresh uniformly random age-0 individuals fill the gap — this requires
    ``benchmark`` and ``counter``, charges one evaluation per fill, and
    checks each for the optimum.  :class:`BudgetExhausted` raised during
    the fill carries the partial population.
    """
    if int(mu) != mu or mu < 1:
        raise ValueError(f"mu must be a positive integer, got {mu}")
    mu = int(mu)
    if div not in (0, 1):
        raise ValueError(f"div must be 0 or 1, got {div}")
    pool = list(parents) + list(offspring)
    if benchmark is not None:
        n = benchmark.n
    elif pool:
        n = len(pool[0].genotype)
    else:
        raise ValueError("select with no individuals requires a benchmark to draw fresh ones")
    for ind in pool:
        if len(ind.genotype) != n:
            raise ValueError("all individuals must share the benchmark's length n")
        if math.isnan(ind.fitness):
            raise ValueError("all individuals must carry cached fitness")

    pc, oc = len(parents), len(offspring)
    pop_bits = np.zeros((pc, n), np.uint8)
    pop_fit = np.zeros(pc, np.float64)
    pop_age = np.zeros(pc, np.int64)
    pop_ones = np.zeros(pc, np.int64)
    pop_alive = np.ones(pc, np.bool_)
    for i, ind in enumerate(parents):
        pop_bits[i] = ind.genotype.array
        pop_fit[i] = ind.fitness
        pop_age[i] = ind.age
        pop_ones[i] = ind.genotype.count_ones()
    off_bits = np.zeros((oc, n), np.uint8)
    off_fit = np.zeros(oc, np.float64)
    off_age = np.zeros(oc, np.int64)
    off_ones = np.zeros(oc, np.int64)
    off_alive = np.ones(oc, np.bool_)
    for o, ind in enumerate(offspring):
        off_bits[o] = ind.genotype.array
        off_fit[o] = ind.fitness
        off_age[o] = ind.age
        off_ones[o] = ind.genotype.count_ones()

    if div == 1:
        _k.div_filter(pop_bits, pop_ones, pop_alive, pc,
                      off_bits, off_ones, off_alive, oc, n)
    alive_total = int(pop_alive.sum()) + int(off_alive.sum())
    if alive_total < mu and (benchmark is None or counter is None):
        raise ValueError("selection fill requires a benchmark and an evaluation counter")

    if benchmark is not None:
        bid, nn, ip1, fp1, fp2, fp3 = benchmark.packed()
        opt_val = benchmark.optimum_value
    else:
        bid, nn, ip1, fp1, fp2, fp3 = _k.B_CONST, n, 0, 0.0, 0.0, 0.0
        opt_val = math.nan
    new_bits = np.zeros((mu, n), np.uint8)
    new_fit = np.zeros(mu, np.float64)
    new_age = np.zeros(mu, np.int64)
    new_ones = np.zeros(mu, np.int64)
    cnt = np.array([counter.used if counter is not None else 0], np.int64)
    status, m = _k.select_compact(
        pop_bits, pop_fit, pop_age, pop_ones, pop_alive, pc,
        off_bits, off_fit, off_age, off_ones, off_alive, oc,
        new_bits, new_fit, new_age, new_ones, mu,
        bid, nn, ip1, fp1, fp2, fp3, opt_val,
        rng.state, cnt, _budget_i64(counter),
    )
    if counter is not None:
        counter.used = int(cnt[0])
    m = int(m)
    survivors = [
        Individual(BitString(new_bits[i]), int(new_age[i]), float(new_fit[i]))
        for i in range(m)
    ]
    if status == _k.ST_FOUND:
        raise OptimumFound(float(opt_val), counter.used if counter else 0,
                           point=survivors[-1].genotype)
    if status == _k.ST_EXHAUSTED:
        raise BudgetExhausted(counter.used if counter else 0,
                              partial_population=survivors)
    return survivors
