"""Genotypes, evaluation accounting, and the deterministic randomness contract.

Evaluation cost model: every call to :func:`evaluate` charges exactly one
unit against the run's :class:`EvaluationCounter`.  Two signals terminate a
run, both raised by :func:`evaluate` itself so that no composed loop can
forget to check them:

* :class:`OptimumFound` — the evaluated point attains the benchmark's
  optimal value (checked on *every* counted evaluation, including
  intermediate hypermutation points); the run succeeded.
* :class:`BudgetExhausted` — the counter has no budget left for the
  requested evaluation; the run failed and the un-evaluated point is
  discarded.

Determinism: :class:`RngStream` wraps the jitted xoshiro256++ generator from
``optia._rng``; identical seeds yield identical draw sequences on every
platform and at every thread count, and per-run seeds derive from
``mix_seed(master_seed, run_index)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from . import _rng
from ._rng import mix_seed

__all__ = [
    "BitString",
    "Individual",
    "EvaluationCounter",
    "RngStream",
    "OptimumFound",
    "BudgetExhausted",
    "count_ones",
    "count_zeros",
    "hamming",
    "evaluate",
    "mix_seed",
]

_MASK64 = (1 << 64) - 1


class BitString:
    """Fixed-length immutable binary genotype.

    Accepts a string of ``'0'``/``'1'`` characters, any iterable of 0/1
    integers, a numpy array of 0/1 values, or another :class:`BitString`.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, Iterable[int], np.ndarray, "BitString"]):
        if isinstance(bits, BitString):
            arr = bits._bits  # already validated and read-only
        else:
            if isinstance(bits, str):
                raw = np.frombuffer(bits.encode("ascii"), dtype=np.uint8)
                arr = (raw - ord("0")).astype(np.uint8)
                if raw.size and not np.all((raw == ord("0")) | (raw == ord("1"))):
                    raise ValueError("bit string may contain only '0' and '1'")
            elif isinstance(bits, np.ndarray):
                arr = bits.astype(np.uint8, copy=True).reshape(-1)
                if bits.ndim != 1:
                    raise ValueError("bit array must be one-dimensional")
                if not np.all(arr <= 1):
                    raise ValueError("bit values must be 0 or 1")
            else:
                vals = [int(b) for b in bits]
                if any(v not in (0, 1) for v in vals):
                    raise ValueError("bit values must be 0 or 1")
                arr = np.array(vals, dtype=np.uint8)
            if arr.size < 1:
                raise ValueError("bit string length must be positive")
            arr.setflags(write=False)
        self._bits = arr

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(np.zeros(_checked_n(n), dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(np.ones(_checked_n(n), dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: "RngStream") -> "BitString":
        """Uniformly random genotype, consuming one bit draw per position
        in index order (the same draw pattern the run kernels use)."""
        n = _checked_n(n)
        arr = np.empty(n, dtype=np.uint8)
        for q in range(n):
            arr[q] = rng.bit()
        return cls(arr)

    # -- views and helpers --------------------------------------------
    @property
    def n(self) -> int:
        return int(self._bits.size)

    @property
    def array(self) -> np.ndarray:
        """Read-only numpy view of the bits."""
        return self._bits

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def count_ones(self) -> int:
        return int(self._bits.sum())

    def count_zeros(self) -> int:
        return self.n - self.count_ones()

    def flipped(self, positions: Iterable[int]) -> "BitString":
        """New genotype with the given (0-indexed) positions flipped."""
        arr = self._bits.copy()
        for pos in positions:
            arr[pos] ^= 1
        return BitString(arr)

    # -- dunder -------------------------------------------------------
    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.n == other.n and bool(np.all(self._bits == other._bits))

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitString('{self.to01()}')"


def _checked_n(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    return n


def count_ones(x: BitString) -> int:
    """Number of 1-valued positions in x."""
    return x.count_ones()


def count_zeros(x: BitString) -> int:
    """Number of 0-valued positions in x."""
    return x.count_zeros()


def hamming(x: BitString, y: BitString) -> int:
    """Number of mismatching positions between two equal-length genotypes."""
    if len(x) != len(y):
        raise ValueError("hamming distance requires equal lengths")
    return int(np.count_nonzero(x.array != y.array))


@dataclass
class Individual:
    """A candidate solution: genotype plus age plus cached fitness.

    The cached fitness must equal re-evaluating the genotype under the
    run's benchmark; ageing mutates ``age`` in place, variation operators
    reset a strict improver's age to zero.
    """

    genotype: BitString
    age: int = 0
    fitness: float = math.nan

    def copy(self) -> "Individual":
        """Independent copy (genotype objects are immutable and shared)."""
        return Individual(self.genotype, self.age, self.fitness)


@dataclass
class EvaluationCounter:
    """Monotone counter of fitness evaluations against a budget.

    ``budget`` is a positive integer or ``math.inf`` for unbounded runs.
    """

    budget: float
    used: int = 0

    def __post_init__(self) -> None:
        if self.budget != math.inf:
            if int(self.budget) != self.budget or self.budget < 1:
                raise ValueError("budget must be a positive integer or math.inf")
            self.budget = int(self.budget)
        if self.used < 0:
            raise ValueError("used must be non-negative")

    @property
    def remaining(self) -> float:
        return self.budget - self.used


class OptimumFound(Exception):
    """Success signal: a counted evaluation hit the benchmark's optimum.

    Carries the optimal ``fitness``, the counter value ``evaluations`` at
    the moment of discovery, and the evaluated ``point``.
    """

    def __init__(self, fitness: float, evaluations: int, point: BitString | None = None):
        super().__init__(f"optimum found (fitness {fitness}) after {evaluations} evaluations")
        self.fitness = float(fitness)
        self.evaluations = int(evaluations)
        self.point = point


class BudgetExhausted(Exception):
    """Failure signal: the evaluation budget is spent.

    ``partial_population`` optionally carries the standing population at
    the moment of exhaustion (used by selection fills, whose survivors are
    otherwise unreachable by the caller).
    """

    def __init__(self, evaluations: int, partial_population: Sequence[Individual] | None = None):
        super().__init__(f"evaluation budget exhausted after {evaluations} evaluations")
        self.evaluations = int(evaluations)
        self.partial_population = list(partial_population) if partial_population is not None else None


def evaluate(f, x: BitString, counter: EvaluationCounter) -> float:
    """Evaluate benchmark ``f`` at ``x``, charging one unit of budget.

    Returns ``f(x)`` for non-optimal points.  Raises :class:`OptimumFound`
    (carrying the value) when ``x`` attains the optimum — the success
    signal for the calling run loop — and :class:`BudgetExhausted` when no
    budget remains, in which case nothing is evaluated.
    """
    if counter.used >= counter.budget:
        raise BudgetExhausted(counter.used)
    counter.used += 1
    value = float(f.evaluate_bits(x.array, x.count_ones()))
    if value == f.optimum_value:
        raise OptimumFound(value, counter.used, point=x)
    return value


class RngStream:
    """Deterministic per-run random stream (xoshiro256++).

    Identical seeds produce identical sequences on every platform; the
    stream for run ``i`` of an experiment derives as
    ``RngStream(mix_seed(master_seed, i))``.  The underlying state array is
    shared with the jitted kernels, so Python-level draws and kernel-level
    draws interleave consistently.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._state = _rng.seed_state(np.uint64(self.seed))

    @property
    def state(self) -> np.ndarray:
        """The raw uint64[4] generator state (for kernel interop)."""
        return self._state

    def next_u64(self) -> int:
        """Next raw 64-bit draw."""
        return int(_rng.rng_next(self._state))

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) for bound >= 1."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        return int(_rng.rng_below(self._state, int(bound)))

    def bit(self) -> int:
        """Fair random bit."""
        return int(_rng.rng_bit(self._state))

    def uniform(self) -> float:
        """Uniform float64 in [0, 1)."""
        return float(_rng.rng_uniform(self._state))
