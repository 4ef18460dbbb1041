"""Deterministic pseudo-random primitives shared by kernels and wrappers.

The generator is xoshiro256++ (4x64-bit state) seeded through a splitmix64
chain.  Every random decision in this package — bit draws, position draws,
uniform reals, binomial flip counts — reduces to calls into the jitted
primitives below, operating on a raw ``uint64[4]`` state array.  Both the
njit run kernels and the Python-level operator wrappers use the *same*
primitives on the same state layout, so a seed fully determines the output
of either layer, on any platform, at any thread count.

Seed-mixing contract (published): the stream for run ``i`` of an experiment
with master seed ``m`` is seeded with

    mix_seed(m, i) = splitmix64_mix((m + 0x9E3779B97F4A7C15 * (i + 1)) mod 2**64)

where ``splitmix64_mix`` is the standard splitmix64 output mixer.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U64 = np.uint64

_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


@njit(cache=True, nogil=True, inline="always")
def _rotl(x, k):
    return _U64((x << k) | (x >> (_U64(64) - k)))


@njit(cache=True, nogil=True)
def rng_next(state):
    """Advance the xoshiro256++ state one step and return a uint64."""
    result = _U64(_rotl(_U64(state[0] + state[3]), _U64(23)) + state[0])
    t = _U64(state[1] << _U64(17))
    state[2] ^= state[0]
    state[3] ^= state[1]
    state[1] ^= state[2]
    state[0] ^= state[3]
    state[2] ^= t
    state[3] = _rotl(state[3], _U64(45))
    return result


@njit(cache=True, nogil=True)
def rng_below(state, bound):
    """Uniform integer in [0, bound) for bound >= 1, via bitmask rejection.

    Always consumes at least one draw (exactly one when bound == 1, since
    the mask is then zero and the first masked draw is accepted).
    """
    b = _U64(bound)
    m = _U64(b - _U64(1))
    m |= m >> _U64(1)
    m |= m >> _U64(2)
    m |= m >> _U64(4)
    m |= m >> _U64(8)
    m |= m >> _U64(16)
    m |= m >> _U64(32)
    while True:
        v = _U64(rng_next(state) & m)
        if v < b:
            return np.int64(v)


@njit(cache=True, nogil=True)
def rng_bit(state):
    """Fair random bit (top bit of one generator step)."""
    return np.int64(rng_next(state) >> _U64(63))


@njit(cache=True, nogil=True)
def rng_uniform(state):
    """Uniform float64 in [0, 1) with 53 random bits."""
    return np.float64(rng_next(state) >> _U64(11)) * (2.0 ** -53)


@njit(cache=True, nogil=True)
def splitmix64_mix(z):
    """The splitmix64 output mixer (finalizer) on a uint64."""
    w = _U64(z)
    w = _U64((w ^ (w >> _U64(30))) * _U64(0xBF58476D1CE4E5B9))
    w = _U64((w ^ (w >> _U64(27))) * _U64(0x94D049BB133111EB))
    return _U64(w ^ (w >> _U64(31)))


@njit(cache=True, nogil=True)
def seed_state(seed):
    """Derive a fresh xoshiro256++ state from a 64-bit seed via splitmix64."""
    state = np.empty(4, dtype=np.uint64)
    z = _U64(seed)
    for i in range(4):
        z = _U64(z + _U64(0x9E3779B97F4A7C15))
        state[i] = splitmix64_mix(z)
    return state


def mix_seed(master_seed: int, run_index: int) -> int:
    """Derive the per-run stream seed from (master_seed, run_index).

    Pure function of its arguments; see the module docstring for the exact
    published formula.
    """
    if run_index < 0:
        raise ValueError("run_index must be non-negative")
    z = (int(master_seed) + _GOLDEN * (run_index + 1)) & _MASK64
    return int(splitmix64_mix(_U64(z)))
