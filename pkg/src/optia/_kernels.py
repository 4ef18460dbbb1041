"""Jitted numerical core: benchmark evaluation, mutation walks, ageing,
selection, complete run loops, and Monte Carlo samplers.

Internal module.  Everything here operates on raw numpy buffers (uint8 bit
rows, int64/float64 scalars and arrays) plus the xoshiro256++ state from
``_rng``; the public modules wrap these primitives in typed dataclasses.

Replay contract: the Python-level operator wrappers in ``optia.operators``
call the very same jitted primitives in the very same order as the run
kernels below, so a (config, benchmark, budget, seed) tuple produces an
identical draw/evaluation sequence through either layer.

Evaluation-point protocol (uniform everywhere): first check the budget
(``used >= budget`` fails the run before any draws are consumed for that
point), then consume the rng draws belonging to the point, then evaluate,
count, and test for the optimum.  An evaluated optimum terminates the run
successfully even when it is an intermediate hypermutation point.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._rng import rng_below, rng_bit, rng_next, rng_uniform, seed_state

# ---------------------------------------------------------------------------
# Integer codes shared with the Python layer.

B_CONST = 0  # internal constant-fitness landscape (samplers only)
B_ONEMAX = 1
B_ZEROMAX = 2
B_LEADINGONES = 3
B_JUMP = 4
B_CLIFF = 5
B_SIMPLETRAP = 6
B_HIDDENPATH = 7
B_HYPERTRAP = 8

CM_NONE = 0
CM_STRICT = 1
CM_NONSTRICT = 2

VAR_HYPER = 0
VAR_SBM = 1
VAR_RLS = 2
VAR_RLSP = 3

ST_OK = 0
ST_FOUND = 1
ST_EXHAUSTED = 2

# Budget sentinel for sampler loops that never exhaust.
NO_BUDGET = 1 << 62


# ---------------------------------------------------------------------------
# Benchmark evaluation.


@njit(cache=True, nogil=True)
def min_sp_dist(bits, ones, n):
    """Minimum Hamming distance from x to the short path {1^i 0^(n-i)}.

    The path index i ranges over prefix lengths with 2*i >= n and i <= n-1.
    Distance to the path point with prefix length i is
    (i - prefix_ones(i)) + (ones - prefix_ones(i)).
    """
    pref = np.int64(0)
    best = np.int64(1) << np.int64(62)
    for i in range(1, n):
        if bits[i - 1] == 1:
            pref += 1
        if 2 * i >= n:
            d = i + ones - 2 * pref
            if d < best:
                best = d
    return best


@njit(cache=True, nogil=True)
def bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones):
    """Evaluate one packed benchmark at ``bits`` (with precomputed ``ones``).

    Packing: ip1 holds k (Jump), d (Cliff), log2(n) (HiddenPath) or
    ceil(gamma*n) (HyperTrap); fp1..fp3 hold epsilon (HiddenPath) or
    z, a, b (SimpleTrap).
    """
    if bid == B_CONST:
        return 0.0
    if bid == B_ONEMAX:
        return np.float64(ones)
    if bid == B_ZEROMAX:
        return np.float64(n - ones)
    if bid == B_LEADINGONES:
        lo = np.int64(0)
        for i in range(n):
            if bits[i] == 1:
                lo += 1
            else:
                break
        return np.float64(lo)
    if bid == B_JUMP:
        k = ip1
        if ones <= n - k or ones == n:
            return np.float64(k + ones)
        return np.float64(n - ones)
    if bid == B_CLIFF:
        d = ip1
        if ones <= n - d:
            return np.float64(ones)
        return np.float64(ones - d) + 0.5
    if bid == B_SIMPLETRAP:
        z = fp1
        a = fp2
        b = fp3
        if ones <= z:
            return a * (z - ones) / z
        return b * (ones - z) / (n - z)
    if bid == B_HIDDENPATH:
        big_l = ip1
        eps = fp1
        zeros = n - ones
        if zeros == n:
            return 0.0
        if zeros >= 5 and zeros <= big_l + 1:
            # Short-path candidate 1^(n-zeros) 0^zeros.
            on_path = True
            for i in range(n - zeros):
                if bits[i] == 0:
                    on_path = False
                    break
            if on_path:
                return n - eps + eps * zeros / big_l
        if zeros == n - 1:
            return np.float64(n)
        if zeros == 5:
            s = np.int64(0)
            for i in range(n - 5, n):
                if bits[i] == 0:
                    s += 1
            return n - eps + s / n
        if zeros < 5:
            return 0.0
        return np.float64(zeros)
    # B_HYPERTRAP
    thr = ip1
    if ones == n:
        nf = np.float64(n)
        return nf * nf * nf * nf
    if 4 * ones >= 3 * n:
        if min_sp_dist(bits, ones, n) >= thr:
            nf = np.float64(n)
            return nf * nf * nf
    if 2 * ones >= n:
        # Short-path candidate 1^ones 0^(n-ones), ones < n here.
        on_path = True
        for i in range(ones):
            if bits[i] == 0:
                on_path = False
                break
        if on_path:
            return np.float64(n) * np.float64(n) * np.float64(ones)
    if 2 * ones == n:
        w = 0.0
        for i in range(n):
            if bits[i] == 1:
                w += np.float64(n - (i + 1))
        return n / 2.0 + w / n
    if 2 * ones < n:
        return np.float64(ones)
    return np.float64(n - ones)


# ---------------------------------------------------------------------------
# Mutation primitives.  All mutate a bit row in place and keep `perm`
# restored to the identity permutation on normal return.


@njit(cache=True, nogil=True)
def hyper_walk(bits, ones, parent_fit, m_pot, cm,
               bid, n, ip1, fp1, fp2, fp3, opt_val,
               perm, jbuf, fpos, state, cnt, budget):
    """Static hypermutation walk of potential ``m_pot`` on ``bits`` in place.

    Flips distinct uniformly chosen positions one after another.  Under
    cm None a single evaluation happens after all flips; under strict /
    non-strict each flip is evaluated and the walk stops at the first point
    with fitness > (resp. >=) the parent's.  Flipped positions are recorded
    in ``fpos[0:steps]``.

    Returns (status, ones, fitness, constructive, steps).  On ST_FOUND /
    ST_EXHAUSTED the run is over; the caller discards the row (and the
    identity permutation is then irrelevant, so it is not restored).
    """
    constructive = np.int64(0)
    steps = np.int64(0)
    fit = parent_fit
    status = ST_OK
    if cm == CM_NONE:
        if cnt[0] >= budget:
            return ST_EXHAUSTED, ones, fit, constructive, steps
        for s in range(m_pot):
            j = s + rng_below(state, n - s)
            jbuf[s] = j
            t = perm[s]
            perm[s] = perm[j]
            perm[j] = t
            pos = perm[s]
            fpos[s] = pos
            bits[pos] ^= 1
            if bits[pos] == 1:
                ones += 1
            else:
                ones -= 1
        steps = m_pot
        cnt[0] += 1
        fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones)
        if fit == opt_val:
            return ST_FOUND, ones, fit, constructive, steps
    else:
        for s in range(m_pot):
            if cnt[0] >= budget:
                status = ST_EXHAUSTED
                break
            j = s + rng_below(state, n - s)
            jbuf[s] = j
            t = perm[s]
            perm[s] = perm[j]
            perm[j] = t
            pos = perm[s]
            fpos[s] = pos
            bits[pos] ^= 1
            if bits[pos] == 1:
                ones += 1
            else:
                ones -= 1
            steps = s + 1
            cnt[0] += 1
            f = bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones)
            fit = f
            if f == opt_val:
                status = ST_FOUND
                break
            if cm == CM_STRICT:
                if f > parent_fit:
                    constructive = 1
                    break
            else:
                if f >= parent_fit:
                    constructive = 1
                    break
        if status != ST_OK:
            return status, ones, fit, constructive, steps
    # Restore perm to the identity (one undo per drawn position).
    for s in range(steps - 1, -1, -1):
        j = jbuf[s]
        t = perm[s]
        perm[s] = perm[j]
        perm[j] = t
    return status, ones, fit, constructive, steps


@njit(cache=True, nogil=True)
def macro_walk(bits, ones, parent_fit, cm,
               bid, n, ip1, fp1, fp2, fp3, opt_val,
               state, cnt, budget):
    """Hypermacromutation on ``bits`` in place.

    Draws 1-indexed i uniform on [1, n-1] and j uniform on [i+1, n], then
    flips positions i..j in order under the same cm stopping rules as
    ``hyper_walk``.  For n == 1 the single bit is flipped with no draws.

    Returns (status, ones, fitness, constructive, steps).
    """
    constructive = np.int64(0)
    steps = np.int64(0)
    fit = parent_fit
    if cnt[0] >= budget:
        return ST_EXHAUSTED, ones, fit, constructive, steps
    if n == 1:
        i0 = np.int64(0)
        j0 = np.int64(0)
    else:
        i0 = rng_below(state, n - 1)
        j0 = i0 + 1 + rng_below(state, n - 1 - i0)
    if cm == CM_NONE:
        for pos in range(i0, j0 + 1):
            bits[pos] ^= 1
            if bits[pos] == 1:
                ones += 1
            else:
                ones -= 1
        steps = j0 - i0 + 1
        cnt[0] += 1
        fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones)
        if fit == opt_val:
            return ST_FOUND, ones, fit, constructive, steps
        return ST_OK, ones, fit, constructive, steps
    for pos in range(i0, j0 + 1):
        if cnt[0] >= budget:
            return ST_EXHAUSTED, ones, fit, constructive, steps
        bits[pos] ^= 1
        if bits[pos] == 1:
            ones += 1
        else:
            ones -= 1
        steps += 1
        cnt[0] += 1
        f = bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones)
        fit = f
        if f == opt_val:
            return ST_FOUND, ones, fit, constructive, steps
        if cm == CM_STRICT:
            if f > parent_fit:
                constructive = 1
                break
        else:
            if f >= parent_fit:
                constructive = 1
                break
    return ST_OK, ones, fit, constructive, steps


@njit(cache=True, nogil=True)
def sbm_apply(bits, ones, n, q0, state, perm, jbuf):
    """Standard bit mutation on ``bits`` in place (rate 1/n).

    Implemented as a Binomial(n, 1/n) flip count drawn by cdf inversion
    (q0 = (1-1/n)^n precomputed) followed by a uniformly random set of that
    many distinct positions; distributionally identical to n independent
    per-bit coin flips.  Consumes exactly one uniform real plus one position
    draw per flipped bit.  Returns (ones, flip_count).
    """
    u = rng_uniform(state)
    if n == 1:
        k = np.int64(1)
    else:
        r = 1.0 / (n - 1.0)
        pmf = q0
        cdf = q0
        k = np.int64(0)
        while u > cdf and k < n:
            pmf = pmf * ((n - k) / (k + 1.0)) * r
            k += 1
            cdf += pmf
    for s in range(k):
        j = s + rng_below(state, n - s)
        jbuf[s] = j
        t = perm[s]
        perm[s] = perm[j]
        perm[j] = t
        pos = perm[s]
        bits[pos] ^= 1
        if bits[pos] == 1:
            ones += 1
        else:
            ones -= 1
    for s in range(k - 1, -1, -1):
        j = jbuf[s]
        t = perm[s]
        perm[s] = perm[j]
        perm[j] = t
    return ones, k


@njit(cache=True, nogil=True)
def rls_apply(bits, ones, n, state):
    """Flip exactly one uniformly chosen bit in place; returns (ones, pos)."""
    pos = rng_below(state, n)
    bits[pos] ^= 1
    if bits[pos] == 1:
        ones += 1
    else:
        ones -= 1
    return ones, pos


# ---------------------------------------------------------------------------
# Population-level passes.


@njit(cache=True, nogil=True)
def ageing_pass(ages, alive, count, tau, inv_mu, state):
    """Hybrid ageing over ``count`` individuals in index order.

    Every individual's age increments by one; those whose new age exceeds
    tau die independently with probability 1 - inv_mu (one uniform draw per
    over-threshold individual; under-threshold individuals draw nothing).
    tau < 0 means unbounded: ages still increment, nobody dies.
    """
    for i in range(count):
        ages[i] += 1
        if tau >= 0 and ages[i] > tau:
            u = rng_uniform(state)
            if u >= inv_mu:
                alive[i] = False


@njit(cache=True, nogil=True)
def div_filter(pop_bits, pop_ones, pop_alive, parent_count,
               off_bits, off_ones, off_alive, off_count, n):
    """Genotype-diversity filter: kill offspring equal to a living parent.

    Offspring-offspring duplicates are retained.
    """
    for o in range(off_count):
        if not off_alive[o]:
            continue
        for i in range(parent_count):
            if not pop_alive[i]:
                continue
            if pop_ones[i] != off_ones[o]:
                continue
            same = True
            for q in range(n):
                if pop_bits[i, q] != off_bits[o, q]:
                    same = False
                    break
            if same:
                off_alive[o] = False
                break


@njit(cache=True, nogil=True)
def select_compact(pop_bits, pop_fit, pop_age, pop_ones, pop_alive, parent_count,
                   off_bits, off_fit, off_age, off_ones, off_alive, off_count,
                   new_bits, new_fit, new_age, new_ones, mu,
                   bid, n, ip1, fp1, fp2, fp3, opt_val,
                   state, cnt, budget):
    """Truncation selection into the ``new_*`` buffers.

    While more than mu individuals are alive, one lowest-fitness individual
    is removed, ties broken uniformly at random (the tie-break draw is
    consumed even for a single-element tie set).  Survivors are compacted in
    (parents by index, then offspring by index) order; if fewer than mu
    remain, fresh uniformly random age-0 individuals fill the gap, each
    charged one evaluation and checked for the optimum.

    Returns (status, m) where m is the number of rows written to new_*.
    """
    total = np.int64(0)
    for i in range(parent_count):
        if pop_alive[i]:
            total += 1
    for o in range(off_count):
        if off_alive[o]:
            total += 1
    while total > mu:
        minf = np.inf
        for i in range(parent_count):
            if pop_alive[i] and pop_fit[i] < minf:
                minf = pop_fit[i]
        for o in range(off_count):
            if off_alive[o] and off_fit[o] < minf:
                minf = off_fit[o]
        ties = np.int64(0)
        for i in range(parent_count):
            if pop_alive[i] and pop_fit[i] == minf:
                ties += 1
        for o in range(off_count):
            if off_alive[o] and off_fit[o] == minf:
                ties += 1
        r = rng_below(state, ties)
        idx = np.int64(0)
        removed = False
        for i in range(parent_count):
            if pop_alive[i] and pop_fit[i] == minf:
                if idx == r:
                    pop_alive[i] = False
                    removed = True
                    break
                idx += 1
        if not removed:
            for o in range(off_count):
                if off_alive[o] and off_fit[o] == minf:
                    if idx == r:
                        off_alive[o] = False
                        break
                    idx += 1
        total -= 1
    m = np.int64(0)
    for i in range(parent_count):
        if pop_alive[i]:
            for q in range(n):
                new_bits[m, q] = pop_bits[i, q]
            new_fit[m] = pop_fit[i]
            new_age[m] = pop_age[i]
            new_ones[m] = pop_ones[i]
            m += 1
    for o in range(off_count):
        if off_alive[o]:
            for q in range(n):
                new_bits[m, q] = off_bits[o, q]
            new_fit[m] = off_fit[o]
            new_age[m] = off_age[o]
            new_ones[m] = off_ones[o]
            m += 1
    while m < mu:
        if cnt[0] >= budget:
            return ST_EXHAUSTED, m
        ones_f = np.int64(0)
        for q in range(n):
            b = rng_bit(state)
            new_bits[m, q] = b
            ones_f += b
        cnt[0] += 1
        f = bench_eval(bid, n, ip1, fp1, fp2, fp3, new_bits[m], ones_f)
        new_fit[m] = f
        new_age[m] = 0
        new_ones[m] = ones_f
        m += 1
        if f == opt_val:
            return ST_FOUND, m
    return ST_OK, m


@njit(cache=True, nogil=True)
def _best_of(fits, m):
    best = -np.inf
    for i in range(m):
        if fits[i] > best:
            best = fits[i]
    return best


# ---------------------------------------------------------------------------
# Complete run kernels.  Each returns (success, evaluations_used,
# generations, best_fitness) with best_fitness = the optimum value on
# success, else the maximum fitness in the standing population.


@njit(cache=True, nogil=True)
def run_one_plus_one(variation, cm, m_pot,
                     bid, n, ip1, fp1, fp2, fp3, opt_val,
                     budget, seed):
    """Single-individual loop: hypermutation / SBM / one-bit-flip offspring,
    accepted iff its fitness is >= the parent's."""
    state = seed_state(seed)
    cnt = np.zeros(1, np.int64)
    bits = np.zeros(n, np.uint8)
    off = np.zeros(n, np.uint8)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    fpos = np.zeros(n, np.int64)
    gens = np.int64(0)
    q0 = ((n - 1.0) / n) ** n
    if cnt[0] >= budget:
        return np.int64(0), cnt[0], gens, -np.inf
    ones = np.int64(0)
    for q in range(n):
        b = rng_bit(state)
        bits[q] = b
        ones += b
    cnt[0] += 1
    fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones)
    if fit == opt_val:
        return np.int64(1), cnt[0], gens, fit
    while True:
        gens += 1
        if variation == VAR_HYPER:
            for q in range(n):
                off[q] = bits[q]
            status, o_ones, o_fit, _constr, _steps = hyper_walk(
                off, ones, fit, m_pot, cm,
                bid, n, ip1, fp1, fp2, fp3, opt_val,
                perm, jbuf, fpos, state, cnt, budget)
        elif variation == VAR_SBM:
            if cnt[0] >= budget:
                return np.int64(0), cnt[0], gens, fit
            for q in range(n):
                off[q] = bits[q]
            o_ones, _k = sbm_apply(off, ones, n, q0, state, perm, jbuf)
            cnt[0] += 1
            o_fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, off, o_ones)
            status = ST_FOUND if o_fit == opt_val else ST_OK
        else:  # VAR_RLS
            if cnt[0] >= budget:
                return np.int64(0), cnt[0], gens, fit
            for q in range(n):
                off[q] = bits[q]
            o_ones, _pos = rls_apply(off, ones, n, state)
            cnt[0] += 1
            o_fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, off, o_ones)
            status = ST_FOUND if o_fit == opt_val else ST_OK
        if status == ST_FOUND:
            return np.int64(1), cnt[0], gens, o_fit
        if status == ST_EXHAUSTED:
            return np.int64(0), cnt[0], gens, fit
        if o_fit >= fit:
            for q in range(n):
                bits[q] = off[q]
            ones = o_ones
            fit = o_fit


@njit(cache=True, nogil=True)
def run_optia(variation, use_macro, cm, mu, dup, tau, div, m_pot,
              bid, n, ip1, fp1, fp2, fp3, opt_val,
              budget, seed):
    """Opt-IA generation loop.

    Per generation: every parent is cloned dup times and every clone is
    mutated (static hypermutation, or SBM under variation=VAR_SBM; with
    use_macro an additional hypermacromutation offspring block of the same
    size follows), then hybrid ageing sweeps parents and offspring, then
    truncation selection with the div flag restores the population to mu.
    Offspring age is 0 on strict fitness improvement, else inherited.
    """
    state = seed_state(seed)
    cnt = np.zeros(1, np.int64)
    off_per = mu * dup
    off_max = off_per * 2 if use_macro == 1 else off_per
    pop_bits = np.zeros((mu, n), np.uint8)
    pop_fit = np.zeros(mu, np.float64)
    pop_age = np.zeros(mu, np.int64)
    pop_ones = np.zeros(mu, np.int64)
    pop_alive = np.zeros(mu, np.bool_)
    off_bits = np.zeros((off_max, n), np.uint8)
    off_fit = np.zeros(off_max, np.float64)
    off_age = np.zeros(off_max, np.int64)
    off_ones = np.zeros(off_max, np.int64)
    off_alive = np.zeros(off_max, np.bool_)
    new_bits = np.zeros((mu, n), np.uint8)
    new_fit = np.zeros(mu, np.float64)
    new_age = np.zeros(mu, np.int64)
    new_ones = np.zeros(mu, np.int64)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    fpos = np.zeros(n, np.int64)
    gens = np.int64(0)
    inv_mu = 1.0 / mu
    q0 = ((n - 1.0) / n) ** n
    for i in range(mu):
        if cnt[0] >= budget:
            return np.int64(0), cnt[0], gens, _best_of(pop_fit, i)
        ones = np.int64(0)
        for q in range(n):
            b = rng_bit(state)
            pop_bits[i, q] = b
            ones += b
        cnt[0] += 1
        f = bench_eval(bid, n, ip1, fp1, fp2, fp3, pop_bits[i], ones)
        pop_fit[i] = f
        pop_age[i] = 0
        pop_ones[i] = ones
        if f == opt_val:
            return np.int64(1), cnt[0], gens, f
    while True:
        gens += 1
        off_count = np.int64(0)
        for pi in range(mu):
            for _d in range(dup):
                row = off_count
                for q in range(n):
                    off_bits[row, q] = pop_bits[pi, q]
                if variation == VAR_HYPER:
                    status, o_ones, o_fit, _constr, _steps = hyper_walk(
                        off_bits[row], pop_ones[pi], pop_fit[pi], m_pot, cm,
                        bid, n, ip1, fp1, fp2, fp3, opt_val,
                        perm, jbuf, fpos, state, cnt, budget)
                else:  # VAR_SBM
                    if cnt[0] >= budget:
                        status = ST_EXHAUSTED
                        o_ones = pop_ones[pi]
                        o_fit = pop_fit[pi]
                    else:
                        o_ones, _k = sbm_apply(off_bits[row], pop_ones[pi], n,
                                               q0, state, perm, jbuf)
                        cnt[0] += 1
                        o_fit = bench_eval(bid, n, ip1, fp1, fp2, fp3,
                                           off_bits[row], o_ones)
                        status = ST_FOUND if o_fit == opt_val else ST_OK
                if status == ST_FOUND:
                    return np.int64(1), cnt[0], gens, o_fit
                if status == ST_EXHAUSTED:
                    return np.int64(0), cnt[0], gens, _best_of(pop_fit, mu)
                off_fit[row] = o_fit
                off_ones[row] = o_ones
                off_age[row] = 0 if o_fit > pop_fit[pi] else pop_age[pi]
                off_count += 1
        if use_macro == 1:
            for pi in range(mu):
                for _d in range(dup):
                    row = off_count
                    for q in range(n):
                        off_bits[row, q] = pop_bits[pi, q]
                    status, o_ones, o_fit, _constr, _steps = macro_walk(
                        off_bits[row], pop_ones[pi], pop_fit[pi], cm,
                        bid, n, ip1, fp1, fp2, fp3, opt_val,
                        state, cnt, budget)
                    if status == ST_FOUND:
                        return np.int64(1), cnt[0], gens, o_fit
                    if status == ST_EXHAUSTED:
                        return np.int64(0), cnt[0], gens, _best_of(pop_fit, mu)
                    off_fit[row] = o_fit
                    off_ones[row] = o_ones
                    off_age[row] = 0 if o_fit > pop_fit[pi] else pop_age[pi]
                    off_count += 1
        for i in range(mu):
            pop_alive[i] = True
        for o in range(off_count):
            off_alive[o] = True
        ageing_pass(pop_age, pop_alive, mu, tau, inv_mu, state)
        ageing_pass(off_age, off_alive, off_count, tau, inv_mu, state)
        if div == 1:
            div_filter(pop_bits, pop_ones, pop_alive, mu,
                       off_bits, off_ones, off_alive, off_count, n)
        status, m = select_compact(
            pop_bits, pop_fit, pop_age, pop_ones, pop_alive, mu,
            off_bits, off_fit, off_age, off_ones, off_alive, off_count,
            new_bits, new_fit, new_age, new_ones, mu,
            bid, n, ip1, fp1, fp2, fp3, opt_val, state, cnt, budget)
        for i in range(m):
            for q in range(n):
                pop_bits[i, q] = new_bits[i, q]
            pop_fit[i] = new_fit[i]
            pop_age[i] = new_age[i]
            pop_ones[i] = new_ones[i]
        if status == ST_FOUND:
            return np.int64(1), cnt[0], gens, opt_val
        if status == ST_EXHAUSTED:
            return np.int64(0), cnt[0], gens, _best_of(pop_fit, m)


@njit(cache=True, nogil=True)
def run_mu_ageing(variation, p, mu, tau, div,
                  bid, n, ip1, fp1, fp2, fp3, opt_val,
                  budget, seed):
    """(mu+1) steady-state loop with hybrid ageing.

    Per generation: one uniformly chosen parent produces one offspring —
    VAR_RLSP: with probability p an exact copy, else a one-bit flip;
    VAR_RLS: always a one-bit flip (no copy draw);
    VAR_SBM: standard bit mutation —
    which is always evaluated (one charge); then hybrid ageing sweeps
    parents and the offspring, the div filter applies if requested, and
    truncation selection restores the population to mu.
    """
    state = seed_state(seed)
    cnt = np.zeros(1, np.int64)
    pop_bits = np.zeros((mu, n), np.uint8)
    pop_fit = np.zeros(mu, np.float64)
    pop_age = np.zeros(mu, np.int64)
    pop_ones = np.zeros(mu, np.int64)
    pop_alive = np.zeros(mu, np.bool_)
    off_bits = np.zeros((1, n), np.uint8)
    off_fit = np.zeros(1, np.float64)
    off_age = np.zeros(1, np.int64)
    off_ones = np.zeros(1, np.int64)
    off_alive = np.zeros(1, np.bool_)
    new_bits = np.zeros((mu, n), np.uint8)
    new_fit = np.zeros(mu, np.float64)
    new_age = np.zeros(mu, np.int64)
    new_ones = np.zeros(mu, np.int64)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    gens = np.int64(0)
    inv_mu = 1.0 / mu
    q0 = ((n - 1.0) / n) ** n
    for i in range(mu):
        if cnt[0] >= budget:
            return np.int64(0), cnt[0], gens, _best_of(pop_fit, i)
        ones = np.int64(0)
        for q in range(n):
            b = rng_bit(state)
            pop_bits[i, q] = b
            ones += b
        cnt[0] += 1
        f = bench_eval(bid, n, ip1, fp1, fp2, fp3, pop_bits[i], ones)
        pop_fit[i] = f
        pop_age[i] = 0
        pop_ones[i] = ones
        if f == opt_val:
            return np.int64(1), cnt[0], gens, f
    while True:
        gens += 1
        if cnt[0] >= budget:
            return np.int64(0), cnt[0], gens, _best_of(pop_fit, mu)
        pi = rng_below(state, mu)
        for q in range(n):
            off_bits[0, q] = pop_bits[pi, q]
        o_ones = pop_ones[pi]
        if variation == VAR_RLSP:
            u = rng_uniform(state)
            if u >= p:
                o_ones, _pos = rls_apply(off_bits[0], o_ones, n, state)
        elif variation == VAR_RLS:
            o_ones, _pos = rls_apply(off_bits[0], o_ones, n, state)
        else:  # VAR_SBM
            o_ones, _k = sbm_apply(off_bits[0], o_ones, n, q0, state, perm, jbuf)
        cnt[0] += 1
        o_fit = bench_eval(bid, n, ip1, fp1, fp2, fp3, off_bits[0], o_ones)
        if o_fit == opt_val:
            return np.int64(1), cnt[0], gens, o_fit
        off_fit[0] = o_fit
        off_ones[0] = o_ones
        off_age[0] = 0 if o_fit > pop_fit[pi] else pop_age[pi]
        for i in range(mu):
            pop_alive[i] = True
        off_alive[0] = True
        ageing_pass(pop_age, pop_alive, mu, tau, inv_mu, state)
        ageing_pass(off_age, off_alive, 1, tau, inv_mu, state)
        if div == 1:
            div_filter(pop_bits, pop_ones, pop_alive, mu,
                       off_bits, off_ones, off_alive, 1, n)
        status, m = select_compact(
            pop_bits, pop_fit, pop_age, pop_ones, pop_alive, mu,
            off_bits, off_fit, off_age, off_ones, off_alive, 1,
            new_bits, new_fit, new_age, new_ones, mu,
            bid, n, ip1, fp1, fp2, fp3, opt_val, state, cnt, budget)
        for i in range(m):
            for q in range(n):
                pop_bits[i, q] = new_bits[i, q]
            pop_fit[i] = new_fit[i]
            pop_age[i] = new_age[i]
            pop_ones[i] = new_ones[i]
        if status == ST_FOUND:
            return np.int64(1), cnt[0], gens, opt_val
        if status == ST_EXHAUSTED:
            return np.int64(0), cnt[0], gens, _best_of(pop_fit, m)


# ---------------------------------------------------------------------------
# Monte Carlo samplers for the operator-distribution verifiers.  Both drive
# the very same jitted operator primitives used by the run kernels.


@njit(cache=True, nogil=True)
def sample_hyper_first_k(n, k, samples, state):
    """Count strict-FCM hypermutation walks (potential n, constant fitness,
    start 0^n) whose first k flipped positions are exactly {0, .., k-1}.

    On the constant landscape no stop is constructive, so every walk flips
    all n distinct positions; the walk's k-th intermediate point equals the
    target 1^k 0^(n-k) exactly when the first k flips hit the target set.
    """
    cnt = np.zeros(1, np.int64)
    bits = np.zeros(n, np.uint8)
    perm = np.arange(n)
    jbuf = np.zeros(n, np.int64)
    fpos = np.zeros(n, np.int64)
    hits = np.int64(0)
    for _t in range(samples):
        for q in range(n):
            bits[q] = 0
        _status, _ones, _fit, _constr, _steps = hyper_walk(
            bits, 0, 0.0, n, CM_STRICT,
            B_CONST, n, 0, 0.0, 0.0, 0.0, np.nan,
            perm, jbuf, fpos, state, cnt, NO_BUDGET)
        ok = True
        for s in range(k):
            if fpos[s] >= k:
                ok = False
                break
        if ok:
            hits += 1
    return hits


@njit(cache=True, nogil=True)
def sample_ageing_survivors(mu, trials, state):
    """Histogram of survivor counts when all mu individuals exceed tau.

    Each trial ages a population sitting exactly at the threshold, so after
    the increment every individual faces the death draw.  Returns an int64
    histogram of length mu+1 indexed by survivor count.
    """
    tau = np.int64(0)
    ages = np.zeros(mu, np.int64)
    alive = np.zeros(mu, np.bool_)
    hist = np.zeros(mu + 1, np.int64)
    inv_mu = 1.0 / mu
    for _t in range(trials):
        for i in range(mu):
            ages[i] = tau
            alive[i] = True
        ageing_pass(ages, alive, mu, tau, inv_mu, state)
        c = np.int64(0)
        for i in range(mu):
            if alive[i]:
                c += 1
        hist[c] += 1
    return hist
