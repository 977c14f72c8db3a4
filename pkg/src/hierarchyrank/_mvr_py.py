"""Pure-Python chain kernel: zero-temperature Metropolis over rank swaps.

Used when the compiled extension is unavailable. The compiled kernel in
``_mvr_c`` mirrors this module bit for bit: both consume the same splitmix64
stream and use identical integer arithmetic, so a chain produces the same
samples on either backend.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 generator; returns (new_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def swap_delta(a, b, pos, oip, oix, ow, iip, iix, iw):
    """Exact change in S if nodes a and b exchange rank positions.

    Only edges incident to a or b can change sign; each is visited once
    (edges between a and b are counted from a's side). Self-loops always
    contribute zero.
    """
    ra = pos[a]
    rb = pos[b]
    d = 0
    for k in range(oip[a], oip[a + 1]):  # edges a -> c
        c = oix[k]
        if c == a:
            continue
        pc = pos[c]
        x = pc - ra
        before = (x > 0) - (x < 0)
        x = (ra if c == b else pc) - rb
        after = (x > 0) - (x < 0)
        d += ow[k] * (after - before)
    for k in range(iip[a], iip[a + 1]):  # edges c -> a
        c = iix[k]
        if c == a:
            continue
        pc = pos[c]
        x = ra - pc
        before = (x > 0) - (x < 0)
        x = rb - (ra if c == b else pc)
        after = (x > 0) - (x < 0)
        d += iw[k] * (after - before)
    for k in range(oip[b], oip[b + 1]):  # edges b -> c, a/b already handled
        c = oix[k]
        if c == b or c == a:
            continue
        pc = pos[c]
        x = pc - rb
        before = (x > 0) - (x < 0)
        x = pc - ra
        after = (x > 0) - (x < 0)
        d += ow[k] * (after - before)
    for k in range(iip[b], iip[b + 1]):  # edges c -> b
        c = iix[k]
        if c == b or c == a:
            continue
        pc = pos[c]
        x = rb - pc
        before = (x > 0) - (x < 0)
        x = ra - pc
        after = (x > 0) - (x < 0)
        d += iw[k] * (after - before)
    return d


def score_from_csr(n, pos, oip, oix, ow):
    """S = sum of w * sign(pos[dst] - pos[src]) over all stored edges."""
    s = 0
    for u in range(n):
        pu = pos[u]
        for k in range(oip[u], oip[u + 1]):
            x = pos[oix[k]] - pu
            if x > 0:
                s += ow[k]
            elif x < 0:
                s -= ow[k]
    return s


def run_chain_kernel(n, out_indptr, out_indices, out_weights,
                     in_indptr, in_indices, in_weights,
                     init_pos, total_iterations, burn_in, sample_interval,
                     seed, collect_trace=False):
    """Run one zero-temperature chain.

    Each iteration draws a uniform random distinct node pair and accepts the
    rank swap iff it does not decrease S. After ``burn_in`` iterations the
    current state is recorded every ``sample_interval`` iterations.

    Returns (samples, scores, trace): samples[k] holds every node's 0-based
    position at the k-th recording, scores[k] the matching S. ``trace`` is
    the S value after each accepted move (prefixed with the initial S) when
    ``collect_trace`` is set, else None.
    """
    oip = [int(v) for v in out_indptr]
    oix = [int(v) for v in out_indices]
    ow = [int(v) for v in out_weights]
    iip = [int(v) for v in in_indptr]
    iix = [int(v) for v in in_indices]
    iw = [int(v) for v in in_weights]
    pos = [int(v) for v in init_pos]

    s = score_from_csr(n, pos, oip, oix, ow)

    n_samples = (total_iterations - burn_in) // sample_interval
    samples = np.empty((n_samples, n), dtype=np.int32)
    scores = np.empty(n_samples, dtype=np.int64)
    trace = [s] if collect_trace else None

    state = seed & MASK64
    row = 0
    for it in range(1, total_iterations + 1):
        state, r = splitmix64(state)
        a = r % n
        state, r = splitmix64(state)
        b = r % (n - 1)
        if b >= a:
            b += 1
        d = swap_delta(a, b, pos, oip, oix, ow, iip, iix, iw)
        if d >= 0:
            s += d
            pos[a], pos[b] = pos[b], pos[a]
            if trace is not None:
                trace.append(s)
        if it > burn_in and (it - burn_in) % sample_interval == 0:
            samples[row] = pos
            scores[row] = s
            row += 1
    trace_arr = np.asarray(trace, dtype=np.int64) if collect_trace else None
    return samples, scores, trace_arr
