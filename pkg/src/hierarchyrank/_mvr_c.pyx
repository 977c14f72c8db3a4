# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled chain kernel: zero-temperature Metropolis over rank swaps.

Exact counterpart of ``_mvr_py.run_chain_kernel``: same splitmix64 stream,
same acceptance rule, identical samples for identical inputs. The hot loop
runs without the GIL so chains parallelize across threads.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t


cdef inline uint64_t _sm64(uint64_t* state) noexcept nogil:
    cdef uint64_t z = state[0] + <uint64_t>0x9E3779B97F4A7C15UL
    state[0] = z
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9UL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBUL
    return z ^ (z >> 31)


cdef inline int64_t _sign(int64_t x) noexcept nogil:
    return (x > 0) - (x < 0)


cdef int64_t _swap_delta(Py_ssize_t a, Py_ssize_t b, int32_t[::1] pos,
                         int64_t[::1] oip, int32_t[::1] oix, int64_t[::1] ow,
                         int64_t[::1] iip, int32_t[::1] iix, int64_t[::1] iw) noexcept nogil:
    cdef int64_t ra = pos[a]
    cdef int64_t rb = pos[b]
    cdef int64_t d = 0
    cdef int64_t k, pc
    cdef Py_ssize_t c
    for k in range(oip[a], oip[a + 1]):  # edges a -> c
        c = oix[k]
        if c == a:
            continue
        pc = pos[c]
        d += ow[k] * (_sign((ra if c == b else pc) - rb) - _sign(pc - ra))
    for k in range(iip[a], iip[a + 1]):  # edges c -> a
        c = iix[k]
        if c == a:
            continue
        pc = pos[c]
        d += iw[k] * (_sign(rb - (ra if c == b else pc)) - _sign(ra - pc))
    for k in range(oip[b], oip[b + 1]):  # edges b -> c, a/b already handled
        c = oix[k]
        if c == b or c == a:
            continue
        pc = pos[c]
        d += ow[k] * (_sign(pc - ra) - _sign(pc - rb))
    for k in range(iip[b], iip[b + 1]):  # edges c -> b
        c = iix[k]
        if c == b or c == a:
            continue
        pc = pos[c]
        d += iw[k] * (_sign(ra - pc) - _sign(rb - pc))
    return d


cdef int64_t _score(Py_ssize_t n, int32_t[::1] pos,
                    int64_t[::1] oip, int32_t[::1] oix, int64_t[::1] ow) noexcept nogil:
    cdef int64_t s = 0
    cdef int64_t k
    cdef Py_ssize_t u
    for u in range(n):
        for k in range(oip[u], oip[u + 1]):
            s += ow[k] * _sign(pos[oix[k]] - pos[u])
    return s


def run_chain_kernel(Py_ssize_t n,
                     int64_t[::1] out_indptr, int32_t[::1] out_indices, int64_t[::1] out_weights,
                     int64_t[::1] in_indptr, int32_t[::1] in_indices, int64_t[::1] in_weights,
                     int32_t[::1] init_pos,
                     int64_t total_iterations, int64_t burn_in, int64_t sample_interval,
                     uint64_t seed, bint collect_trace=False):
    """Run one zero-temperature chain; see ``_mvr_py.run_chain_kernel``."""
    cdef int64_t n_samples = (total_iterations - burn_in) // sample_interval
    samples_arr = np.empty((n_samples, n), dtype=np.int32)
    scores_arr = np.empty(n_samples, dtype=np.int64)
    cdef int32_t[:, ::1] samples = samples_arr
    cdef int64_t[::1] scores = scores_arr

    pos_arr = np.array(init_pos, dtype=np.int32)
    cdef int32_t[::1] pos = pos_arr

    trace_arr = np.empty(total_iterations + 1, dtype=np.int64) if collect_trace else None
    cdef int64_t[::1] trace = trace_arr if collect_trace else scores_arr  # dummy binding
    cdef int64_t n_trace = 0

    cdef uint64_t state = seed
    cdef uint64_t r
    cdef Py_ssize_t a, b, u
    cdef int64_t it, d, row = 0
    cdef int32_t tmp
    cdef int64_t s

    with nogil:
        s = _score(n, pos, out_indptr, out_indices, out_weights)
        if collect_trace:
            trace[0] = s
            n_trace = 1
        for it in range(1, total_iterations + 1):
            r = _sm64(&state)
            a = <Py_ssize_t>(r % <uint64_t>n)
            r = _sm64(&state)
            b = <Py_ssize_t>(r % <uint64_t>(n - 1))
            if b >= a:
                b += 1
            d = _swap_delta(a, b, pos, out_indptr, out_indices, out_weights,
                            in_indptr, in_indices, in_weights)
            if d >= 0:
                s += d
                tmp = pos[a]
                pos[a] = pos[b]
                pos[b] = tmp
                if collect_trace:
                    trace[n_trace] = s
                    n_trace += 1
            if it > burn_in and (it - burn_in) % sample_interval == 0:
                for u in range(n):
                    samples[row, u] = pos[u]
                scores[row] = s
                row += 1

    if collect_trace:
        return samples_arr, scores_arr, trace_arr[:n_trace].copy()
    return samples_arr, scores_arr, None
