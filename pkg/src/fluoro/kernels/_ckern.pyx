# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: coincidence sweep and renewal thinning.

Semantics must match fluoro.kernels._pykern exactly, including the order
in which uniform random numbers are consumed.
"""

from libc.math cimport log

import numpy as np

cimport numpy as cnp

cnp.import_array()


def coincidence_histogram(t0, t1, bin_ps, half_bins):
    """Histogram of pair delays t1 - t0 into centered bins (two-pointer sweep).

    See the fallback implementation for the exact bin convention. Inputs
    must be sorted; complexity O(len(t0) + len(t1) + pairs).
    """
    cdef long long b = int(bin_ps)
    cdef long long half = int(half_bins)
    if b <= 0:
        raise ValueError("bin width must be positive")
    if half < 0:
        raise ValueError("half_bins must be non-negative")
    cdef long long nbins = 2 * half + 1
    counts_arr = np.zeros(nbins, dtype=np.int64)
    ta_arr = np.ascontiguousarray(np.asarray(t0).astype(np.int64, copy=False))
    tb_arr = np.ascontiguousarray(np.asarray(t1).astype(np.int64, copy=False))
    cdef long long[::1] counts = counts_arr
    cdef long long[::1] ta = ta_arr
    cdef long long[::1] tb = tb_arr
    cdef Py_ssize_t na = ta.shape[0], nb = tb.shape[0]
    if na == 0 or nb == 0:
        return counts_arr
    cdef long long span = nbins * b
    cdef long long dmin = -(span // 2)
    cdef long long dmax = (span - 1) // 2
    cdef Py_ssize_t i, j, lo = 0
    cdef long long a, d, num, q, twob = 2 * b
    with nogil:
        for i in range(na):
            a = ta[i]
            while lo < nb and tb[lo] < a + dmin:
                lo += 1
            j = lo
            while j < nb and tb[j] <= a + dmax:
                d = tb[j] - a
                num = 2 * d + b
                q = num / twob
                if num % twob != 0 and num < 0:
                    q -= 1          # floor division for negative delays
                counts[q + half] += 1
                j += 1
    return counts_arr


def renewal_fill(u, t_start_ps, tau_pending_s, lam_max, rate_base,
                 g2_grid, dt_s, duration_ps):
    """Advance a renewal process by thinning; see _pykern.renewal_fill."""
    u_arr = np.ascontiguousarray(np.asarray(u, dtype=np.float64))
    g_arr = np.ascontiguousarray(np.asarray(g2_grid, dtype=np.float64))
    cdef double[::1] uu = u_arr
    cdef double[::1] gg = g_arr
    cdef Py_ssize_t n = uu.shape[0], ng = gg.shape[0]
    out_arr = np.empty(n // 2 + 1, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long t_ps = int(t_start_ps)
    cdef long long dur = int(duration_ps)
    cdef double tau = float(tau_pending_s)
    cdef double lmax = float(lam_max)
    cdef double rate = float(rate_base)
    cdef double dt = float(dt_s)
    cdef Py_ssize_t i = 0, nev = 0, k
    cdef double pos, frac, g2v
    cdef bint done = False
    with nogil:
        while i + 1 < n:
            tau += -log(1.0 - uu[i]) / lmax
            pos = tau / dt
            k = <Py_ssize_t> pos
            if k >= ng - 1:
                g2v = 1.0
            else:
                frac = pos - k
                g2v = gg[k] * (1.0 - frac) + gg[k + 1] * frac
            if uu[i + 1] * lmax <= rate * g2v:
                i += 2
                t_ps += <long long> (tau * 1e12 + 0.5)
                tau = 0.0
                if t_ps > dur:
                    done = True
                    break
                out[nev] = t_ps
                nev += 1
            else:
                i += 2
    return out_arr[:nev].copy(), i, tau, t_ps, done
