"""Pure numpy/Python implementations of the hot kernels.

Drop-in fallback for the compiled extension `_ckern`. Both backends must
consume random numbers identically and produce bit-identical results; the
test suite compares them directly.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 1 << 16


def coincidence_histogram(t0, t1, bin_ps: int, half_bins: int) -> np.ndarray:
    """Histogram of pair delays t1 - t0 into centered bins.

    Bin k (k = -half_bins..half_bins) covers [k*b - b/2, k*b + b/2) with
    b = bin_ps; a delay exactly on an edge goes to the upper bin. Both
    input streams must be sorted; times are picoseconds below 2^63.

    Returns int64 counts of length 2*half_bins + 1.
    """
    b = int(bin_ps)
    half = int(half_bins)
    if b <= 0:
        raise ValueError("bin width must be positive")
    if half < 0:
        raise ValueError("half_bins must be non-negative")
    nbins = 2 * half + 1
    counts = np.zeros(nbins, dtype=np.int64)
    ta = np.asarray(t0).astype(np.int64, copy=False)
    tb = np.asarray(t1).astype(np.int64, copy=False)
    if ta.size == 0 or tb.size == 0:
        return counts
    span = nbins * b
    dmin = -(span // 2)            # smallest delay in bin -half
    dmax = (span - 1) // 2         # largest delay in bin +half
    for start in range(0, ta.size, _CHUNK):
        a = ta[start:start + _CHUNK]
        lo = np.searchsorted(tb, a + dmin, side="left")
        hi = np.searchsorted(tb, a + dmax, side="right")
        m = hi - lo
        total = int(m.sum())
        if total == 0:
            continue
        firsts = np.cumsum(m) - m
        j = np.repeat(lo - firsts, m) + np.arange(total, dtype=np.int64)
        d = tb[j] - np.repeat(a, m)
        idx = np.floor_divide(2 * d + b, 2 * b) + half
        counts += np.bincount(idx, minlength=nbins).astype(np.int64)
    return counts


def _g2_lookup(g2_grid: np.ndarray, dt: float, tau: float) -> float:
    # piecewise-linear on a uniform grid; uncorrelated (1.0) beyond the span
    pos = tau / dt
    k = int(pos)
    if k >= g2_grid.shape[0] - 1:
        return 1.0
    frac = pos - k
    return g2_grid[k] * (1.0 - frac) + g2_grid[k + 1] * frac


def renewal_fill(u: np.ndarray, t_start_ps: int, tau_pending_s: float,
                 lam_max: float, rate_base: float, g2_grid: np.ndarray,
                 dt_s: float, duration_ps: int):
    """Advance a renewal point process by thinning, consuming uniforms in pairs.

    After each event the conditional intensity is rate_base * g2(t - t_last)
    with g2 interpolated on a uniform grid of spacing dt_s (1.0 beyond the
    grid). Candidate gaps are exponential with rate lam_max; u[2i] drives
    the gap, u[2i+1] the accept test. Event times accumulate in integer
    picoseconds.

    Returns (times int64 array, uniforms consumed, pending gap seconds,
    current time ps, done flag). done is set once an accepted event falls
    beyond duration_ps.
    """
    g2_grid = np.asarray(g2_grid, dtype=float)
    n = u.shape[0]
    times = []
    t_ps = int(t_start_ps)
    tau = float(tau_pending_s)
    i = 0
    done = False
    while i + 1 < n:
        tau += -math.log(1.0 - u[i]) / lam_max
        ok = u[i + 1] * lam_max <= rate_base * _g2_lookup(g2_grid, dt_s, tau)
        i += 2
        if ok:
            t_ps += int(tau * 1e12 + 0.5)
            tau = 0.0
            if t_ps > duration_ps:
                done = True
                break
            times.append(t_ps)
    return np.array(times, dtype=np.int64), i, tau, t_ps, done
