"""Compiled chain kernels for the Gibbs detectors.

One sweep visits the 2K coordinates in order; every candidate cost is an
O(1) update of the running squared residual via the identity
``||y - H s'||^2 = c - 2 d <h_i, r> + d^2 ||h_i||^2`` for a coordinate step
of size d.  The kernels draw from the caller's ``np.random.Generator`` (the
bit stream is shared with Python code, so consumption order is part of the
detector's reproducibility contract) and must stay in sync with the
stopping-rule formulas in ``dsmgs.stopping``.
"""

import math

import numpy as np
from numba import njit

_THETA_CAP = 1e15
_LOG_CAP = math.log(_THETA_CAP)


@njit(cache=True)
def _stalled(history, t, best_c, n_rx, noise_var, stall_window_scale, min_stall):
    """Stalling rule; mirrors stopping.stall_limit / stopping.stalling_check."""
    if t < 2 or history[t - 1] != history[t - 2]:
        return False
    quality = (best_c - n_rx * noise_var) / (math.sqrt(n_rx) * noise_var)
    if quality > _LOG_CAP:
        return False  # window saturates far beyond any iteration budget
    theta = min(_THETA_CAP, math.ceil(max(min_stall, stall_window_scale * math.exp(quality))))
    if theta >= t:
        return False
    return history[t - 1] == history[int(t - 1 - theta)]


@njit(cache=True)
def run_dsmgs(
    channel,
    cols,
    col_sq,
    levels,
    y,
    s0,
    q,
    distance,
    max_iterations,
    n_rx,
    noise_var,
    stall_window_scale,
    min_stall,
    rng,
):
    size = levels.shape[0]
    dims = cols.shape[0]
    s = s0.astype(np.float64).copy()
    r = y - channel @ s
    c = float(r @ r)
    best_c = c
    best_s = s.copy()
    history = np.empty(max_iterations)
    noisy = 0
    t = 0
    for t in range(1, max_iterations + 1):
        for i in range(dims):
            h = cols[i]
            g = 0.0
            for m in range(h.shape[0]):
                g += h[m] * r[m]
            si = s[i]
            if rng.random() > q:
                # informed move: argmin of the candidate costs (first minimum wins)
                new = si
                c_new = math.inf
                for j in range(size):
                    d = levels[j] - si
                    cost = c - 2.0 * g * d + col_sq[i] * (d * d)
                    if cost < c_new:
                        c_new = cost
                        new = levels[j]
            else:
                # randomizing move restricted to the index neighborhood
                noisy += 1
                idx = int(si + size - 1) // 2
                lo = max(0, idx - distance)
                hi = min(size, idx + distance + 1)
                new = levels[lo + rng.integers(0, hi - lo)]
                d = new - si
                c_new = c - 2.0 * g * d + col_sq[i] * (d * d)
            if new != si:
                d = new - si
                for m in range(r.shape[0]):
                    r[m] -= d * h[m]
                s[i] = new
            c = c_new
            if c < best_c:
                best_c = c
                best_s[:] = s
        history[t - 1] = best_c
        if _stalled(history, t, best_c, n_rx, noise_var, stall_window_scale, min_stall):
            break
    return best_s, best_c, t, noisy


@njit(cache=True)
def run_mgs(
    channel,
    cols,
    col_sq,
    levels,
    y,
    s0,
    q,
    inv_main,
    inv_noisy,
    noisy_is_uniform,
    max_iterations,
    n_rx,
    noise_var,
    stall_window_scale,
    min_stall,
    rng,
):
    size = levels.shape[0]
    dims = cols.shape[0]
    s = s0.astype(np.float64).copy()
    r = y - channel @ s
    c = float(r @ r)
    best_c = c
    best_s = s.copy()
    history = np.empty(max_iterations)
    costs = np.empty(size)
    weights = np.empty(size)
    noisy = 0
    t = 0
    for t in range(1, max_iterations + 1):
        for i in range(dims):
            h = cols[i]
            g = 0.0
            for m in range(h.shape[0]):
                g += h[m] * r[m]
            si = s[i]
            for j in range(size):
                d = levels[j] - si
                costs[j] = c - 2.0 * g * d + col_sq[i] * (d * d)
            main_branch = rng.random() > q
            if not main_branch:
                noisy += 1
            if main_branch or not noisy_is_uniform:
                # tempered softmax over the candidate costs (max-subtracted)
                inv = inv_main if main_branch else inv_noisy
                fmax = -math.inf
                for j in range(size):
                    f = -costs[j] * inv
                    weights[j] = f
                    if f > fmax:
                        fmax = f
                total = 0.0
                for j in range(size):
                    weights[j] = math.exp(weights[j] - fmax)
                    total += weights[j]
                u = rng.random() * total
                acc = 0.0
                j = size - 1
                for jj in range(size):
                    acc += weights[jj]
                    if u < acc:
                        j = jj
                        break
            else:
                j = int(rng.integers(0, size))
            new = levels[j]
            if new != si:
                d = new - si
                for m in range(r.shape[0]):
                    r[m] -= d * h[m]
                s[i] = new
            c = costs[j]
            if c < best_c:
                best_c = c
                best_s[:] = s
        history[t - 1] = best_c
        if _stalled(history, t, best_c, n_rx, noise_var, stall_window_scale, min_stall):
            break
    return best_s, best_c, t, noisy


@njit(cache=True)
def _nearest_level(x, size):
    """Scalar slicer; mirrors constellation.slice_to_levels (ties toward zero)."""
    pos = (x + (size - 1)) * 0.5
    lo = int(math.floor(pos))
    if lo < 0:
        lo = 0
    elif lo > size - 1:
        lo = size - 1
    hi = int(math.ceil(pos))
    if hi < 0:
        hi = 0
    elif hi > size - 1:
        hi = size - 1
    lev_lo = 2.0 * lo - (size - 1)
    lev_hi = 2.0 * hi - (size - 1)
    d_lo = abs(x - lev_lo)
    d_hi = abs(x - lev_hi)
    if d_hi < d_lo or (d_hi == d_lo and abs(lev_hi) < abs(lev_lo)):
        return lev_hi
    return lev_lo


@njit(cache=True)
def run_amgs(
    channel,
    cols,
    col_sq,
    levels,
    y,
    s0,
    q,
    n_samples,
    max_iterations,
    n_rx,
    noise_var,
    stall_window_scale,
    min_stall,
    rng,
):
    """Averaged sampler.

    The working vector floats (coordinate = mean of the mixture draws) and
    drives the chain, but candidates are scored by the cost of their sliced
    image: a parallel residual follows the sliced vector so the returned
    best, the stalling window and the restart rule all see alphabet-valued
    solutions.  Tracking the floating cost instead lets fractional
    coordinates overfit faded channel columns and pin the run to a solution
    whose slice is a guess.
    """
    size = levels.shape[0]
    dims = cols.shape[0]
    s = s0.astype(np.float64).copy()
    r = y - channel @ s
    c = float(r @ r)
    s_sliced = s.copy()
    for i in range(dims):
        s_sliced[i] = _nearest_level(s[i], size)
    r_sliced = y - channel @ s_sliced
    c_sliced = float(r_sliced @ r_sliced)
    best_c = c_sliced
    best_s = s_sliced.copy()
    history = np.empty(max_iterations)
    noisy = 0
    t = 0
    for t in range(1, max_iterations + 1):
        for i in range(dims):
            h = cols[i]
            g = 0.0
            for m in range(h.shape[0]):
                g += h[m] * r[m]
            si = s[i]
            target = si
            c_best_local = math.inf
            for j in range(size):
                d = levels[j] - si
                cost = c - 2.0 * g * d + col_sq[i] * (d * d)
                if cost < c_best_local:
                    c_best_local = cost
                    target = levels[j]
            # average of n_samples mixture draws around the argmin target
            k = 0
            random_sum = 0.0
            for m in range(n_samples):
                if rng.random() <= q:
                    k += 1
            for m in range(k):
                random_sum += levels[rng.integers(0, size)]
            noisy += k
            new = ((n_samples - k) * target + random_sum) / n_samples
            d = new - si
            c = c - 2.0 * g * d + col_sq[i] * (d * d)
            if d != 0.0:
                for m in range(r.shape[0]):
                    r[m] -= d * h[m]
                s[i] = new
            new_sliced = _nearest_level(new, size)
            ds = new_sliced - s_sliced[i]
            if ds != 0.0:
                gs = 0.0
                for m in range(h.shape[0]):
                    gs += h[m] * r_sliced[m]
                c_sliced = c_sliced - 2.0 * gs * ds + col_sq[i] * (ds * ds)
                for m in range(r_sliced.shape[0]):
                    r_sliced[m] -= ds * h[m]
                s_sliced[i] = new_sliced
            if c_sliced < best_c:
                best_c = c_sliced
                best_s[:] = s_sliced
        history[t - 1] = best_c
        if _stalled(history, t, best_c, n_rx, noise_var, stall_window_scale, min_stall):
            break
    return best_s, best_c, t, noisy
