"""Stopping rules shared by the Gibbs-sampling detectors.

Both the per-run stalling limit and the restart allowance are driven by a
residual quality score: how far the current best cost sits from the expected
noise floor, in noise-standard-deviation units.
"""

import math

import numpy as np

# Values of theta beyond any plausible iteration budget saturate here instead
# of overflowing exp().
_THETA_CAP = 10**15


def solution_quality(residual_sq: float, n_rx: int, noise_var: float) -> float:
    """Quality score of a candidate: (||y - H s||^2 - N sigma^2) / (sqrt(N) sigma^2).

    Zero means the residual energy matches the noise floor; positive values
    indicate an unconverged solution.
    """
    if noise_var <= 0.0:
        raise ValueError("noise variance must be positive to score a solution")
    return (residual_sq - n_rx * noise_var) / (math.sqrt(n_rx) * noise_var)


def residual_quality(system, s_hat) -> float:
    """`solution_quality` evaluated on a candidate vector for a RealSystem."""
    r = system.y - system.H @ np.asarray(s_hat, dtype=np.float64)
    return solution_quality(float(r @ r), system.n_rx, system.noise_var)


def stall_limit(quality: float, modulation_order: int, stall_scale: float, min_stall: int) -> int:
    """Iterations the best cost may stay flat before a run stops.

    Computed as ``ceil(max(min_stall, stall_scale * log2(M) * exp(quality)))``;
    grows with constellation size and with distance from the noise floor.
    """
    scale = stall_scale * math.log2(modulation_order)
    # exp(quality) overflows for badly broken candidates; the comparison
    # against the iteration counter only needs a saturating large value.
    if quality > math.log(_THETA_CAP):
        return _THETA_CAP
    return min(_THETA_CAP, math.ceil(max(min_stall, scale * math.exp(quality))))


def restart_limit(quality: float, modulation_order: int, restart_scale: float) -> int:
    """Restarts allowed for the current best: ceil(max(0, scale*log2(M)*quality)) + 1."""
    scale = restart_scale * math.log2(modulation_order)
    return min(_THETA_CAP, math.ceil(max(0.0, scale * quality))) + 1


def stalling_check(cost_history, t: int, theta: int) -> bool:
    """True when the best cost has been flat for the whole stalling window.

    `cost_history` holds the best cost after each completed sweep, so
    ``cost_history[t - 1]`` is the value after sweep ``t`` (1-based).  The
    check fires when the cost is unchanged from the previous sweep, the
    window `theta` fits inside the elapsed sweeps, and the cost equals the
    value `theta` sweeps ago.
    """
    if t < 1 or t > len(cost_history):
        raise ValueError("t must index a completed sweep in cost_history")
    if t < 2 or cost_history[t - 1] != cost_history[t - 2]:
        return False
    if theta >= t:
        return False
    return cost_history[t - 1] == cost_history[t - 1 - theta]
