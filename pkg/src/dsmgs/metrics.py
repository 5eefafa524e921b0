"""Analytic complexity accounting and aggregate benchmark metrics.

Complexity is charged from closed-form per-symbol operation counts (real
arithmetic operations, "rops") evaluated at the measured mean iteration
count, not from instrumented counters.  The tradeoff score relates BER in dB
to the charged rops so detectors with different knobs can be compared on one
axis.
"""

import math
from dataclasses import dataclass

# 97.5th percentile of the standard normal, for 95% Wilson intervals.
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ComplexityModel:
    """Inputs of the per-symbol rops formulas for one detector kind.

    `kind` is one of ``"dsmgs"``, ``"amgs"``, ``"mgs"``, ``"mmse"``;
    `init_rops` is the per-symbol cost of producing the initial solution
    (the MMSE total when MMSE initialization is used, zero for random).
    """

    kind: str
    n_users: int
    n_rx: int
    alphabet_size: int = 0
    samples_per_update: int = 1
    init_rops: float = 0.0


def mmse_rops(n_users: int, n_rx: int) -> float:
    """Per-symbol rops of the MMSE detector."""
    k, n = n_users, n_rx
    return k * k / 6.0 + 1.5 * n * k + 1.5 * n + 5.0 / 6.0


def per_iteration_rops(model: ComplexityModel) -> float:
    """Per-symbol rops charged for one sweep of the given MCMC detector."""
    k, n, a = model.n_users, model.n_rx, model.alphabet_size
    if model.kind == "dsmgs":
        return 16.0 * k * n + 16.0 * n + a * (16.0 * n + 2.0) + 24.0 / k
    if model.kind == "amgs":
        return (
            16.0 * k * n
            + 16.0 * n
            + a * (16.0 * n + 2.0)
            + (2.0 * model.samples_per_update + 2.0)
            + 24.0 / k
        )
    if model.kind == "mgs":
        return 16.0 * k * n - 4.0 * n + a * (16.0 * n + 1450.0) + (10.0 * n + 24.0) / k
    raise ValueError(f"no per-iteration rops model for detector kind {model.kind!r}")


def rops_per_symbol(model: ComplexityModel, eni: float) -> float:
    """Total per-symbol rops at a measured effective iteration count."""
    if eni < 0:
        raise ValueError("eni must be nonnegative")
    if model.kind == "mmse":
        return mmse_rops(model.n_users, model.n_rx)
    return model.init_rops + eni * per_iteration_rops(model)


def effective_iterations(iteration_counts) -> float:
    """Mean total iterations (restarts included) per detected vector."""
    counts = list(iteration_counts)
    if not counts:
        raise ValueError("cannot average an empty list of iteration counts")
    return sum(counts) / len(counts)


def tradeoff_score(ber: float, rops: float) -> float:
    """Performance-complexity score: -10 log10(BER) / (1e-8 * rops).

    Higher is better.  A zero BER saturates the score; `inf` is returned as
    the documented sentinel.
    """
    if ber < 0.0 or ber > 1.0:
        raise ValueError("ber must lie in [0, 1]")
    if ber == 0.0:
        return math.inf
    return -10.0 * math.log10(ber) / (1e-8 * rops)


def wilson_interval(errors: int, total: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for an error proportion; valid at low counts."""
    if total <= 0:
        raise ValueError("total must be positive")
    p = errors / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2.0 * total)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / total + z * z / (4.0 * total * total))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated Monte-Carlo statistics for one (detector, axis value) pair."""

    detector: str
    n_users: int
    n_rx: int
    modulation_order: int
    neighborhood_distance: int | None
    samples_per_update: int | None
    mixing_ratio: float | None
    axis: str
    axis_value: float
    trials: int
    total_bits: int
    bit_errors: int
    ber: float
    ber_ci95: float
    eni: float
    rops_per_symbol: float
    chi: float
    seed: int
