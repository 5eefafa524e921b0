"""Seeded Monte-Carlo engine for BER / complexity sweeps.

Every trial owns an independent random stream derived from the master seed
and its (point, trial) coordinates, so results are a pure function of the
experiment and seed: worker count and scheduling cannot change a single bit.
Points stop once a minimum number of bit errors has been observed (uniform
relative confidence across the sweep) or at the trial cap.
"""

import math
from dataclasses import dataclass, field

import joblib
import numpy as np

from .constellation import bit_distance_table, build_alphabet, level_indices
from .detectors import AmgsDetector, DsmgsDetector, MgsDetector, MLDetector, MmseDetector
from .metrics import ComplexityModel, mmse_rops, rops_per_symbol, tradeoff_score, wilson_interval
from .metrics import SweepPoint
from .system import draw_trial

DETECTOR_KINDS = {
    "ml": MLDetector,
    "mmse": MmseDetector,
    "mgs": MgsDetector,
    "amgs": AmgsDetector,
    "dsmgs": DsmgsDetector,
}
_MCMC_KINDS = ("mgs", "amgs", "dsmgs")
AXES = ("snr_db", "loading", "iteration_scale")

# Stopping decisions happen only at fixed batch boundaries so they cannot
# depend on the worker count.
TRIAL_BATCH = 64


@dataclass(frozen=True)
class DetectorSpec:
    """One detector entry of an experiment: display name, kind, parameters.

    `params` holds keyword arguments for the detector class; the special key
    ``mixing_ratio_divisor`` resolves to ``mixing_ratio = 1 / (divisor * K)``
    once the per-point user count is known.
    """

    name: str
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in DETECTOR_KINDS:
            raise ValueError(f"unknown detector kind {self.kind!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """A full sweep: system geometry, detectors, axis, stopping rule, seed.

    `n_users` is fixed for SNR and iteration-cap sweeps; loading sweeps leave
    it None and derive the per-point user count from the loading value.
    """

    n_users: int | None
    n_rx: int
    modulation_order: int
    detectors: tuple
    axis: str
    axis_values: tuple
    snr_db: float | None = None
    min_bit_errors: int = 200
    max_trials: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        if not self.axis_values:
            raise ValueError("axis_values must be nonempty")
        if self.n_rx < 1:
            raise ValueError("n_rx must be >= 1")
        if self.axis == "loading":
            for beta in self.axis_values:
                if not 0.0 < beta <= 1.0:
                    raise ValueError(f"loading values must lie in (0, 1], got {beta}")
        else:
            if self.n_users is None or not 1 <= self.n_users <= self.n_rx:
                raise ValueError("need 1 <= n_users <= n_rx (loadings above 1 are unsupported)")
        if self.axis != "snr_db" and self.snr_db is None:
            raise ValueError(f"axis {self.axis!r} needs a fixed snr_db")
        if self.min_bit_errors < 1 or self.max_trials < 1:
            raise ValueError("min_bit_errors and max_trials must be positive")


def derive_stream(master_seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible random stream for one (point, trial) pair."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(point_index, trial_index))
    return np.random.default_rng(seq)


def _point_geometry(spec: ExperimentSpec, axis_value):
    """Per-point (n_users, snr_db, max_iterations override)."""
    if spec.axis == "snr_db":
        return spec.n_users, float(axis_value), None
    if spec.axis == "loading":
        n_users = int(round(axis_value * spec.n_rx))
        if not 1 <= n_users <= spec.n_rx:
            raise ValueError(f"loading {axis_value} maps to unsupported user count {n_users}")
        return n_users, float(spec.snr_db), None
    side = int(round(math.sqrt(spec.modulation_order)))
    cap = max(1, int(round(axis_value * spec.n_users * side)))
    return spec.n_users, float(spec.snr_db), cap


def _estimator_params(det: DetectorSpec, n_users: int, iteration_cap):
    params = dict(det.params)
    divisor = params.pop("mixing_ratio_divisor", None)
    if det.kind in _MCMC_KINDS:
        if divisor is not None and params.get("mixing_ratio") is None:
            params["mixing_ratio"] = 1.0 / (divisor * n_users)
        if iteration_cap is not None:
            params["max_iterations"] = iteration_cap
    return params


def _run_trial_block(
    kind,
    params,
    n_users,
    n_rx,
    modulation_order,
    snr_db,
    master_seed,
    point_index,
    trial_indices,
):
    """Detect a block of trials; returns (bit_errors, iterations) sums."""
    detector = DETECTOR_KINDS[kind](modulation_order=modulation_order, **params)
    alphabet = build_alphabet(modulation_order)
    distances = bit_distance_table(alphabet)
    bit_errors = 0
    iterations = 0
    for trial_index in trial_indices:
        rng = derive_stream(master_seed, point_index, trial_index)
        trial = draw_trial(n_users, n_rx, modulation_order, snr_db, rng)
        detector.fit(trial.H, trial.noise_var)
        result = detector.detect(trial.y, rng=rng)
        sent = level_indices(trial.s, alphabet)
        decided = level_indices(result.s_hat, alphabet)
        bit_errors += int(distances[sent, decided].sum())
        iterations += result.iterations_used
    return bit_errors, iterations


def _point_rops(kind, params, n_users, n_rx, alphabet_size, eni):
    if kind == "ml":
        return float("nan")
    if kind == "mmse":
        return mmse_rops(n_users, n_rx)
    model = ComplexityModel(
        kind=kind,
        n_users=n_users,
        n_rx=n_rx,
        alphabet_size=alphabet_size,
        samples_per_update=params.get("samples_per_update", 2) if kind == "amgs" else 1,
        init_rops=mmse_rops(n_users, n_rx) if params.get("initial", "mmse") == "mmse" else 0.0,
    )
    return rops_per_symbol(model, eni)


def run_point(
    spec: ExperimentSpec,
    det: DetectorSpec,
    axis_value,
    point_index: int,
    n_jobs: int = 1,
) -> SweepPoint:
    """Monte-Carlo estimate of one (detector, axis value) sweep point.

    Trials run in fixed batches of `TRIAL_BATCH`; the bit-error target is
    checked only at batch boundaries and every trial uses its pre-assigned
    stream, so the result is identical for any `n_jobs`.
    """
    n_users, snr_db, iteration_cap = _point_geometry(spec, axis_value)
    params = _estimator_params(det, n_users, iteration_cap)
    alphabet = build_alphabet(spec.modulation_order)
    bits_per_trial = n_users * alphabet.bits_per_symbol * 2
    base_args = (
        det.kind,
        params,
        n_users,
        spec.n_rx,
        spec.modulation_order,
        snr_db,
        spec.master_seed,
        point_index,
    )
    bit_errors = 0
    iterations = 0
    trials = 0
    if n_jobs == 1:
        while trials < spec.max_trials and bit_errors < spec.min_bit_errors:
            stop = min(trials + TRIAL_BATCH, spec.max_trials)
            e, it = _run_trial_block(*base_args, range(trials, stop))
            bit_errors += e
            iterations += it
            trials = stop
    else:
        with joblib.Parallel(n_jobs=n_jobs) as parallel:
            while trials < spec.max_trials and bit_errors < spec.min_bit_errors:
                stop = min(trials + TRIAL_BATCH, spec.max_trials)
                chunks = [c for c in np.array_split(np.arange(trials, stop), n_jobs) if c.size]
                outs = parallel(
                    joblib.delayed(_run_trial_block)(*base_args, chunk.tolist())
                    for chunk in chunks
                )
                for e, it in outs:
                    bit_errors += e
                    iterations += it
                trials = stop
    total_bits = trials * bits_per_trial
    ber = bit_errors / total_bits
    lo, hi = wilson_interval(bit_errors, total_bits)
    eni = iterations / trials
    rops = _point_rops(det.kind, params, n_users, spec.n_rx, alphabet.size, eni)
    if math.isnan(rops):
        chi = float("nan")
    else:
        chi = tradeoff_score(ber, rops)
    mixing = params.get("mixing_ratio")
    if det.kind in _MCMC_KINDS and mixing is None:
        mixing = 1.0 / (2 * n_users)
    return SweepPoint(
        detector=det.name,
        n_users=n_users,
        n_rx=spec.n_rx,
        modulation_order=spec.modulation_order,
        neighborhood_distance=params.get("neighborhood_distance", 1) if det.kind == "dsmgs" else None,
        samples_per_update=params.get("samples_per_update", 2) if det.kind == "amgs" else None,
        mixing_ratio=mixing if det.kind in _MCMC_KINDS else None,
        axis=spec.axis,
        axis_value=float(axis_value),
        trials=trials,
        total_bits=total_bits,
        bit_errors=bit_errors,
        ber=ber,
        ber_ci95=(hi - lo) / 2.0,
        eni=eni,
        rops_per_symbol=rops,
        chi=chi,
        seed=spec.master_seed,
    )


def sweep(spec: ExperimentSpec, n_jobs: int = 1) -> list[SweepPoint]:
    """Run every (detector, axis value) point of an experiment.

    Points get consecutive indices in (detector, axis value) order, which
    fixes their derived seeds; each point is otherwise independent.
    """
    points = []
    point_index = 0
    for det in spec.detectors:
        for axis_value in spec.axis_values:
            points.append(run_point(spec, det, axis_value, point_index, n_jobs=n_jobs))
            point_index += 1
    return points
