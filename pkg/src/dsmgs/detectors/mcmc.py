"""Gibbs-sampling detectors: full mixed sampling, averaged sampling, and
neighborhood-limited sampling.

All three share the same skeleton: sweep the 2K real coordinates, resample
each from a mixture of an informed move and a randomizing move, track the
best vector seen after every coordinate update, stop a run when the best
cost stalls, and restart from random vectors while the restart rule allows.

Each candidate cost is an O(1) update of the running residual: changing
coordinate ``i`` from ``s_i`` to ``a`` shifts the residual by
``-(a - s_i) h_i``, so ``||y - H s'||^2 = c - 2 (a - s_i) <h_i, r> +
(a - s_i)^2 ||h_i||^2`` with one dot product per coordinate.
"""

import math

import numpy as np

from ..constellation import slice_to_levels
from ..metrics import ComplexityModel, mmse_rops, rops_per_symbol
from . import _kernels
from .base import ChainRun, DetectionResult, MimoDetector, run_with_restarts
from .linear import mmse_filter


def _candidate_costs(y, H, s, index, alphabet):
    dims = H.shape[1]
    if not 0 <= index < dims:
        raise ValueError(f"coordinate index {index} out of range for {dims} dimensions")
    r = y - H @ np.asarray(s, dtype=np.float64)
    h = H[:, index]
    deltas = alphabet.levels - float(s[index])
    diff = r[:, None] - h[:, None] * deltas[None, :]
    return np.einsum("ij,ij->j", diff, diff)


def coordinate_log_probs(y, H, s, index, alphabet, temperature, noise_var):
    """Log-probabilities of each alphabet level at one coordinate.

    Implements the tempered conditional ``p(s_index = a_j) proportional to
    exp(-||y - H s_{index->a_j}||^2 / (temperature^2 noise_var))``,
    normalized in the log domain with max-subtraction so the result is
    stable for residuals many orders of magnitude above the noise floor.
    An infinite temperature yields the exact uniform distribution.
    `index` is 0-based over the 2K real coordinates.
    """
    if noise_var <= 0.0:
        raise ValueError("degenerate temperature: noise_var must be positive")
    if not temperature > 0.0:
        raise ValueError("temperature must be positive")
    if math.isinf(temperature):
        return np.full(alphabet.size, -math.log(alphabet.size))
    costs = _candidate_costs(y, H, s, index, alphabet)
    f = -costs / (temperature * temperature * noise_var)
    m = float(f.max())
    return f - (m + math.log(float(np.exp(f - m).sum())))


def min_cost_symbol(y, H, s, index, alphabet):
    """Alphabet level minimizing the residual at one coordinate.

    This is the simplified (argmin) target used by the averaged and
    neighborhood-limited detectors; ties resolve to the lowest level index.
    """
    costs = _candidate_costs(y, H, s, index, alphabet)
    return float(alphabet.levels[int(np.argmin(costs))])


class GibbsDetectorBase(MimoDetector):
    """Shared fit-time resolution and detection flow for the MCMC detectors."""

    _kind = ""

    def _fit_extra(self):
        self._validate_params()
        k = self.n_users_
        self.mixing_ratio_ = (
            1.0 / (2 * k) if self.mixing_ratio is None else float(self.mixing_ratio)
        )
        if not 0.0 <= self.mixing_ratio_ < 1.0:
            raise ValueError(f"mixing_ratio must lie in [0, 1), got {self.mixing_ratio_}")
        side = int(round(math.sqrt(self.modulation_order)))
        self.max_iterations_ = (
            8 * k * side if self.max_iterations is None else int(self.max_iterations)
        )
        if self.max_iterations_ < 1:
            raise ValueError("max_iterations must be >= 1")
        self._cols_ = np.ascontiguousarray(self.channel_.T)
        self._col_sq_ = np.einsum("ij,ij->i", self._cols_, self._cols_)
        if self.initial == "mmse":
            self.filter_ = mmse_filter(
                self.channel_, self.noise_var_, self.alphabet_.per_dimension_energy
            )

    def _validate_params(self):
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be >= 1")
        if self.stall_scale <= 0 or self.restart_scale <= 0:
            raise ValueError("stall_scale and restart_scale must be positive")
        if self.min_stall_iterations < 1:
            raise ValueError("min_stall_iterations must be >= 1")
        if self.initial not in ("mmse", "random"):
            raise ValueError(f"initial must be 'mmse' or 'random', got {self.initial!r}")

    def _initial_solution(self, y, run_index, rng):
        if run_index == 0 and self.initial == "mmse":
            return slice_to_levels(self.filter_ @ y, self.alphabet_)
        levels = self.alphabet_.levels
        return levels[rng.integers(0, levels.shape[0], size=2 * self.n_users_)]

    def _complexity_model(self) -> ComplexityModel:
        return ComplexityModel(
            kind=self._kind,
            n_users=self.n_users_,
            n_rx=self.n_rx_,
            alphabet_size=self.alphabet_.size,
            samples_per_update=getattr(self, "samples_per_update", 1),
            init_rops=mmse_rops(self.n_users_, self.n_rx_) if self.initial == "mmse" else 0.0,
        )

    def detect(self, y, rng=None) -> DetectionResult:
        self._check_fitted()
        if self.noise_var_ <= 0.0:
            raise ValueError("sampling temperatures are degenerate at zero noise variance")
        yv = self._validate_received(y)
        rng = np.random.default_rng(rng if rng is not None else self.random_state)
        best, runs, iterations, noisy, draws = run_with_restarts(
            lambda s0, g: self._single_run(yv, s0, g),
            lambda run_index, g: self._initial_solution(yv, run_index, g),
            rng,
            n_rx=self.n_rx_,
            noise_var=self.noise_var_,
            modulation_order=self.modulation_order,
            restart_scale=self.restart_scale,
            max_restarts=self.max_restarts,
        )
        return DetectionResult(
            s_hat=best.best_s,
            best_cost=self._residual_norm(yv, best.best_s),
            iterations_used=iterations,
            restarts_used=runs,
            rops_charged=rops_per_symbol(self._complexity_model(), iterations),
            noisy_draws=noisy,
            mixture_draws=draws,
        )

    def _single_run(self, y, s0, rng) -> ChainRun:
        raise NotImplementedError


class MgsDetector(GibbsDetectorBase):
    """Mixed Gibbs sampling over the tempered target distribution.

    Every coordinate update samples from the conditional at `temperature`
    with probability ``1 - mixing_ratio`` and from the conditional at
    `noisy_temperature` otherwise; the default infinite noisy temperature is
    a uniform draw over the alphabet.  ``mixing_ratio=0`` with
    ``temperature=1`` is conventional Gibbs sampling.
    """

    _kind = "mgs"

    def __init__(
        self,
        modulation_order=64,
        mixing_ratio=None,
        temperature=1.0,
        noisy_temperature=math.inf,
        max_iterations=None,
        max_restarts=20,
        stall_scale=10.0,
        restart_scale=1.0,
        min_stall_iterations=10,
        initial="mmse",
        random_state=None,
    ):
        self.modulation_order = modulation_order
        self.mixing_ratio = mixing_ratio
        self.temperature = temperature
        self.noisy_temperature = noisy_temperature
        self.max_iterations = max_iterations
        self.max_restarts = max_restarts
        self.stall_scale = stall_scale
        self.restart_scale = restart_scale
        self.min_stall_iterations = min_stall_iterations
        self.initial = initial
        self.random_state = random_state

    def _validate_params(self):
        super()._validate_params()
        if not self.temperature > 0 or math.isinf(self.temperature):
            raise ValueError("temperature must be positive and finite")
        if not self.noisy_temperature > 0:
            raise ValueError("noisy_temperature must be positive (inf allowed)")

    def _single_run(self, y, s0, rng) -> ChainRun:
        finite_noisy = math.isfinite(self.noisy_temperature)
        best_s, best_c, t, noisy = _kernels.run_mgs(
            self.channel_,
            self._cols_,
            self._col_sq_,
            self.alphabet_.levels,
            y,
            np.asarray(s0, dtype=np.float64),
            self.mixing_ratio_,
            1.0 / (self.temperature**2 * self.noise_var_),
            1.0 / (self.noisy_temperature**2 * self.noise_var_) if finite_noisy else 0.0,
            not finite_noisy,
            self.max_iterations_,
            self.n_rx_,
            self.noise_var_,
            self.stall_scale * math.log2(self.modulation_order),
            float(self.min_stall_iterations),
            rng,
        )
        return ChainRun(best_s, best_c, t, noisy, t * self._cols_.shape[0])


class AmgsDetector(GibbsDetectorBase):
    """Averaged mixed Gibbs sampling with the simplified argmin target.

    Each coordinate becomes the mean of `samples_per_update` mixture draws
    (the argmin symbol with probability ``1 - mixing_ratio``, a uniform
    alphabet symbol otherwise), so the working vector leaves the alphabet.
    A slicer maps visited states back onto it; candidates are scored, and
    the detected vector returned, through that sliced image.
    """

    _kind = "amgs"

    def __init__(
        self,
        modulation_order=64,
        samples_per_update=2,
        mixing_ratio=None,
        max_iterations=None,
        max_restarts=20,
        stall_scale=10.0,
        restart_scale=1.0,
        min_stall_iterations=10,
        initial="mmse",
        random_state=None,
    ):
        self.modulation_order = modulation_order
        self.samples_per_update = samples_per_update
        self.mixing_ratio = mixing_ratio
        self.max_iterations = max_iterations
        self.max_restarts = max_restarts
        self.stall_scale = stall_scale
        self.restart_scale = restart_scale
        self.min_stall_iterations = min_stall_iterations
        self.initial = initial
        self.random_state = random_state

    def _validate_params(self):
        super()._validate_params()
        if self.samples_per_update < 1:
            raise ValueError("samples_per_update must be >= 1")

    def _single_run(self, y, s0, rng) -> ChainRun:
        best_s, best_c, t, noisy = _kernels.run_amgs(
            self.channel_,
            self._cols_,
            self._col_sq_,
            self.alphabet_.levels,
            y,
            np.asarray(s0, dtype=np.float64),
            self.mixing_ratio_,
            self.samples_per_update,
            self.max_iterations_,
            self.n_rx_,
            self.noise_var_,
            self.stall_scale * math.log2(self.modulation_order),
            float(self.min_stall_iterations),
            rng,
        )
        return ChainRun(best_s, best_c, t, noisy, t * self._cols_.shape[0] * self.samples_per_update)


class DsmgsDetector(GibbsDetectorBase):
    """Neighborhood-limited simplified mixed Gibbs sampling.

    The randomizing move is restricted to levels within
    `neighborhood_distance` alphabet positions of the coordinate's current
    value, so a high-order constellation cannot throw a coordinate far from
    its estimate; the informed move is the simplified argmin target, only
    evaluated when its branch is drawn.  Output stays on the alphabet, no
    slicer needed.
    """

    _kind = "dsmgs"

    def __init__(
        self,
        modulation_order=64,
        neighborhood_distance=1,
        mixing_ratio=None,
        max_iterations=None,
        max_restarts=20,
        stall_scale=10.0,
        restart_scale=1.0,
        min_stall_iterations=10,
        initial="mmse",
        random_state=None,
    ):
        self.modulation_order = modulation_order
        self.neighborhood_distance = neighborhood_distance
        self.mixing_ratio = mixing_ratio
        self.max_iterations = max_iterations
        self.max_restarts = max_restarts
        self.stall_scale = stall_scale
        self.restart_scale = restart_scale
        self.min_stall_iterations = min_stall_iterations
        self.initial = initial
        self.random_state = random_state

    def _validate_params(self):
        super()._validate_params()
        if self.neighborhood_distance < 1:
            raise ValueError("neighborhood_distance must be >= 1")

    def _single_run(self, y, s0, rng) -> ChainRun:
        best_s, best_c, t, noisy = _kernels.run_dsmgs(
            self.channel_,
            self._cols_,
            self._col_sq_,
            self.alphabet_.levels,
            y,
            np.asarray(s0, dtype=np.float64),
            self.mixing_ratio_,
            self.neighborhood_distance,
            self.max_iterations_,
            self.n_rx_,
            self.noise_var_,
            self.stall_scale * math.log2(self.modulation_order),
            float(self.min_stall_iterations),
            rng,
        )
        return ChainRun(best_s, best_c, t, noisy, t * self._cols_.shape[0])
