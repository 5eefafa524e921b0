"""Estimator plumbing shared by all detectors.

Detectors follow the scikit-learn convention: hyperparameters in
``__init__`` stored verbatim, channel state bound with :meth:`fit`, symbol
decisions from :meth:`predict`.  The richer :meth:`detect` returns a
:class:`DetectionResult` with the per-instance diagnostics the benchmark
harness aggregates.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ..constellation import build_alphabet
from ..system import real_block_channel
from ..stopping import restart_limit, solution_quality


@dataclass
class DetectionResult:
    """Outcome of detecting one received vector.

    `best_cost` is the residual norm ``||y - H s_hat||`` of the returned
    (alphabet-valued) vector; `iterations_used` counts sweeps across all
    restarts; `rops_charged` is the analytic per-symbol complexity for this
    instance.  `noisy_draws` / `mixture_draws` instrument the mixing branch.
    """

    s_hat: np.ndarray
    best_cost: float
    iterations_used: int
    restarts_used: int
    rops_charged: float
    noisy_draws: int = 0
    mixture_draws: int = 0


@dataclass
class ChainRun:
    """Best solution found by one chain run, with its bookkeeping."""

    best_s: np.ndarray
    best_cost_sq: float
    iterations: int
    noisy_draws: int = 0
    mixture_draws: int = 0


def run_with_restarts(
    run_chain,
    make_initial,
    rng,
    *,
    n_rx: int,
    noise_var: float,
    modulation_order: int,
    restart_scale: float,
    max_restarts: int,
):
    """Repeat `run_chain` from fresh starts until the restart rule is met.

    ``run_chain(s0, rng) -> ChainRun`` executes one run from the initial
    vector ``s0 = make_initial(run_index, rng)``.  After each run the restart
    allowance is recomputed from the quality of the best solution so far; the
    loop continues while fewer runs than both that allowance and
    `max_restarts` have been executed.  Returns the minimum-cost run plus
    total run/iteration/draw counters.
    """
    best = None
    runs = 0
    iterations = 0
    noisy = 0
    draws = 0
    while True:
        out = run_chain(make_initial(runs, rng), rng)
        runs += 1
        iterations += out.iterations
        noisy += out.noisy_draws
        draws += out.mixture_draws
        if best is None or out.best_cost_sq < best.best_cost_sq:
            best = out
        quality = solution_quality(best.best_cost_sq, n_rx, noise_var)
        allowed = restart_limit(quality, modulation_order, restart_scale)
        if runs >= allowed or runs >= max_restarts:
            break
    return best, runs, iterations, noisy, draws


class MimoDetector(BaseEstimator):
    """Base class binding channel state and validating inputs.

    Subclasses implement :meth:`detect`; :meth:`fit` accepts either the real
    2N x 2K block channel or the complex N x K matrix (expanded internally)
    together with the complex-pair noise variance.
    """

    def fit(self, H, noise_var):
        """Bind the channel matrix and noise variance for detection.

        Parameters
        ----------
        H : array-like
            Complex channel of shape (n_rx, n_users) or its real block
            expansion of shape (2 n_rx, 2 n_users).
        noise_var : float
            Complex-pair noise variance sigma^2 at each receive antenna.
        """
        mat = np.asarray(H)
        if mat.ndim != 2:
            raise ValueError("channel matrix must be 2-D")
        if np.iscomplexobj(mat):
            mat = real_block_channel(mat)
        else:
            if mat.shape[0] % 2 or mat.shape[1] % 2:
                raise ValueError("real block channel must have even dimensions")
            mat = mat.astype(np.float64, copy=False)
        if not np.all(np.isfinite(mat)):
            raise ValueError("channel matrix contains non-finite entries")
        noise_var = float(noise_var)
        if not np.isfinite(noise_var) or noise_var < 0:
            raise ValueError("noise_var must be finite and nonnegative")
        self.channel_ = mat
        self.noise_var_ = noise_var
        self.n_rx_ = mat.shape[0] // 2
        self.n_users_ = mat.shape[1] // 2
        self.alphabet_ = build_alphabet(self.modulation_order)
        self._fit_extra()
        return self

    def _fit_extra(self):
        """Hook for subclass precomputation after the channel is bound."""

    def _check_fitted(self):
        if not hasattr(self, "channel_"):
            raise NotFittedError(f"{type(self).__name__} must be fitted before detecting")

    def _validate_received(self, y) -> np.ndarray:
        arr = np.asarray(y)
        if np.iscomplexobj(arr):
            arr = np.concatenate([arr.real, arr.imag], axis=-1)
        arr = arr.astype(np.float64, copy=False)
        if arr.shape[-1] != self.channel_.shape[0]:
            raise ValueError(
                f"received vector has {arr.shape[-1]} real dimensions, channel expects {self.channel_.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("received vector contains non-finite entries")
        return arr

    def detect(self, y, rng=None) -> DetectionResult:
        raise NotImplementedError

    def predict(self, y, rng=None):
        """Detect one vector or a batch; complex input yields complex symbols.

        Rows of a 2-D input are detected independently, consuming one shared
        random stream in row order (so a fixed `random_state` or `rng` makes
        the batch reproducible).
        """
        self._check_fitted()
        arr = np.asarray(y)
        complex_in = np.iscomplexobj(arr)
        rng = np.random.default_rng(rng if rng is not None else getattr(self, "random_state", None))
        single = arr.ndim == 1
        rows = arr[None, :] if single else arr
        outputs = np.empty((rows.shape[0], 2 * self.n_users_))
        for i in range(rows.shape[0]):
            outputs[i] = self.detect(rows[i], rng=rng).s_hat
        if complex_in:
            k = self.n_users_
            outputs = outputs[:, :k] + 1j * outputs[:, k:]
        return outputs[0] if single else outputs

    def _residual_norm(self, y: np.ndarray, s: np.ndarray) -> float:
        return float(np.linalg.norm(y - self.channel_ @ s))
