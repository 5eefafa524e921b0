"""Linear MMSE detection and the exhaustive maximum-likelihood oracle."""

import numpy as np

from ..constellation import slice_to_levels
from ..metrics import mmse_rops
from .base import DetectionResult, MimoDetector

# Exhaustive search is refused beyond this many candidate bits.
ML_MAX_BITS = 24
_ML_BLOCK = 1 << 14


def mmse_filter(channel: np.ndarray, noise_var: float, per_dimension_energy: float) -> np.ndarray:
    """Regularized pseudo-inverse (H^T H + sigma^2 / (2 E_dim) I)^-1 H^T."""
    gram = channel.T @ channel
    lam = noise_var / (2.0 * per_dimension_energy)
    return np.linalg.solve(gram + lam * np.eye(gram.shape[0]), channel.T)


class MmseDetector(MimoDetector):
    """Linear MMSE detector followed by a hard slicer.

    With ``noise_var == 0`` the filter degenerates to zero forcing and fit
    raises a numeric error when the Gram matrix is singular.
    """

    def __init__(self, modulation_order=64):
        self.modulation_order = modulation_order

    def _fit_extra(self):
        self.filter_ = mmse_filter(
            self.channel_, self.noise_var_, self.alphabet_.per_dimension_energy
        )

    def detect(self, y, rng=None) -> DetectionResult:
        self._check_fitted()
        yv = self._validate_received(y)
        s_hat = slice_to_levels(self.filter_ @ yv, self.alphabet_)
        return DetectionResult(
            s_hat=s_hat,
            best_cost=self._residual_norm(yv, s_hat),
            iterations_used=0,
            restarts_used=0,
            rops_charged=mmse_rops(self.n_users_, self.n_rx_),
        )


class MLDetector(MimoDetector):
    """Exhaustive maximum-likelihood oracle for small instances.

    Enumerates all ``|A|^(2K)`` candidate vectors in lexicographic symbol
    order (ties go to the lexicographically smallest) and refuses instances
    beyond ``ML_MAX_BITS`` candidate bits.  No complexity model applies, so
    `rops_charged` is NaN.
    """

    def __init__(self, modulation_order=64):
        self.modulation_order = modulation_order

    def _fit_extra(self):
        dims = 2 * self.n_users_
        bits = dims * (self.alphabet_.size.bit_length() - 1)
        if bits > ML_MAX_BITS:
            raise ValueError(
                f"maximum-likelihood oracle too large: {bits} candidate bits exceed the {ML_MAX_BITS}-bit budget"
            )
        self._n_candidates_ = self.alphabet_.size**dims

    def detect(self, y, rng=None) -> DetectionResult:
        self._check_fitted()
        yv = self._validate_received(y)
        levels = self.alphabet_.levels
        dims = 2 * self.n_users_
        shape = (self.alphabet_.size,) * dims
        best_cost_sq = np.inf
        best_first = -1
        for start in range(0, self._n_candidates_, _ML_BLOCK):
            stop = min(start + _ML_BLOCK, self._n_candidates_)
            idx = np.unravel_index(np.arange(start, stop), shape)
            cand = levels[np.stack(idx)]  # (dims, block)
            diff = yv[:, None] - self.channel_ @ cand
            costs = np.einsum("ij,ij->j", diff, diff)
            j = int(np.argmin(costs))
            if costs[j] < best_cost_sq:
                best_cost_sq = float(costs[j])
                best_first = start + j
        idx = np.unravel_index(best_first, shape)
        s_hat = levels[np.array(idx)]
        return DetectionResult(
            s_hat=s_hat,
            best_cost=self._residual_norm(yv, s_hat),
            iterations_used=0,
            restarts_used=0,
            rops_charged=float("nan"),
        )
