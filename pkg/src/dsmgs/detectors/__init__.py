"""Detector estimators: exhaustive ML, linear MMSE, and the Gibbs samplers."""

from .base import ChainRun, DetectionResult, MimoDetector, run_with_restarts
from .linear import MLDetector, MmseDetector, mmse_filter
from .mcmc import (
    AmgsDetector,
    DsmgsDetector,
    GibbsDetectorBase,
    MgsDetector,
    coordinate_log_probs,
    min_cost_symbol,
)

__all__ = [
    "AmgsDetector",
    "ChainRun",
    "DetectionResult",
    "DsmgsDetector",
    "GibbsDetectorBase",
    "MLDetector",
    "MgsDetector",
    "MimoDetector",
    "MmseDetector",
    "coordinate_log_probs",
    "min_cost_symbol",
    "mmse_filter",
    "run_with_restarts",
]
