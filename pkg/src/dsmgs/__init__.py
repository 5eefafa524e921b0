"""Mixed Gibbs sampling detection for large-scale MIMO uplinks.

Detector estimators follow the scikit-learn convention (``fit`` binds the
channel, ``predict``/``detect`` recover symbols); the harness runs seeded,
reproducible Monte-Carlo sweeps over SNR, system loading or iteration caps.
"""

__version__ = "0.1.0"

from .constellation import (
    PamAlphabet,
    bit_distance_table,
    bits_to_levels,
    build_alphabet,
    index_distance,
    levels_to_bits,
    neighborhood,
    slice_to_levels,
)
from .detectors import (
    AmgsDetector,
    DetectionResult,
    DsmgsDetector,
    MLDetector,
    MgsDetector,
    MmseDetector,
    coordinate_log_probs,
    min_cost_symbol,
    run_with_restarts,
)
from .harness import DetectorSpec, ExperimentSpec, derive_stream, run_point, sweep
from .metrics import (
    ComplexityModel,
    SweepPoint,
    effective_iterations,
    mmse_rops,
    rops_per_symbol,
    tradeoff_score,
    wilson_interval,
)
from .stopping import residual_quality, restart_limit, solution_quality, stall_limit, stalling_check
from .system import (
    ComplexSystemDraw,
    RealSystem,
    draw_channel,
    draw_trial,
    noise_variance_for_snr,
    real_block_channel,
    realify,
)

__all__ = [
    "AmgsDetector",
    "ComplexSystemDraw",
    "ComplexityModel",
    "DetectionResult",
    "DetectorSpec",
    "DsmgsDetector",
    "ExperimentSpec",
    "MLDetector",
    "MgsDetector",
    "MmseDetector",
    "PamAlphabet",
    "RealSystem",
    "SweepPoint",
    "bit_distance_table",
    "bits_to_levels",
    "build_alphabet",
    "coordinate_log_probs",
    "derive_stream",
    "draw_channel",
    "draw_trial",
    "effective_iterations",
    "index_distance",
    "levels_to_bits",
    "min_cost_symbol",
    "mmse_rops",
    "neighborhood",
    "noise_variance_for_snr",
    "real_block_channel",
    "realify",
    "residual_quality",
    "restart_limit",
    "rops_per_symbol",
    "run_point",
    "run_with_restarts",
    "slice_to_levels",
    "solution_quality",
    "stall_limit",
    "stalling_check",
    "sweep",
    "tradeoff_score",
    "wilson_interval",
]
