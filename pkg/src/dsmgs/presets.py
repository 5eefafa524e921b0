"""Named parameter presets for the benchmark detectors.

``dsmgs-default`` carries the stock large-scale simulation parameters,
``mgs-mr-baseline`` the restart-heavy configuration the full mixed sampler
is traditionally benchmarked with, and ``amgs-best`` the published best
mixing ratios of the averaged sampler, keyed by sample count and receive
antenna count.
"""

PRESET_NAMES = ("dsmgs-default", "mgs-mr-baseline", "amgs-best")

# amgs-best mixing-ratio divisors: q = 1 / (divisor * K), keyed by
# samples_per_update, with one column for N <= 64 and one for N > 64.
_AMGS_DIVISORS = {
    1: (4, 4),
    2: (4, 4),
    4: (3, 2),
    8: (2, 2),
}


def amgs_best_divisor(samples_per_update: int, n_rx: int) -> int:
    if samples_per_update not in _AMGS_DIVISORS:
        raise ValueError(
            f"amgs-best defines mixing ratios only for samples in {sorted(_AMGS_DIVISORS)}, "
            f"got {samples_per_update}"
        )
    low, high = _AMGS_DIVISORS[samples_per_update]
    return low if n_rx <= 64 else high


def preset_params(name: str, *, samples_per_update=None, n_rx=None) -> dict:
    """Detector keyword arguments for a named preset.

    ``amgs-best`` needs `samples_per_update` and `n_rx` to pick its mixing
    ratio.  Mixing ratios are returned as ``mixing_ratio_divisor`` (meaning
    q = 1 / (divisor * K)) so they adapt to the per-point user count.
    """
    if name == "dsmgs-default":
        return {
            "mixing_ratio_divisor": 2,
            "max_restarts": 20,
            "stall_scale": 10.0,
            "restart_scale": 1.0,
            "min_stall_iterations": 10,
        }
    if name == "mgs-mr-baseline":
        return {
            "mixing_ratio_divisor": 2,
            "max_restarts": 50,
            "stall_scale": 10.0,
            "restart_scale": 0.5,
            "min_stall_iterations": 10,
        }
    if name == "amgs-best":
        if samples_per_update is None or n_rx is None:
            raise ValueError("preset 'amgs-best' needs samples_per_update and n_rx")
        return {
            "samples_per_update": samples_per_update,
            "mixing_ratio_divisor": amgs_best_divisor(samples_per_update, n_rx),
            "max_iterations": 3000,
            "max_restarts": 5,
            "stall_scale": 10.0,
            "restart_scale": 1.0,
            "min_stall_iterations": 10,
        }
    raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


def describe_presets() -> str:
    """Human-readable preset listing for the CLI."""
    return "\n".join(
        [
            "dsmgs-default    (kind dsmgs; distance d in {1, 2, 3})",
            "    q = 1/(2K), max_iterations = 8*K*sqrt(M), max_restarts = 20,",
            "    stall_scale = 10, restart_scale = 1, min_stall_iterations = 10",
            "",
            "mgs-mr-baseline  (kind mgs)",
            "    q = 1/(2K), max_iterations = 8*K*sqrt(M), max_restarts = 50,",
            "    stall_scale = 10, restart_scale = 0.5, min_stall_iterations = 10",
            "",
            "amgs-best        (kind amgs; requires samples)",
            "    max_iterations = 3000, max_restarts = 5,",
            "    stall_scale = 10, restart_scale = 1, min_stall_iterations = 10",
            "    mixing ratio q by samples and receive antennas:",
            "        samples=1: q = 1/(4K)",
            "        samples=2: q = 1/(4K)",
            "        samples=4: q = 1/(3K) if N <= 64 else 1/(2K)",
            "        samples=8: q = 1/(2K)",
        ]
    )
