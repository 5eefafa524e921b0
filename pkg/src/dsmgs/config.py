"""Declarative experiment configuration (INI files).

A run is described by a plain-text file with three kinds of sections::

    [system]
    users = 16            ; K (omit when axis = loading)
    rx_antennas = 16      ; N
    modulation = 64       ; M in {4, 16, 64, 256}

    [sweep]
    axis = snr_db         ; snr_db | loading | iteration_scale
    values = 15, 20, 25
    ; snr_db = 25         ; required for loading / iteration_scale axes
    ; min_bit_errors = 200
    ; max_trials = 100000
    ; seed = 0

    [detector:1-smgs]
    kind = dsmgs
    distance = 1
    ; preset = dsmgs-default
    ; mixing_ratio = 1/(2K)      ; or a plain float

Unknown sections or keys are rejected by name; every detector section
becomes one curve of the sweep, in file order.
"""

import configparser
import math
import re

from .harness import DetectorSpec, ExperimentSpec
from .presets import PRESET_NAMES, preset_params

__all__ = ["ConfigError", "parse_config"]


class ConfigError(ValueError):
    """Invalid or unreadable run configuration (CLI exit code 2)."""


_SYSTEM_KEYS = {"users", "rx_antennas", "modulation"}
_SWEEP_KEYS = {"axis", "values", "snr_db", "min_bit_errors", "max_trials", "seed"}
_MCMC_KEYS = {
    "preset",
    "mixing_ratio",
    "max_iterations",
    "max_restarts",
    "stall_scale",
    "restart_scale",
    "min_stall_iterations",
    "initial",
}
_DETECTOR_KEYS = {
    "ml": set(),
    "mmse": set(),
    "mgs": _MCMC_KEYS | {"temperature", "noisy_temperature"},
    "amgs": _MCMC_KEYS | {"samples"},
    "dsmgs": _MCMC_KEYS | {"distance"},
}
_MODULATIONS = (4, 16, 64, 256)
_MIXING_RE = re.compile(r"^1\s*/\s*\(?\s*(\d+)\s*\*?\s*K\s*\)?$", re.IGNORECASE)


def _fail(message: str) -> ConfigError:
    return ConfigError(message)


def _get_int(section, key, raw, minimum=None):
    try:
        value = int(raw)
    except ValueError:
        raise _fail(f"[{section}] {key} must be an integer, got {raw!r}") from None
    if minimum is not None and value < minimum:
        raise _fail(f"[{section}] {key} must be >= {minimum}, got {value}")
    return value


def _get_float(section, key, raw, allow_inf=False):
    try:
        value = float(raw)
    except ValueError:
        raise _fail(f"[{section}] {key} must be a number, got {raw!r}") from None
    if not allow_inf and not math.isfinite(value):
        raise _fail(f"[{section}] {key} must be finite, got {raw!r}")
    return value


def _parse_mixing_ratio(section, raw):
    """A float in (0, 1) or a '1/(cK)' expression kept symbolic in K."""
    match = _MIXING_RE.match(raw.strip())
    if match:
        return {"mixing_ratio_divisor": int(match.group(1))}
    value = _get_float(section, "mixing_ratio", raw)
    if not 0.0 <= value < 1.0:
        raise _fail(f"[{section}] mixing_ratio must lie in [0, 1), got {value}")
    return {"mixing_ratio": value}


def _check_keys(section, present, allowed):
    for key in present:
        if key not in allowed:
            raise _fail(f"[{section}] unknown key {key!r}")


def _parse_detector(section: str, entries: dict) -> DetectorSpec:
    name = section.split(":", 1)[1].strip()
    if not name:
        raise _fail(f"[{section}] detector sections need a name after the colon")
    if "," in name:
        raise _fail(f"[{section}] detector names must not contain commas")
    kind = entries.get("kind")
    if kind is None:
        raise _fail(f"[{section}] missing required key 'kind'")
    if kind not in _DETECTOR_KEYS:
        raise _fail(f"[{section}] unknown detector kind {kind!r}")
    _check_keys(section, set(entries) - {"kind"}, _DETECTOR_KEYS[kind])

    params: dict = {}
    preset = entries.get("preset")
    if preset is not None:
        if preset not in PRESET_NAMES:
            raise _fail(f"[{section}] unknown preset {preset!r}; available: {', '.join(PRESET_NAMES)}")
        expected_kind = {"dsmgs-default": "dsmgs", "mgs-mr-baseline": "mgs", "amgs-best": "amgs"}[preset]
        if kind != expected_kind:
            raise _fail(f"[{section}] preset {preset!r} applies to kind {expected_kind!r}, not {kind!r}")

    if kind == "dsmgs":
        if "distance" not in entries:
            raise _fail(f"[{section}] missing required key 'distance'")
        params["neighborhood_distance"] = _get_int(section, "distance", entries["distance"], minimum=1)
    if kind == "amgs":
        if "samples" in entries:
            params["samples_per_update"] = _get_int(section, "samples", entries["samples"], minimum=1)
        elif preset == "amgs-best":
            raise _fail(f"[{section}] preset 'amgs-best' requires the key 'samples'")

    int_keys = {"max_iterations": 1, "max_restarts": 1, "min_stall_iterations": 1}
    float_keys = {"stall_scale", "restart_scale", "temperature"}
    for key, raw in entries.items():
        if key in ("kind", "preset", "distance", "samples"):
            continue
        if key == "mixing_ratio":
            params.update(_parse_mixing_ratio(section, raw))
        elif key in int_keys:
            params[key] = _get_int(section, key, raw, minimum=int_keys[key])
        elif key in float_keys:
            value = _get_float(section, key, raw)
            if value <= 0:
                raise _fail(f"[{section}] {key} must be positive, got {value}")
            params[key] = value
        elif key == "noisy_temperature":
            value = _get_float(section, key, raw, allow_inf=True)
            if not value > 0:
                raise _fail(f"[{section}] noisy_temperature must be positive, got {value}")
            params[key] = value
        elif key == "initial":
            if raw not in ("mmse", "random"):
                raise _fail(f"[{section}] initial must be 'mmse' or 'random', got {raw!r}")
            params[key] = raw
    return DetectorSpec(name=name, kind=kind, params=params), preset


def parse_config(path) -> ExperimentSpec:
    """Read and validate a run configuration file into an ExperimentSpec."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise _fail(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise _fail(f"malformed config file {path}: {exc}") from exc

    sections = parser.sections()
    detector_sections = [s for s in sections if s.startswith("detector:")]
    for section in sections:
        if section not in ("system", "sweep") and section not in detector_sections:
            raise _fail(f"unknown section [{section}]")
    for required in ("system", "sweep"):
        if required not in sections:
            raise _fail(f"missing required section [{required}]")
    if not detector_sections:
        raise _fail("at least one [detector:<name>] section is required")

    system = dict(parser.items("system"))
    _check_keys("system", system, _SYSTEM_KEYS)
    sweepcfg = dict(parser.items("sweep"))
    _check_keys("sweep", sweepcfg, _SWEEP_KEYS)

    axis = sweepcfg.get("axis")
    if axis not in ("snr_db", "loading", "iteration_scale"):
        raise _fail(f"[sweep] axis must be snr_db, loading or iteration_scale, got {axis!r}")

    for key in ("rx_antennas", "modulation"):
        if key not in system:
            raise _fail(f"[system] missing required key {key!r}")
    n_rx = _get_int("system", "rx_antennas", system["rx_antennas"], minimum=1)
    modulation = _get_int("system", "modulation", system["modulation"])
    if modulation not in _MODULATIONS:
        raise _fail(f"[system] modulation must be one of {_MODULATIONS}, got {modulation}")

    if axis == "loading":
        if "users" in system:
            raise _fail("[system] users must be omitted for a loading sweep (K follows the loading)")
        n_users = None
    else:
        if "users" not in system:
            raise _fail("[system] missing required key 'users'")
        n_users = _get_int("system", "users", system["users"], minimum=1)
        if n_users > n_rx:
            raise _fail(f"[system] users = {n_users} exceeds rx_antennas = {n_rx} (loading above 1 is unsupported)")

    if "values" not in sweepcfg:
        raise _fail("[sweep] missing required key 'values'")
    raw_values = [v for v in (piece.strip() for piece in sweepcfg["values"].split(",")) if v]
    if not raw_values:
        raise _fail("[sweep] values must list at least one number")
    axis_values = tuple(_get_float("sweep", "values", v) for v in raw_values)
    if axis == "loading":
        for beta in axis_values:
            if not 0.0 < beta <= 1.0:
                raise _fail(f"[sweep] loading values must lie in (0, 1], got {beta}")

    snr_db = None
    if axis == "snr_db":
        if "snr_db" in sweepcfg:
            raise _fail("[sweep] snr_db applies only to loading / iteration_scale sweeps")
    else:
        if "snr_db" not in sweepcfg:
            raise _fail(f"[sweep] axis {axis!r} requires the key 'snr_db'")
        snr_db = _get_float("sweep", "snr_db", sweepcfg["snr_db"])

    min_bit_errors = _get_int("sweep", "min_bit_errors", sweepcfg.get("min_bit_errors", "200"), minimum=1)
    max_trials = _get_int("sweep", "max_trials", sweepcfg.get("max_trials", "100000"), minimum=1)
    seed = _get_int("sweep", "seed", sweepcfg.get("seed", "0"))

    detectors = []
    seen = set()
    for section in detector_sections:
        spec, preset = _parse_detector(section, dict(parser.items(section)))
        if spec.name in seen:
            raise _fail(f"duplicate detector name {spec.name!r}")
        seen.add(spec.name)
        if preset is not None:
            base = preset_params(
                preset,
                samples_per_update=spec.params.get("samples_per_update"),
                n_rx=n_rx,
            )
            merged = dict(base)
            # explicit keys win over the preset
            for key, value in spec.params.items():
                merged[key] = value
            if "mixing_ratio" in spec.params:
                merged.pop("mixing_ratio_divisor", None)
            spec = DetectorSpec(name=spec.name, kind=spec.kind, params=merged)
        detectors.append(spec)

    try:
        return ExperimentSpec(
            n_users=n_users,
            n_rx=n_rx,
            modulation_order=modulation,
            detectors=tuple(detectors),
            axis=axis,
            axis_values=axis_values,
            snr_db=snr_db,
            min_bit_errors=min_bit_errors,
            max_trials=max_trials,
            master_seed=seed,
        )
    except ValueError as exc:
        raise _fail(str(exc)) from exc
