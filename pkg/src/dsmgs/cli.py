"""Command-line front end: run configured sweeps, write CSV, list presets.

Exit codes: 0 on success (under-resolved points only warn), 2 for
configuration problems, 3 for I/O failures while writing results.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import ConfigError, parse_config
from .harness import sweep
from .metrics import SweepPoint
from .presets import describe_presets

CSV_COLUMNS = (
    "detector",
    "K",
    "N",
    "M",
    "d",
    "L_e",
    "q",
    "axis",
    "axis_value",
    "trials",
    "total_bits",
    "bit_errors",
    "ber",
    "ber_ci95",
    "eni",
    "rops_per_symbol",
    "chi",
    "seed",
)

_PLOT_SCRIPT = """\
#!/usr/bin/env python3
# Plot BER and complexity curves from {csv_name} (needs matplotlib).
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

rows = list(csv.DictReader(open({csv_name!r}, encoding="utf-8")))
axis = rows[0]["axis"] if rows else "axis"
curves = defaultdict(list)
for row in rows:
    curves[row["detector"]].append((float(row["axis_value"]), row))

fig, (ax_ber, ax_rops) = plt.subplots(1, 2, figsize=(11, 4.5))
for name, pts in curves.items():
    pts.sort()
    xs = [x for x, _ in pts]
    ax_ber.semilogy(xs, [max(float(r["ber"]), 1e-12) for _, r in pts], marker="o", label=name)
    rops = [(x, float(r["rops_per_symbol"])) for x, r in pts if r["rops_per_symbol"] not in ("", "nan")]
    if rops:
        ax_rops.semilogy([x for x, _ in rops], [v for _, v in rops], marker="s", label=name)
ax_ber.set_xlabel(axis)
ax_ber.set_ylabel("BER")
ax_ber.grid(True, which="both", alpha=0.3)
ax_ber.legend()
ax_rops.set_xlabel(axis)
ax_rops.set_ylabel("rops per symbol")
ax_rops.grid(True, which="both", alpha=0.3)
ax_rops.legend()
fig.tight_layout()
fig.savefig("curves.png", dpi=150)
print("wrote curves.png")
"""


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def csv_rows(points: list[SweepPoint]) -> list[str]:
    lines = [",".join(CSV_COLUMNS)]
    for p in points:
        values = (
            p.detector,
            p.n_users,
            p.n_rx,
            p.modulation_order,
            p.neighborhood_distance,
            p.samples_per_update,
            p.mixing_ratio,
            p.axis,
            p.axis_value,
            p.trials,
            p.total_bits,
            p.bit_errors,
            p.ber,
            p.ber_ci95,
            p.eni,
            p.rops_per_symbol,
            p.chi,
            p.seed,
        )
        lines.append(",".join(_format(v) for v in values))
    return lines


def write_results_csv(points: list[SweepPoint], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(csv_rows(points)) + "\n")


def write_plot_script(csv_path: Path, script_path: Path) -> None:
    with open(script_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_PLOT_SCRIPT.format(csv_name=csv_path.name))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsmgs",
        description="Monte-Carlo benchmarks for mixed Gibbs sampling MIMO detectors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    simulate = commands.add_parser("simulate", help="run the sweep described by a config file")
    simulate.add_argument("config", help="path to the INI run configuration")
    simulate.add_argument("--seed", type=int, help="override the master seed")
    simulate.add_argument("--threads", type=int, default=1, help="parallel trial workers")
    simulate.add_argument("--out", default="results", help="output directory (default: results)")
    simulate.add_argument("--plot", action="store_true", help="also emit a plot script")
    commands.add_parser("presets", help="list the named detector presets")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        print(describe_presets())
        return 0

    try:
        spec = parse_config(args.config)
        if args.seed is not None:
            spec = replace(spec, master_seed=args.seed)
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    except ConfigError as exc:
        print(f"dsmgs: config error: {exc}", file=sys.stderr)
        return 2

    points = sweep(spec, n_jobs=args.threads)

    out_dir = Path(args.out)
    csv_path = out_dir / "results.csv"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_results_csv(points, csv_path)
        if args.plot:
            write_plot_script(csv_path, out_dir / "plot_results.py")
    except OSError as exc:
        print(f"dsmgs: cannot write results: {exc}", file=sys.stderr)
        return 3

    for point in points:
        if point.bit_errors < spec.min_bit_errors:
            print(
                f"dsmgs: warning: point ({point.detector}, {point.axis}={_format(point.axis_value)}) "
                f"is under-resolved: {point.bit_errors} bit errors after {point.trials} trials",
                file=sys.stderr,
            )
    print(f"wrote {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
