"""Command line interface.

Exit codes: 0 on success (and all-PASS reproduce runs), 1 on computation
failures or FAIL rows, 2 on usage or configuration errors.  Output files
are written to a temporary name and renamed into place, so a failed run
never leaves a partial file.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .branches import CrossingClass, classify_both, eigen_sweep, export_branches_csv, identify_zone
from .config import load_preset, parse_config
from .errors import CavmagError, ConfigError, NoSolution
from .model import FieldLinear, SystemConfig
from .spectra import export_csv, export_pgm, sweep_spectrum
from .transition import AxisSpec, ParamSelector, export_regime_csv, find_transition, regime_map

_REPRODUCE_ROWS = ("df", "gi", "jl", "mo")
_ROW_LABELS = {"df": "d-f", "gi": "g-i", "jl": "j-l", "mo": "m-o"}
_EXPECTED = {
    "table1": {
        "df": ("Attraction", "Repulsion"),
        "gi": ("Intermediate", "Repulsion"),
        "jl": ("Intermediate", "Intermediate"),
        "mo": ("Repulsion", "Attraction"),
    },
    "table2": {
        "df": ("Attraction", "Repulsion"),
        "gi": ("Intermediate", "Repulsion"),
        "jl": ("Intermediate", "Repulsion"),
        "mo": ("Repulsion", "Attraction"),
    },
}
_TABLE_PRESET = {"table1": "three_mode_table1_row_", "table2": "four_mode_table2_row_"}
_TABLE_ZONE = {"table1": ("M", "P2"), "table2": ("M", "P3")}


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _float_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected FLOOR,CEIL: {text!r}")
    try:
        floor, ceil = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers: {text!r}") from None
    if not floor < ceil:
        raise argparse.ArgumentTypeError("FLOOR must be below CEIL")
    return floor, ceil


def _mode_pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected two mode names A,B: {text!r}")
    return parts[0], parts[1]


def _axis(text: str) -> AxisSpec:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(
            f"expected A,B,COMPONENT,START,STOP,POINTS: {text!r}")
    a, b, component = parts[0], parts[1], parts[2]
    try:
        start, stop = float(parts[3]), float(parts[4])
        points = int(parts[5])
        selector = ParamSelector(a=a, b=b, component=component)
        return AxisSpec(selector=selector, start=start, stop=stop, points=points)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavmag",
        description="Transmission spectra and mode-crossing analysis of "
                    "driven coupled-mode systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, out_required: bool) -> None:
        p.add_argument("--config", required=True,
                       help="JSON system description (falls back to a bundled "
                            "preset matching the file name)")
        if out_required:
            p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--threads", type=_positive_int, default=1,
                       help="worker threads for sweeps")
        p.add_argument("--quiet", action="store_true",
                       help="suppress informational messages")

    p = sub.add_parser("spectrum", help="sweep S21 and write it as CSV")
    common(p, out_required=True)
    p.add_argument("--pgm", type=_float_pair, metavar="FLOOR,CEIL",
                   help="also render |1+S21| in dB to a PGM image beside --out")

    p = sub.add_parser("eigen", help="track eigenvalue branches and write CSV")
    common(p, out_required=True)

    p = sub.add_parser("classify", help="classify every mode crossing")
    common(p, out_required=False)

    p = sub.add_parser("boundary", help="bisect one coupling for the regime boundary")
    common(p, out_required=False)
    p.add_argument("--pair", type=_mode_pair, required=True, metavar="A,B",
                   help="mode pair whose coupling is varied")
    p.add_argument("--component", choices=("j", "gamma"), required=True)
    p.add_argument("--lo", type=float, required=True, help="bracket lower end")
    p.add_argument("--hi", type=float, required=True, help="bracket upper end")
    p.add_argument("--zone", type=_mode_pair, required=True, metavar="T,S",
                   help="crossing zone to monitor (field-tuned, static)")

    p = sub.add_parser("map", help="scan two couplings and write a regime CSV")
    common(p, out_required=True)
    p.add_argument("--axis1", type=_axis, required=True,
                   metavar="A,B,COMPONENT,START,STOP,POINTS")
    p.add_argument("--axis2", type=_axis, required=True,
                   metavar="A,B,COMPONENT,START,STOP,POINTS")
    p.add_argument("--zone", type=_mode_pair, required=True, metavar="T,S")

    p = sub.add_parser("reproduce",
                       help="rerun a bundled reproduction table and check labels")
    p.add_argument("table", choices=("table1", "table2"))
    p.add_argument("--quiet", action="store_true")

    return parser


def _load_config(path: str) -> SystemConfig:
    p = Path(path)
    if p.is_file():
        return parse_config(p.read_text(encoding="utf-8"))
    try:
        return load_preset(p.name)
    except ConfigError:
        raise ConfigError(
            f"config file not found: {path} (and no bundled preset is "
            f"named {p.name!r})"
        ) from None


def _atomic_write(path: str, write) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        write(tmp)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def _info(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _cmd_spectrum(args) -> int:
    config = _load_config(args.config)
    grid = sweep_spectrum(config, threads=args.threads)
    _atomic_write(args.out, lambda tmp: export_csv(grid, tmp))
    _info(args, f"wrote {args.out}")
    if args.pgm is not None:
        floor, ceil = args.pgm
        pgm_path = str(Path(args.out).with_suffix(".pgm"))
        _atomic_write(pgm_path,
                      lambda tmp: export_pgm(grid, tmp, floor_db=floor, ceil_db=ceil))
        _info(args, f"wrote {pgm_path}")
    return 0


def _cmd_eigen(args) -> int:
    config = _load_config(args.config)
    branchset = eigen_sweep(config)
    _atomic_write(args.out, lambda tmp: export_branches_csv(branchset, tmp))
    _info(args, f"wrote {args.out}")
    return 0


def _crossing_zones(config: SystemConfig, on_skip=None):
    zones = []
    for tuned in config.modes:
        if not isinstance(tuned.frequency, FieldLinear):
            continue
        for static in config.modes:
            if isinstance(static.frequency, FieldLinear):
                continue
            try:
                zones.append(identify_zone(config, (tuned.name, static.name)))
            except NoSolution as exc:
                if on_skip is not None:
                    on_skip(str(exc))
    return zones


def _cmd_classify(args) -> int:
    config = _load_config(args.config)
    branchset = eigen_sweep(config)
    zones = _crossing_zones(config, on_skip=lambda msg: _info(args, f"skipped: {msg}"))
    if not zones:
        _info(args, "no crossings inside the sweep range")
        return 0
    for zone in zones:
        report = classify_both(config, branchset, zone)
        print(f"{zone.pair[0]}-{zone.pair[1]}: "
              f"real={report.real_class.value} imag={report.imag_class.value}")
    return 0


def _cmd_boundary(args) -> int:
    config = _load_config(args.config)
    zone = identify_zone(config, args.zone)
    selector = ParamSelector(a=args.pair[0], b=args.pair[1], component=args.component)
    value = find_transition(config, selector, args.lo, args.hi, zone)
    print(f"critical {args.component}({selector.a},{selector.b}) = {value:.6f}")
    return 0


def _cmd_map(args) -> int:
    config = _load_config(args.config)
    zone = identify_zone(config, args.zone)
    rmap = regime_map(config, args.axis1, args.axis2, zone)
    _atomic_write(args.out, lambda tmp: export_regime_csv(rmap, tmp))
    _info(args, f"wrote {args.out}")
    return 0


def _cmd_reproduce(args) -> int:
    prefix = _TABLE_PRESET[args.table]
    zone_pair = _TABLE_ZONE[args.table]
    expected = _EXPECTED[args.table]
    all_ok = True
    for row in _REPRODUCE_ROWS:
        config = load_preset(f"{prefix}{row}")
        zone = identify_zone(config, zone_pair)
        report = classify_both(config, eigen_sweep(config), zone)
        got = (report.real_class.value, report.imag_class.value)
        want = expected[row]
        ok = got == want
        all_ok = all_ok and ok
        verdict = "PASS" if ok else "FAIL"
        print(f"row {_ROW_LABELS[row]} {zone_pair[0]}-{zone_pair[1]}: "
              f"real={got[0]} imag={got[1]} "
              f"(expected real={want[0]} imag={want[1]}) {verdict}")
    return 0 if all_ok else 1


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "eigen": _cmd_eigen,
    "classify": _cmd_classify,
    "boundary": _cmd_boundary,
    "map": _cmd_map,
    "reproduce": _cmd_reproduce,
}


def run_cli(argv=None) -> int:
    """Parse arguments, run one subcommand, and return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and usage errors
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CavmagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
