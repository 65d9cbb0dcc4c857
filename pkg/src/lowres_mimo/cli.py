"""Command-line entry point: ``lowres-mimo {sweep,figure,validate}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .errors import ConfigurationError, NumericalRankError
from .harness.config import SWEEP_AXES, ExperimentSpec, SystemConfig, load_config
from .harness.figures import FIGURES, reproduce_figure
from .harness.montecarlo import run_monte_carlo
from .harness.validation import SUITES, validate

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION = 0, 2, 3

# CLI flag -> SystemConfig field
_SCALAR_FLAGS = {
    "antennas": "antennas",
    "users": "users",
    "power_db": "power_db",
    "bits": "bits",
    "kfactor_db": "kfactor_db",
    "pilot_len": "pilot_len",
    "trials": "trials",
    "seed": "seed",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_system_flags(p):
    g = p.add_argument_group("scenario")
    g.add_argument("--antennas", type=int, help="BS antennas M")
    g.add_argument("--users", type=int, help="single-antenna users K")
    g.add_argument("--power-db", type=float, help="P_u / sigma2 in dB")
    g.add_argument("--bits", type=int, help="ADC resolution")
    g.add_argument("--kfactor-db", type=float, help="Rician K-factor of every user, dB")
    g.add_argument("--pilot-len", type=int, help="pilot length L (default K)")
    g.add_argument("--trials", type=int, help="Monte-Carlo trials per sweep point")
    g.add_argument("--seed", type=int, help="master seed")
    g.add_argument("--receiver", choices=("mrc", "zf", "both"), help="receiver(s) to evaluate")
    g.add_argument("--csi", choices=("perfect", "imperfect", "both"), help="CSI mode(s)")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    g.add_argument("--freeze-aoa", action="store_true", help="draw AoAs once instead of per trial")
    g.add_argument("--estimator", choices=("shortcut", "explicit"), help="imperfect-CSI channel estimator")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lowres-mimo", description="Uplink massive MIMO with low-resolution ADCs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="run a one-dimensional Monte-Carlo sweep")
    s.add_argument("--axis", choices=SWEEP_AXES)
    s.add_argument("--values", help="comma-separated sweep values")
    s.add_argument("--out", help="CSV output path (default stdout)")
    _add_system_flags(s)

    f = sub.add_parser("figure", help="reproduce a canned figure sweep")
    f.add_argument("name", help=f"one of {', '.join(FIGURES)}")
    f.add_argument("--values", help="override the sweep grid")
    f.add_argument("--out", default=".", help="output directory (default .)")
    _add_system_flags(f)

    v = sub.add_parser("validate", help="run an oracle/property suite")
    v.add_argument("suite", help=f"one of {', '.join(SUITES)}")
    v.add_argument("--seed", type=int, default=0)
    return p


def _parse_values(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigurationError(f"cannot parse sweep values {text!r}") from None


def _system(args, base: SystemConfig) -> SystemConfig:
    changes = {field: getattr(args, flag) for flag, field in _SCALAR_FLAGS.items()
               if getattr(args, flag) is not None}
    if args.receiver:
        changes["receivers"] = ("mrc", "zf") if args.receiver == "both" else (args.receiver,)
    if args.csi:
        changes["csi"] = ("perfect", "imperfect") if args.csi == "both" else (args.csi,)
    if args.freeze_aoa:
        changes["freeze_aoa"] = True
    if args.estimator:
        changes["estimator"] = args.estimator
    try:
        return replace(base, **changes)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    base = _system(args, cfg.get("system", SystemConfig()))
    axis = args.axis or cfg.get("sweep_axis")
    values = _parse_values(args.values) if args.values else cfg.get("sweep_values")
    if axis is None or values is None:
        raise ConfigurationError("sweep needs --axis and --values (or both in --config)")
    spec = ExperimentSpec(axis, tuple(values), base, cfg.get("profile"), cfg.get("power_model"))
    table = run_monte_carlo(spec, workers=args.workers)
    if args.out:
        table.write_csv(args.out)
    else:
        sys.stdout.write(table.to_csv())
    return EXIT_OK


def _cmd_figure(args) -> int:
    if args.name not in FIGURES:
        raise ConfigurationError(f"unknown figure {args.name!r}; expected one of {', '.join(FIGURES)}")
    cfg = load_config(args.config) if args.config else {}
    overrides = {}
    if "system" in cfg:
        overrides = {k: v for k, v in vars(cfg["system"]).items() if v != getattr(SystemConfig(), k)}
    probe = _system(args, SystemConfig())
    overrides.update({k: v for k, v in vars(probe).items() if v != getattr(SystemConfig(), k)})
    values = _parse_values(args.values) if args.values else None
    written = reproduce_figure(args.name, overrides, args.out, args.workers,
                               cfg.get("profile"), cfg.get("power_model"), values)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_validate(args) -> int:
    report = validate(args.suite, args.seed)
    for line in report.lines():
        print(line)
    print(f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "figure": _cmd_figure, "validate": _cmd_validate}[args.command]
    try:
        return handler(args)
    except (ConfigurationError, NumericalRankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
