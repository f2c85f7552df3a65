"""
Command-line front end.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 config parse
error, 3 numerical failure (including unstable operating points).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import warnings
from pathlib import Path

from .entanglement import eof_pair, log_negativity, tripartite_optimize, tripartite_witness
from .errors import NumericalError, UnphysicalCovarianceError, UnstableOperatingPoint
from .figures import FIGURES, reproduce_figure
from .moments import output_covariance, reduce_pair
from .scattering import transmission
from .stability import approx_condition, char_coeffs, is_stable_eig, is_stable_rh
from .sweep import (
    AXES,
    ConfigParseError,
    ConfigValidationError,
    PAIR_NAMES,
    RunConfig,
    SweepSpec,
    expand_observables,
    format_config,
    parse_number,
    run_sweep,
    to_csv,
    to_json,
    validate_config,
)

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_NUMERICAL = 0, 1, 2, 3

log = logging.getLogger("oement")


class UsageError(ValueError):
    pass


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the verb without clobbering
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="key = value config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="witness seed (overrides config)")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output file (directory for reproduce-fig)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS, help="output format")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="oement",
        description="Entanglement and scattering of a three-cavity optoelectromechanical interface. "
        "Rates are in MHz (divided by 2 pi).",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("transmission", parents=[common], help="transmission matrix T(omega)")
    p.add_argument("--omega", type=_number, help="probe frequency (default: config omega)")

    p = sub.add_parser("eof", parents=[common], help="entanglement of formation per output pair")
    p.add_argument("--omega", type=_number)
    p.add_argument("--pair", choices=PAIR_NAMES, action="append", help="repeatable; default all pairs")

    p = sub.add_parser("witness", parents=[common], help="sampled tripartite witness Delta E")
    p.add_argument("--omega", type=_number)
    p.add_argument("--samples", type=int, help="number of weight samples (default: config samples)")
    p.add_argument("--spread", choices=("std", "variance"), default="std")
    p.add_argument("--optimize", action="store_true", help="refine the best sample by local search")

    sub.add_parser("stability", parents=[common], help="Routh-Hurwitz and eigenvalue verdicts")

    p = sub.add_parser("sweep", parents=[common], help="one-dimensional parameter sweep")
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--start", type=_number, required=True)
    p.add_argument("--stop", type=_number, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument(
        "--observables",
        default="eof",
        help="comma list: T, T31, eof, eof_ac, eof_ad, eof_cd, witness (default: eof)",
    )
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("reproduce-fig", parents=[common], help="regenerate the data of figure N")
    p.add_argument("figure", type=int, choices=FIGURES)
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int, default=1)

    sub.add_parser("show-config", parents=[common], help="print the effective configuration")
    return parser


def load_config(args) -> RunConfig:
    text = args.config.read_text() if getattr(args, "config", None) else ""
    cfg, notices = validate_config(text)
    for note in notices:
        print(f"notice: {note}", file=sys.stderr)
    changes = {}
    if getattr(args, "seed", None) is not None:
        if not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be in [0, 2**64)")
        changes["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        if args.samples < 1:
            raise UsageError("--samples must be >= 1")
        changes["samples"] = args.samples
    if changes:
        cfg = RunConfig(**{**cfg.__dict__, **changes})
    return cfg


def _omega(args, cfg) -> float:
    omega = args.omega if getattr(args, "omega", None) is not None else cfg.omega
    if not math.isfinite(omega):
        raise UsageError("--omega must be finite")
    return omega


def _emit(records, args, meta=None) -> None:
    fmt = getattr(args, "format", "csv")
    text = to_csv(records) if fmt == "csv" else to_json(records, meta)
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_transmission(args, cfg):
    omega = _omega(args, cfg)
    t = transmission(cfg.params, omega).matrix
    records = [
        {"i": i + 1, "j": j + 1, "re": t[i, j].real, "im": t[i, j].imag, "abs_sq": abs(t[i, j]) ** 2}
        for i in range(4)
        for j in range(4)
    ]
    _emit(records, args, {"omega": omega})


def cmd_eof(args, cfg):
    omega = _omega(args, cfg)
    cov = output_covariance(cfg.params, omega)
    records = []
    for pair in args.pair or PAIR_NAMES:
        res = eof_pair(cfg.params, omega, pair)
        records.append(
            {"pair": pair, "r0": res.r0, "e_f": res.e_f, "log_neg": log_negativity(reduce_pair(cov, pair))}
        )
    _emit(records, args, {"omega": omega})


def cmd_witness(args, cfg):
    omega = _omega(args, cfg)
    cov = output_covariance(cfg.params, omega)
    w = tripartite_witness(cov, cfg.samples, cfg.seed, spread=args.spread)
    row = {
        "samples": w.n_samples,
        "seed": w.seed,
        "dE_min": w.min_delta_e,
        "dE_max": w.max_delta_e,
        "dE_frac_neg": w.fraction_negative,
        "dE_witnessed": w.witnessed,
        "dE_all_neg": w.all_negative,
    }
    row.update({f"h{k + 1}": x for k, x in enumerate(w.best_weights.h)})
    row.update({f"g{k + 1}": x for k, x in enumerate(w.best_weights.g)})
    if args.optimize:
        _, best = tripartite_optimize(cov, spread=args.spread, start=w.best_weights)
        row["dE_optimized"] = best
    _emit([row], args, {"omega": omega, "spread": args.spread})


def cmd_stability(args, cfg):
    p = cfg.params
    rh, eig, c = is_stable_rh(p), is_stable_eig(p), char_coeffs(p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        approx = approx_condition(p)
    for w in caught:
        print(f"notice: {w.message}", file=sys.stderr)
    row = {
        "stable_rh": rh.stable,
        "failing": rh.failing or "",
        "stable_eig": eig.stable,
        "max_re_lambda": eig.max_real,
        "stable_approx": approx.stable,
        "s3": c.s3,
        "s2": c.s2,
        "s1": c.s1,
        "s0": c.s0,
        "s1_imag": c.s1_imag,
        "s0_imag": c.s0_imag,
    }
    _emit([row], args)


def cmd_sweep(args, cfg):
    try:
        spec = SweepSpec(args.axis, args.start, args.stop, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    observables = [o for o in args.observables.split(",") if o.strip()]
    try:
        expand_observables(observables)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    records = run_sweep(cfg, spec, observables, workers=args.workers)
    meta = {"config": format_config(cfg), "sweep": spec.__dict__}
    _emit(records, args, meta)


def cmd_reproduce(args, cfg):
    out_dir = getattr(args, "out", None) or Path(".")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    paths = reproduce_figure(args.figure, out_dir, seed=cfg.seed, samples=cfg.samples, workers=args.workers)
    for path in paths:
        print(path)


def cmd_show_config(args, cfg):
    text = format_config(cfg)
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


COMMANDS = {
    "transmission": cmd_transmission,
    "eof": cmd_eof,
    "witness": cmd_witness,
    "stability": cmd_stability,
    "sweep": cmd_sweep,
    "reproduce-fig": cmd_reproduce,
    "show-config": cmd_show_config,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    try:
        cfg = load_config(args)
        COMMANDS[args.verb](args, cfg)
    except ConfigParseError as exc:
        for err in exc.errors:
            print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigValidationError as exc:
        for err in exc.errors:
            print(f"invalid config: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (UnstableOperatingPoint, UnphysicalCovarianceError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
