"""Command-line driver: parameter sweeps, verification runs, single points.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .averaging import QuadratureSpec
from .errors import HybridTeleError
from .states import QubitCoeffs
from .sweep import PRESETS, SweepConfig, preset_config, run_sweep, write_csv
from .teleport import (Direction, TeleportResult, fidelity_closed_form, success_prob,
                       teleport_c2s, teleport_s2c)
from .verify import run_verification


class _Parser(argparse.ArgumentParser):
    """argparse with exit code 1 on bad usage (2 is reserved for verification)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated float list, got {text!r}") from exc


def _direction_list(text: str) -> list[Direction]:
    try:
        return [Direction(x.strip().lower()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"directions must be among {[d.value for d in Direction]}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="hybridtele",
                     description="Hybrid-channel teleportation sweeps and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate a (direction, alpha, r) grid to CSV")
    sweep.add_argument("--preset", choices=sorted(PRESETS), help="figure preset grid")
    sweep.add_argument("--direction", type=_direction_list, default=None,
                       help="comma list, e.g. s2c,c2s")
    sweep.add_argument("--alpha", type=_float_list, default=None, help="comma list of amplitudes")
    sweep.add_argument("--r-min", type=float, default=0.0)
    sweep.add_argument("--r-max", type=float, default=0.999)
    sweep.add_argument("--r-steps", type=int, default=201)
    sweep.add_argument("--backend", choices=("analytic", "numeric", "both"), default=None)
    sweep.add_argument("--n-theta", type=int, default=None)
    sweep.add_argument("--n-phi", type=int, default=None)
    sweep.add_argument("--out", required=True, help="output CSV path")

    verify = sub.add_parser("verify", help="run every cross-check and report")
    verify.add_argument("--alpha", type=_float_list, default=[0.5, 1.0, 2.0],
                        help="amplitudes for the numeric-oracle legs (each <= 3)")
    verify.add_argument("--r", type=_float_list, default=[0.0, 0.3, 0.6, 0.9])
    verify.add_argument("--out", default=None, help="optional JSON report path")

    point = sub.add_parser("point", help="single teleportation point as JSON")
    point.add_argument("--direction", required=True, type=str)
    point.add_argument("--theta", required=True, type=float)
    point.add_argument("--phi", required=True, type=float)
    point.add_argument("--alpha", required=True, type=float)
    point.add_argument("--r", required=True, type=float)
    point.add_argument("--backend", choices=("analytic", "numeric"), default="analytic")

    return parser


def _quad_from_args(args) -> QuadratureSpec | None:
    if args.n_theta is None and args.n_phi is None:
        return None
    base = QuadratureSpec()
    return QuadratureSpec(n_theta=args.n_theta or base.n_theta,
                          n_phi=args.n_phi or base.n_phi)


def _cmd_sweep(args) -> int:
    quad = _quad_from_args(args)
    if args.preset:
        config = preset_config(args.preset, quad=quad, backend=args.backend)
    else:
        if not args.direction or not args.alpha:
            raise ValueError("either --preset or both --direction and --alpha are required")
        config = SweepConfig(tuple(args.direction), tuple(args.alpha),
                             r_min=args.r_min, r_max=args.r_max, r_steps=args.r_steps,
                             quad=quad or QuadratureSpec(),
                             backend=args.backend or "analytic")
    records = run_sweep(config)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    if any(a > 3.0 for a in args.alpha):
        raise ValueError("verification numeric legs require alpha <= 3")
    if any(not 0.0 <= r < 1.0 for r in args.r):
        raise ValueError("verification r values must lie in [0, 1)")
    results = run_verification(tuple(args.alpha), tuple(args.r))
    for res in results:
        print(res.line())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([res.to_dict() for res in results], fh, indent=2)
            fh.write("\n")
    failures = [res for res in results if res.verdict == "FAIL"]
    flags = [res for res in results if res.verdict == "FLAG"]
    print(f"{len(results) - len(failures) - len(flags)} passed, "
          f"{len(flags)} flagged, {len(failures)} failed")
    return 2 if failures else 0


def _comparison_point(direction: Direction, q: QubitCoeffs, alpha: float, r: float) -> TeleportResult:
    variants = {"fidelity_printed": fidelity_closed_form(direction, q, alpha, r, "printed")}
    if direction == Direction.C2P:
        variants["fidelity_corrected"] = fidelity_closed_form(direction, q, alpha, r, "corrected")
        headline = variants["fidelity_corrected"]
    else:
        headline = variants["fidelity_printed"]
    return TeleportResult(direction, headline, success_prob(direction, alpha, r),
                          (), "analytic", variants)


def _cmd_point(args) -> int:
    direction = Direction(args.direction.strip().lower())
    q = QubitCoeffs.from_bloch(args.theta, args.phi)
    if direction == Direction.S2C:
        result = teleport_s2c(q, args.alpha, args.r, backend=args.backend)
    elif direction == Direction.C2S:
        result = teleport_c2s(q, args.alpha, args.r, backend=args.backend)
    else:
        if args.backend != "analytic":
            raise ValueError(f"{direction.value} points are closed-form only; use --backend analytic")
        result = _comparison_point(direction, q, args.alpha, args.r)
    payload = {
        "direction": result.direction.value,
        "theta": args.theta,
        "phi": args.phi,
        "alpha": args.alpha,
        "r": args.r,
        "fidelity": result.fidelity,
        "success_probability": result.success_probability,
        "backend": result.backend,
        "outcome_breakdown": [asdict(d) | {"correction": list(d.correction)}
                              for d in result.outcome_breakdown],
        "variants": result.variants,
    }
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"sweep": _cmd_sweep, "verify": _cmd_verify, "point": _cmd_point}
    try:
        return handlers[args.command](args)
    except (ValueError, HybridTeleError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
