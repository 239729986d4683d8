"""Command-line interface: ``secrecygain <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .codefile import enumerator_of, load_code, load_corpus, load_scheme
from .codes import (
    WeightEnumerator,
    distance_invariance_check,
    is_formally_self_dual,
    kissing_number,
)
from .convcode import scan_convolutional, scan_to_csv
from .exceptions import (
    CodeValidationError,
    ConstructionError,
    DomainError,
    EnumerationLimitError,
    NormalizationError,
    PreconditionError,
)
from .secrecy import (
    analyze,
    curve_to_csv,
    gleason_decompose,
    secrecy_curve,
    strong_secrecy_gain,
    sufficient_condition_check,
)
from .theta import theta_construction_a
from .wiretap import simulate_wiretap

USER_ERRORS = (
    CodeValidationError,
    ConstructionError,
    DomainError,
    EnumerationLimitError,
    NormalizationError,
    PreconditionError,
    FileNotFoundError,
    json.JSONDecodeError,
    KeyError,
    ValueError,
)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range_or_list(text: str) -> list[float]:
    """Parse ``start:stop:step`` (inclusive) or a comma-separated list."""
    if ":" in text:
        try:
            start, stop, step = (float(v) for v in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
        if step <= 0:
            raise argparse.ArgumentTypeError("step must be positive")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return _float_list(text)


def _load(path):
    code = load_code(path)
    return code, enumerator_of(code)


def cmd_analyze(args, out):
    code, W = _load(args.code)
    cert = is_formally_self_dual(W)
    if isinstance(code, WeightEnumerator):
        kissing, invariant = None, None
    else:
        kissing = kissing_number(code)
        invariant = distance_invariance_check(code)[0]
    report = {
        "name": getattr(code, "name", ""),
        "n": W.n,
        "M": W.size,
        "d": W.min_distance(),
        "kissing": kissing,
        "fsd": cert.is_fsd,
        "even": W.is_even(),
        "distance_invariant": invariant,
        "weight_enumerator": str(W),
    }
    out.write(json.dumps(report, indent=2) + "\n")


def cmd_secrecy(args, out):
    code, W = _load(args.code)
    report = json.loads(analyze(W, name=getattr(code, "name", "")).to_json())
    if args.gleason:
        report["gleason"] = [str(a) for a in gleason_decompose(W).coefficients]
    if args.conditions:
        verdict = sufficient_condition_check(gleason_decompose(W)) if W.is_even() else None
        report["conditions"] = None if verdict is None else {
            "applicable": verdict.applicable,
            "certified": verdict.certified,
            "minimum": None if verdict.minimum is None else str(verdict.minimum),
            "argmin": None if verdict.argmin is None else str(verdict.argmin),
        }
    out.write(json.dumps(report, indent=2) + "\n")
    if args.curve is not None:
        text = curve_to_csv(secrecy_curve(W, args.curve))
        if args.curve_out:
            with open(args.curve_out, "w") as fh:
                fh.write(text)
        else:
            out.write(text)


def cmd_table(args, out):
    entries = load_corpus(args.corpus)
    out.write(f"{'n':>3}  {'code':<32} {'xi':>8} {'expected':>9} {'|delta|':>9}\n")
    for e in entries:
        xi = float(strong_secrecy_gain(e.weight_enumerator).xi)
        expected = e.expected.get("xi")
        if expected is None:
            exp_s, delta_s = "-", "-"
        else:
            exp_s, delta_s = f"{expected:.4f}", f"{abs(xi - expected):.5f}"
        out.write(f"{e.weight_enumerator.n:>3}  {e.name:<32} {xi:>8.4f} {exp_s:>9} {delta_s:>9}\n")


def cmd_scan(args, out):
    entries = scan_convolutional(args.memory, args.length, ranking=args.rank)
    text = scan_to_csv(entries)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_simulate(args, out):
    scheme = load_scheme(args.scheme)
    for sigma in args.sigma:
        r = simulate_wiretap(scheme, sigma, args.trials, seed=args.seed)
        row = {"sigma_e": r.sigma_e, "bound": r.bound, "empirical": r.empirical_pce,
               "ci_low": r.ci_low, "ci_high": r.ci_high, "trials": r.trials}
        out.write(json.dumps(row) + "\n")


def cmd_theta(args, out):
    _, W = _load(args.code)
    if args.tau is not None:
        out.write(json.dumps({"tau": args.tau, "theta": str(theta_construction_a(W, tau=args.tau))}) + "\n")
        return
    series = theta_construction_a(W, order=args.order)
    if series.is_integral_exponents():
        out.write(json.dumps({"coefficients": [str(c) for c in series.integer_coefficients()]}) + "\n")
    else:
        out.write(json.dumps({"half_exponent_terms": series.to_json()}) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secrecygain", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="basic parameters of a code")
    p.add_argument("code")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("secrecy", help="secrecy report for a code")
    p.add_argument("code")
    p.add_argument("--curve", type=_range_or_list, metavar="DB",
                   help="tau values in dB, as start:stop:step or a comma list")
    p.add_argument("--curve-out", help="write the curve CSV here instead of stdout")
    p.add_argument("--gleason", action="store_true", help="print the h-expansion coefficients")
    p.add_argument("--conditions", action="store_true", help="run the exact positivity test")
    p.set_defaults(func=cmd_secrecy)

    p = sub.add_parser("table", help="secrecy gains of a corpus")
    p.add_argument("corpus", nargs="?", default=None, help="corpus JSON (default: bundled)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="scan tail-biting convolutional codes")
    p.add_argument("-m", "--memory", type=int, required=True)
    p.add_argument("-L", "--length", type=int, required=True)
    p.add_argument("--rank", choices=("gain", "score"), default="gain")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", help="Monte Carlo wiretap simulation")
    p.add_argument("scheme")
    p.add_argument("--sigma", type=_float_list, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("theta", help="theta series of the Construction A lattice")
    p.add_argument("code")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--order", type=int, help="number of half-integer steps kept")
    group.add_argument("--tau", type=float, help="evaluate at z = i*tau")
    p.set_defaults(func=cmd_theta)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    np.seterr(all="ignore")
    try:
        args.func(args, out)
    except USER_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
