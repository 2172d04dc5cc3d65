"""Command-line interface.

Subcommands: analyze, bound-check, width-cert, periods, export-plot.
Inputs are map JSON files, network JSON files, or catalog descriptors
(identity, tent:A, zigzag:M, staircase:N:M, logistic:B).  Exit codes:
0 ok, 2 parse error, 3 resource limit (partial report still emitted),
4 invalid flags, 5 bound violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import catalog
from .analysis import lap_count, max_crossing
from .entropy import entropy_bracket, rate_sequences
from .errors import (
    NoConvergence,
    NonPositiveEntropy,
    PwlentError,
    ResourceLimit,
)
from .networks import (
    GateProfile,
    bound_report,
    entropy_upper_bound_thm1,
    lap_bound_thm1,
    network_to_pwl,
    parse_network,
    width_lower_bound_thm2,
)
from .periods import minimal_periods, positive_entropy_witness, sharkovsky_consistency
from .pwl import DEFAULT_MAX_SEGMENTS, map_from_json
from .rationals import log2_rational, parse_rational
from .reports import (
    DECIMAL_NOTE,
    bound_report_to_dict,
    bracket_to_dict,
    evidence_csv,
    max_crossing_to_dict,
    periods_to_dict,
    rates_to_dict,
    tag,
    tent_sweep_csv,
)

DEFAULT_SWEEP_ALPHAS = ("1/2", "1", "5/4", "3/2", "7/4", "2")


class FlagsError(PwlentError, ValueError):
    """Bad flag values or flag combinations (exit code 4)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit(2); 2 means parse error here
        raise FlagsError(message)


def _parse_domain(text):
    try:
        lo_text, _, hi_text = text.partition(":")
        lo, hi = parse_rational(lo_text), parse_rational(hi_text)
    except PwlentError as exc:
        raise FlagsError(f"bad --domain {text!r}: {exc}") from exc
    if lo >= hi:
        raise FlagsError(f"bad --domain {text!r}: empty interval")
    return lo, hi


def _parse_profile(args) -> GateProfile:
    if args.profile is None:
        return GateProfile.relu()
    try:
        t, d1, d2 = (int(p) for p in args.profile.split(":"))
    except ValueError as exc:
        raise FlagsError(f"bad --profile {args.profile!r}: expected T:D1:D2") from exc
    if min(t, d1, d2) < 1:
        raise FlagsError("profile entries must be positive")
    return GateProfile(t, d1, d2)


def _resolve_input(text, domain):
    """Return (kind, object, descriptor); kind in {pwl, sampled, network}."""
    path = Path(text)
    if path.exists():
        data = json.loads(path.read_text())
        if isinstance(data, dict) and "layers" in data:
            net = parse_network(data)
            g = network_to_pwl(net, domain[0], domain[1], clamp_output=True)
            return "network", (net, g), text
        return "pwl", map_from_json(data), text
    obj = catalog.from_descriptor(text)
    if isinstance(obj, catalog.SampledMap):
        return "sampled", obj, text
    return "pwl", obj, text


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(report) -> str:
    return json.dumps(report, indent=2) + "\n"


def _analyze_sampled(smap, args):
    rows = []
    notices = []
    for k in range(1, args.kmax + 1):
        try:
            est = catalog.sampled_lap_count(smap, k)
        except NoConvergence as exc:
            notices.append(f"k={k}: {exc}")
            break
        rows.append(
            {
                "k": k,
                "laps": tag(est, "estimate"),
                "rate_bits": tag(log2_rational(est) / k if est > 0 else None, "estimate"),
            }
        )
    report = {
        "input": smap.descriptor,
        "kind": "sampled",
        "kmax": args.kmax,
        "method": "exact-rational grid sampling with refinement doubling",
        "lap_estimates": rows,
        "notices": notices,
    }
    return report, 0


def cmd_analyze(args) -> int:
    domain = _parse_domain(args.domain)
    kind, obj, descriptor = _resolve_input(args.input, domain)
    if kind == "sampled":
        if args.format == "csv":
            raise FlagsError("csv output applies to piecewise-linear inputs only")
        report, code = _analyze_sampled(obj, args)
        _write(_dump_json(report), args.out)
        return code
    net = None
    if kind == "network":
        net, f = obj
    else:
        f = obj
    timings = {}
    notices = []
    t0 = time.perf_counter()
    bracket = entropy_bracket(f, args.kmax, max_segments=args.max_segments)
    timings["entropy_bracket"] = time.perf_counter() - t0
    if args.format == "csv":
        _write(evidence_csv(bracket), args.out)
        return 3 if bracket.limited else 0
    rate_kmax = args.rate_kmax if args.rate_kmax is not None else min(args.kmax, 8)
    t0 = time.perf_counter()
    rates = rate_sequences(f, rate_kmax, max_segments=args.max_segments)
    timings["rate_sequences"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    crossing = max_crossing(f)
    timings["max_crossing"] = time.perf_counter() - t0
    report = {
        "input": descriptor,
        "kind": "pwl",
        "domain": [str(domain[0]), str(domain[1])],
        "kmax": args.kmax,
        "entropy": bracket_to_dict(bracket),
        "rates": rates_to_dict(rates),
        "max_crossing": max_crossing_to_dict(*crossing),
        "periods": None,
        "bounds": None,
        "notices": notices,
        "decimal_note": DECIMAL_NOTE,
    }
    if bracket.limited:
        notices.append(bracket.limit_note)
    if rates.limited:
        notices.append(f"rate sequences truncated by segment ceiling {args.max_segments}")
    limited = bracket.limited or rates.limited
    if args.periods is not None:
        try:
            ps = minimal_periods(f, args.periods, max_segments=args.max_segments)
            witness = positive_entropy_witness(f, args.periods, max_segments=args.max_segments)
            report["periods"] = periods_to_dict(ps, sharkovsky_consistency(ps), witness)
        except ResourceLimit as exc:
            notices.append(f"periods: {exc}")
            limited = True
    if net is not None:
        profile = net.profile()
        upper = entropy_upper_bound_thm1(net.depth, net.width, profile)
        lap_cap = lap_bound_thm1(net.depth, net.width, profile)
        laps = lap_count(f).count
        report["bounds"] = {
            "shape": {"depth": net.depth, "width": net.width},
            "profile": {"t": profile.t, "d1": profile.d1, "d2": profile.d2},
            "entropy_upper_bits": tag(upper, "rigorous-bound"),
            "lap_bound": tag(lap_cap, "rigorous-bound"),
            "measured_laps": tag(laps, "exact"),
            "lap_bound_satisfied": laps <= lap_cap,
            "entropy_bound_satisfied": bracket.lower_bits <= upper,
            "bound_satisfied": laps <= lap_cap and bracket.lower_bits <= upper,
        }
    if args.timings:
        report["timings_seconds"] = {
            name: tag(seconds, "estimate") for name, seconds in timings.items()
        }
    _write(_dump_json(report), args.out)
    return 3 if limited else 0


def cmd_bound_check(args) -> int:
    domain = _parse_domain(args.domain)
    kind, obj, descriptor = _resolve_input(args.network, domain)
    if kind != "network":
        raise FlagsError("bound-check expects a network JSON file")
    net, _g = obj
    rep = bound_report(net, domain[0], domain[1], args.kmax, max_segments=args.max_segments)
    report = {"input": descriptor, "kind": "bound-check"}
    report.update(bound_report_to_dict(rep))
    report["notices"] = [] if not rep.bracket.limited else [rep.bracket.limit_note]
    _write(_dump_json(report), args.out)
    if not rep.satisfied:
        return 5
    return 3 if rep.bracket.limited else 0


def cmd_width_cert(args) -> int:
    profile = _parse_profile(args)
    if args.layers < 1 or args.power < 1:
        raise FlagsError("--layers and --power must be >= 1")
    report = {
        "kind": "width-cert",
        "input": args.input,
        "layers": args.layers,
        "power": args.power,
        "profile": {"t": profile.t, "d1": profile.d1, "d2": profile.d2},
    }
    if args.h_bits is not None:
        if args.h_bits <= 0:
            raise NonPositiveEntropy("--h-bits must be positive")
        m = width_lower_bound_thm2(args.h_bits, args.layers, profile, args.power)
        report["h_bits"] = tag(args.h_bits, "exact")
        report["conservative_m_min"] = tag(m, "rigorous-bound")
        report["optimistic_m_min"] = tag(m, "rigorous-bound")
        _write(_dump_json(report), args.out)
        return 0
    if args.input is None:
        raise FlagsError("width-cert needs a target map or --h-bits")
    domain = _parse_domain(args.domain)
    kind, f, _descriptor = _resolve_input(args.input, domain)
    if kind == "network":
        f = f[1]
    elif kind == "sampled":
        raise FlagsError("width-cert needs a piecewise-linear target")
    bracket = entropy_bracket(f, args.kmax, max_segments=args.max_segments)
    if bracket.lower_bits <= 0:
        raise NonPositiveEntropy(
            "bracket lower bound is 0; supply --h-bits for a known-positive entropy"
        )
    conservative = width_lower_bound_thm2(
        bracket.lower_bits, args.layers, profile, args.power
    )
    optimistic = width_lower_bound_thm2(
        bracket.upper_bits, args.layers, profile, args.power
    )
    report["h_bits_lower"] = tag(bracket.lower_bits, "rigorous-bound")
    report["h_bits_upper"] = tag(bracket.upper_bits, "rigorous-bound")
    report["conservative_m_min"] = tag(conservative, "rigorous-bound")
    report["optimistic_m_min"] = tag(optimistic, "estimate")
    _write(_dump_json(report), args.out)
    return 3 if bracket.limited else 0


def cmd_periods(args) -> int:
    domain = _parse_domain(args.domain)
    kind, f, descriptor = _resolve_input(args.input, domain)
    if kind == "network":
        f = f[1]
    elif kind == "sampled":
        raise FlagsError("periods needs a piecewise-linear input")
    ps = minimal_periods(f, args.up_to, max_segments=args.max_segments)
    witness = positive_entropy_witness(f, args.up_to, max_segments=args.max_segments)
    report = {
        "input": descriptor,
        "kind": "periods",
        **periods_to_dict(ps, sharkovsky_consistency(ps), witness),
    }
    _write(_dump_json(report), args.out)
    return 0


def cmd_export_plot(args) -> int:
    if args.input == "tent-sweep":
        try:
            alphas = [parse_rational(a) for a in args.alphas.split(",")]
        except PwlentError as exc:
            raise FlagsError(f"bad --alphas: {exc}") from exc
        rows = []
        limited = False
        for alpha in alphas:
            bracket = entropy_bracket(
                catalog.tent(alpha), args.kmax, max_segments=args.max_segments
            )
            limited = limited or bracket.limited
            rows.append((alpha, bracket.lower_bits, bracket.upper_bits))
        _write(tent_sweep_csv(rows), args.out or "tent_entropy.csv")
        return 3 if limited else 0
    domain = _parse_domain(args.domain)
    kind, f, _descriptor = _resolve_input(args.input, domain)
    if kind == "network":
        f = f[1]
    elif kind == "sampled":
        raise FlagsError("export-plot needs a piecewise-linear input")
    bracket = entropy_bracket(f, args.kmax, max_segments=args.max_segments)
    if bracket.limited:
        print(bracket.limit_note, file=sys.stderr)
    _write(evidence_csv(bracket), args.out or "evidence.csv")
    return 3 if bracket.limited else 0


def _add_common(sub, kmax_default=8):
    sub.add_argument("--kmax", type=int, default=kmax_default,
                     help="iterate depth for entropy evidence")
    sub.add_argument("--max-segments", type=int, default=DEFAULT_MAX_SEGMENTS,
                     help="segment ceiling before truncating iteration")
    sub.add_argument("--domain", default="0:1",
                     help="interval LO:HI for network extraction (rationals)")
    sub.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwlent", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", parents=[], help="full entropy/rates/periods report")
    p.add_argument("input")
    _add_common(p)
    p.add_argument("--rate-kmax", type=int, default=None,
                   help="iterate depth for rate diagnostics (default min(kmax, 8))")
    p.add_argument("--periods", type=int, default=None, metavar="N",
                   help="include minimal periods up to N")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (breaks byte-stability)")
    p.set_defaults(func=cmd_analyze)

    p = subs.add_parser("bound-check", help="structure-parameter bound soundness check")
    p.add_argument("network")
    _add_common(p, kmax_default=4)
    p.set_defaults(func=cmd_bound_check)

    p = subs.add_parser("width-cert", help="minimal-width certificate from entropy")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--h-bits", type=float, default=None,
                   help="use this entropy instead of bracketing a target map")
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--power", type=int, default=1,
                   help="certificate applies to the k-th iterate of the target")
    p.add_argument("--profile", default=None, help="gate profile T:D1:D2 (default relu)")
    _add_common(p)
    p.set_defaults(func=cmd_width_cert)

    p = subs.add_parser("periods", help="exact minimal-period inventory")
    p.add_argument("input")
    p.add_argument("--up-to", type=int, default=6)
    _add_common(p)
    p.set_defaults(func=cmd_periods)

    p = subs.add_parser("export-plot", help="CSV evidence export (or tent-sweep)")
    p.add_argument("input", help="map/network/catalog input, or 'tent-sweep'")
    _add_common(p, kmax_default=12)
    p.add_argument("--alphas", default=",".join(DEFAULT_SWEEP_ALPHAS),
                   help="comma-separated tent slopes for tent-sweep")
    p.set_defaults(func=cmd_export_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (FlagsError, NonPositiveEntropy) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (PwlentError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
