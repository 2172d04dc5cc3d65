"""Report schemas shared by the CLI commands.

Every measured quantity is wrapped as {"value": ..., "rigor": tag} with
tag in {"exact", "rigorous-bound", "estimate"}.  Exact rationals are
serialized as "p/q" strings with a non-authoritative decimal rendering
alongside.  Reports are plain dicts built in a fixed key order, so equal
inputs and flags produce byte-identical output.
"""

from __future__ import annotations

import csv
import io

from .entropy import EntropyBracket, RateSequences
from .networks import BoundReport
from .periods import PeriodSet, SharkovskyDiagnostic
from .rationals import format_rational

DECIMAL_NOTE = "decimal fields are non-authoritative renderings of exact rationals"


def tag(value, rigor: str) -> dict:
    return {"value": value, "rigor": rigor}


def tag_rational(q, rigor: str) -> dict:
    return {"value": format_rational(q), "decimal": float(q), "rigor": rigor}


def bracket_to_dict(bracket: EntropyBracket) -> dict:
    rows = []
    for r in bracket.evidence:
        rows.append(
            {
                "k": r.k,
                "laps": tag(r.laps, "exact"),
                "upper_bits": tag(r.upper_bits, "rigorous-bound"),
                "horseshoe_s": None if r.horseshoe_s is None else tag(r.horseshoe_s, "exact"),
                "lower_bits": None if r.lower_bits is None else tag(r.lower_bits, "rigorous-bound"),
            }
        )
    return {
        "lower_bits": tag(bracket.lower_bits, "rigorous-bound"),
        "upper_bits": tag(bracket.upper_bits, "rigorous-bound"),
        "uniform_slope_bits": (
            None
            if bracket.constant_slope_bits is None
            else tag(bracket.constant_slope_bits, "exact")
        ),
        "resource_limited": bracket.limited,
        "evidence": rows,
    }


def rates_to_dict(rates: RateSequences) -> dict:
    rows = []
    for r in rates.rows:
        rows.append(
            {
                "k": r.k,
                "crossings": tag(r.crossings, "exact"),
                "crossing_rate_bits": (
                    None if r.crossing_rate_bits is None else tag(r.crossing_rate_bits, "exact")
                ),
                "variation": tag_rational(r.variation, "exact"),
                "variation_rate_bits": (
                    None if r.variation_rate_bits is None else tag(r.variation_rate_bits, "exact")
                ),
                "lipschitz": tag_rational(r.lipschitz, "exact"),
                "lipschitz_rate_bits": (
                    None if r.lipschitz_rate_bits is None else tag(r.lipschitz_rate_bits, "exact")
                ),
            }
        )
    return {"resource_limited": rates.limited, "rows": rows}


def max_crossing_to_dict(count, wx, wy) -> dict:
    return {
        "count": tag(count, "exact"),
        "witness_x": None if wx is None else tag_rational(wx, "exact"),
        "witness_y": None if wy is None else tag_rational(wy, "exact"),
    }


def periods_to_dict(ps: PeriodSet, diag: SharkovskyDiagnostic, witness) -> dict:
    body = ps.to_json_dict()
    body["rigor"] = "exact"
    body["sharkovsky_consistent"] = diag.consistent
    body["sharkovsky_violations"] = [list(v) for v in diag.violations]
    body["positive_entropy_witness"] = None if witness is None else tag(witness, "exact")
    return body


def bound_report_to_dict(rep: BoundReport) -> dict:
    return {
        "shape": {"depth": rep.depth, "width": rep.width},
        "profile": {"t": rep.profile.t, "d1": rep.profile.d1, "d2": rep.profile.d2},
        "entropy_upper_bits": tag(rep.entropy_upper_bits, "rigorous-bound"),
        "lap_bound": tag(rep.lap_bound, "rigorous-bound"),
        "measured_laps": tag(rep.measured_laps, "exact"),
        "measured_lower_bits": (
            None if rep.bracket is None else tag(rep.bracket.lower_bits, "rigorous-bound")
        ),
        "measured_upper_bits": (
            None if rep.bracket is None else tag(rep.bracket.upper_bits, "rigorous-bound")
        ),
        "lap_bound_satisfied": rep.lap_bound_satisfied,
        "entropy_bound_satisfied": rep.entropy_bound_satisfied,
        "bound_satisfied": rep.satisfied,
        "evidence": [] if rep.bracket is None else bracket_to_dict(rep.bracket)["evidence"],
    }


def evidence_csv(bracket: EntropyBracket) -> str:
    """Per-k evidence table: k,laps,upper_bits,horseshoe_s,lower_bits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "laps", "upper_bits", "horseshoe_s", "lower_bits"])
    for r in bracket.evidence:
        writer.writerow(
            [
                r.k,
                r.laps,
                repr(r.upper_bits),
                "" if r.horseshoe_s is None else r.horseshoe_s,
                "" if r.lower_bits is None else repr(r.lower_bits),
            ]
        )
    return buf.getvalue()


def tent_sweep_csv(rows) -> str:
    """Sweep table: alpha,lower_bits,upper_bits with exact alpha strings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "lower_bits", "upper_bits"])
    for alpha, lower, upper in rows:
        writer.writerow([format_rational(alpha), repr(lower), repr(upper)])
    return buf.getvalue()
