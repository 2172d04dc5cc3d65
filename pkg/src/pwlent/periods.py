"""Exact periodic-orbit inventory and period-ordering utilities.

Fixed points of f^n are solved segment by segment (each affine piece has
at most one, or is a whole interval of them when it lies on the
diagonal).  Minimal periods are confirmed by exact orbit evaluation, so
every reported cycle re-verifies with no tolerance.  Intervals of
periodic points are reported as flags, never enumerated, and points
inside them are excluded from minimal-period claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotSelfMap
from .pwl import PwlMap, iterates
from .rationals import format_rational


@dataclass(frozen=True)
class PeriodicPoints:
    """Fixed-point data of one iterate: isolated points and flat continua."""

    points: tuple
    continua: tuple  # (lo, hi) intervals of fixed points


@dataclass(frozen=True)
class PeriodSet:
    """Minimal periods found up to a cutoff, with representative cycles."""

    up_to: int
    periods: frozenset
    cycles: dict  # n -> tuple of cycles, each a tuple of points
    continuum_flags: frozenset

    def to_json_dict(self):
        return {
            "up_to": self.up_to,
            "periods": sorted(self.periods),
            "cycles": {
                str(n): [[format_rational(x) for x in cycle] for cycle in cycles]
                for n, cycles in sorted(self.cycles.items())
            },
            "continuum_flags": sorted(self.continuum_flags),
        }


@dataclass(frozen=True)
class SharkovskyDiagnostic:
    consistent: bool
    violations: tuple  # (p, q): p was found, q precedes-required but missing


def _fixed_points_of(g: PwlMap) -> PeriodicPoints:
    points = set()
    continua = []
    for x0, x1, y0, y1 in g.segments():
        run, rise = x1 - x0, y1 - y0
        if rise == run:  # slope exactly 1
            if y0 == x0:
                continua.append((x0, x1))
            continue
        # y0 + (rise/run)(x - x0) = x  =>  x = (y0*run - rise*x0) / (run - rise)
        x = (y0 * run - rise * x0) / (run - rise)
        if x0 <= x <= x1:
            points.add(x)
    merged = []
    for lo, hi in sorted(continua):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return PeriodicPoints(points=tuple(sorted(points)), continua=tuple(merged))


def periodic_points(f: PwlMap, n: int, max_segments=None) -> PeriodicPoints:
    """Exact fixed points of f^n, plus flat fixed intervals of f^n."""
    if not f.self_map:
        raise NotSelfMap("periodic points require a self-map")
    if n < 1:
        raise ValueError(f"period must be >= 1, got {n}")
    g = f
    for k, g in iterates(f, n, max_segments=max_segments):
        pass
    return _fixed_points_of(g)


def _in_continuum(x, continua) -> bool:
    return any(lo <= x <= hi for lo, hi in continua)


def minimal_periods(f: PwlMap, up_to: int, max_segments=None) -> PeriodSet:
    """Minimal-period inventory for all n <= up_to.

    A point has minimal period n when f^n fixes it and no smaller iterate
    does; the orbit check runs by repeated exact evaluation.  Period 1 is
    recorded when only a fixed continuum exists (its points are genuinely
    fixed); for n >= 2 continuum points are flagged, not claimed.
    """
    if not f.self_map:
        raise NotSelfMap("period inventory requires a self-map")
    periods = set()
    cycles = {}
    flags = set()
    for n, g in iterates(f, up_to, max_segments=max_segments):
        fixed = _fixed_points_of(g)
        if fixed.continua:
            flags.add(n)
            if n == 1:
                periods.add(1)
        seen = set()
        reps = []
        for x in fixed.points:
            if x in seen or _in_continuum(x, fixed.continua):
                continue
            orbit = [x]
            minimal = True
            for _ in range(n - 1):
                orbit.append(f.eval(orbit[-1]))
                if orbit[-1] == x:
                    minimal = False
                    break
            if not minimal or len(set(orbit)) != n:
                continue
            seen.update(orbit)
            reps.append(tuple(_rotate_to_min(orbit)))
        if reps:
            periods.add(n)
            cycles[n] = tuple(sorted(reps))
    return PeriodSet(
        up_to=up_to,
        periods=frozenset(periods),
        cycles=cycles,
        continuum_flags=frozenset(flags),
    )


def _rotate_to_min(orbit):
    i = orbit.index(min(orbit))
    return orbit[i:] + orbit[:i]


def _sharkovsky_key(n: int):
    """Total-order key: smaller key means earlier (greater) in the ordering."""
    if n < 1:
        raise ValueError(f"periods are positive integers, got {n}")
    e = 0
    odd = n
    while odd % 2 == 0:
        odd //= 2
        e += 1
    if odd == 1:  # pure powers of two close the ordering, descending
        return (1, -e)
    return (0, e, odd)


def sharkovsky_less(p: int, q: int) -> bool:
    """True iff p strictly precedes q in the Sharkovsky ordering."""
    return _sharkovsky_key(p) < _sharkovsky_key(q)


def sharkovsky_consistency(ps: PeriodSet) -> SharkovskyDiagnostic:
    """Check the found periods form a downward-closed tail of the ordering.

    Any violation indicates a solver bug, since period sets of continuous
    interval self-maps are always tails.  Periods present only as fixed
    continua are treated as satisfied rather than missing.
    """
    violations = []
    for p in sorted(ps.periods):
        for q in range(1, ps.up_to + 1):
            if (
                sharkovsky_less(p, q)
                and q not in ps.periods
                and q not in ps.continuum_flags
            ):
                violations.append((p, q))
    return SharkovskyDiagnostic(
        consistent=not violations, violations=tuple(violations)
    )


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def positive_entropy_witness(f: PwlMap, up_to: int, max_segments=None) -> Optional[int]:
    """Sharkovsky-greatest found period that is not a power of two, or None.

    Such a period certifies positive topological entropy.
    """
    ps = minimal_periods(f, up_to, max_segments=max_segments)
    candidates = [p for p in ps.periods if not is_power_of_two(p)]
    if not candidates:
        return None
    return min(candidates, key=_sharkovsky_key)
