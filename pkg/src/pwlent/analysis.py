"""Combinatorial statistics of a piecewise-linear map.

Lap count (minimal number of monotone pieces), total variation, Lipschitz
constant, and crossing counts of value intervals.  All quantities are
exact; crossing counts follow the interval-covering reading: the count
for [x, y] is the maximal number of subintervals with pairwise disjoint
interiors that each map exactly onto [x, y].
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInterval
from .pwl import PwlMap
from .rationals import Rational, rat


@dataclass(frozen=True)
class LapDecomposition:
    """Minimal partition of the domain into monotone pieces."""

    pieces: tuple  # ((lo, hi), direction) with direction in {"up", "down", "flat"}
    count: int


def lap_count(f: PwlMap) -> LapDecomposition:
    """Greedy left-to-right minimal monotone partition.

    Flat segments never change the running direction; they are absorbed
    into the current lap.  A strict direction reversal closes the lap at
    the reversing breakpoint.
    """
    pieces = []
    direction = 0
    start = f.domain_lo
    for x0, x1, y0, y1 in f.segments():
        sign = 0 if y1 == y0 else (1 if y1 > y0 else -1)
        if sign == 0:
            continue
        if direction == 0:
            direction = sign
        elif sign != direction:
            pieces.append(((start, x0), "up" if direction > 0 else "down"))
            start = x0
            direction = sign
    label = "up" if direction > 0 else ("down" if direction < 0 else "flat")
    pieces.append(((start, f.domain_hi), label))
    return LapDecomposition(pieces=tuple(pieces), count=len(pieces))


def variation(f: PwlMap) -> Rational:
    """Exact total rise-and-fall; for PWL maps the breakpoint sum attains it."""
    total = rat(0)
    for a, b in zip(f.values, f.values[1:]):
        total += abs(b - a)
    return total


def lipschitz(f: PwlMap) -> Rational:
    """Largest absolute segment slope; equals the Lipschitz constant."""
    return max(abs(f.slope(i)) for i in range(f.n_segments))


@dataclass(frozen=True)
class CrossingReport:
    """Crossing count for [x, y] with exact witness pairs.

    Each witness (c, d) satisfies f(c) = x and f(d) = y exactly, and the
    stretch between consecutive witness pairs maps onto [x, y] with
    pairwise disjoint interiors (shared endpoints are allowed).
    """

    x: Rational
    y: Rational
    count: int
    witnesses: tuple


def _level_events(f: PwlMap, levels):
    """Ordered (lo, hi, label) hit events of f against the given levels.

    A maximal flat run at a level is one event spanning the run; touching
    same-label events merge.  Labels of different levels cannot touch.
    """
    raw = []
    for x0, x1, y0, y1 in f.segments():
        for label, level in enumerate(levels):
            if y0 == y1:
                if y0 == level:
                    raw.append((x0, x1, label))
            elif min(y0, y1) <= level <= max(y0, y1):
                t = x0 + (level - y0) * (x1 - x0) / (y1 - y0)
                raw.append((t, t, label))
    raw.sort(key=lambda e: (e[0], e[1]))
    merged = []
    for lo, hi, label in raw:
        if merged and merged[-1][2] == label and lo <= merged[-1][1]:
            prev = merged[-1]
            merged[-1] = (prev[0], max(prev[1], hi), label)
        else:
            merged.append((lo, hi, label))
    return merged


def crossing_count(f: PwlMap, x, y) -> CrossingReport:
    """Count traversals of the value interval [x, y] (x < y).

    Collect the level sets f^{-1}{x} and f^{-1}{y} along the domain,
    run-length compress the label sequence, and pair adjacent opposite
    labels left to right; consecutive pairs may share an endpoint, which
    matches the maximal number of times the domain covers [x, y].
    """
    if x >= y:
        raise InvalidInterval(f"need x < y, got [{x}, {y}]")
    events = _level_events(f, (x, y))
    compressed = []
    for ev in events:
        if compressed and compressed[-1][2] == ev[2]:
            continue
        compressed.append(ev)
    count = max(0, len(compressed) - 1)
    witnesses = []
    for (lo0, hi0, lab0), (lo1, _hi1, lab1) in zip(compressed, compressed[1:]):
        # left element of the pair takes the right edge of its event, so
        # pairs sharing a flat run still get distinct representatives
        left, right = hi0, lo1
        c, d = (left, right) if lab0 == 0 else (right, left)
        witnesses.append((c, d))
    return CrossingReport(x=x, y=y, count=count, witnesses=tuple(witnesses))


def max_crossing(f: PwlMap):
    """Maximize crossing_count over a finite candidate set of value pairs.

    Crossing counts change only when an endpoint moves past a breakpoint
    value, so candidates are all ordered pairs of distinct breakpoint
    values plus, per adjacent pair of distinct values, the two interior
    third-points of the gap.  Returns (count, witness_x, witness_y).
    """
    critical = sorted(set(f.values))
    candidates = [
        (critical[i], critical[j])
        for i in range(len(critical))
        for j in range(i + 1, len(critical))
    ]
    for w0, w1 in zip(critical, critical[1:]):
        gap = w1 - w0
        candidates.append((w0 + gap / 3, w0 + 2 * gap / 3))
    best, wx, wy = 0, None, None
    for x, y in candidates:
        c = crossing_count(f, x, y).count
        if c > best:
            best, wx, wy = c, x, y
    return best, wx, wy
