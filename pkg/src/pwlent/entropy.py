"""Rigorous entropy brackets and asymptotic rate diagnostics.

Upper bounds come from exact lap counts of iterates: log2(c(f^k))/k is an
upper bound on the entropy for every k because the entropy is the infimum
of that sequence.  Lower bounds come from exactly verified horseshoes: an
s-piece horseshoe for f^k certifies entropy >= log2(s)/k.  Maps whose
pieces all share one absolute slope get their exact entropy max{0, log2 s}
folded into both sides of the bracket.

The horseshoe search is a deliberate under-approximation (monotone-piece
coverings over a finite candidate family); anything it returns is verified
piece by piece in exact arithmetic, so lower bounds are always sound.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional

from .analysis import lap_count, max_crossing, variation, lipschitz
from .errors import NotConstantSlope, NotSelfMap, ResourceLimit
from .pwl import DEFAULT_MAX_SEGMENTS, PwlMap, iterate, iterates
from .rationals import log2_rational

# The refinement pass over lap-image candidates is quadratic in the worst
# case; past these sizes keep only the sweep optimum (still sound).
_REFINE_LAP_LIMIT = 4096
_REFINE_CANDIDATE_LIMIT = 256


@dataclass(frozen=True)
class Horseshoe:
    """Partition of J into s pieces whose closures each cover J under f^k."""

    k: int
    interval: tuple
    partition: tuple
    s: int


@dataclass(frozen=True)
class EvidenceRow:
    k: int
    laps: int
    upper_bits: float
    horseshoe_s: Optional[int]
    lower_bits: Optional[float]


@dataclass(frozen=True)
class EntropyBracket:
    """Certified lower/upper entropy bounds in bits with per-k evidence."""

    lower_bits: float
    upper_bits: float
    evidence: tuple
    constant_slope_bits: Optional[float] = None
    limited: bool = False
    limit_note: Optional[str] = None


@dataclass(frozen=True)
class RateRow:
    k: int
    crossings: int
    crossing_rate_bits: Optional[float]
    variation: object
    variation_rate_bits: Optional[float]
    lipschitz: object
    lipschitz_rate_bits: Optional[float]


@dataclass(frozen=True)
class RateSequences:
    rows: tuple
    limited: bool = False


class _MaxAddTree:
    """Range add / global max over 0..n-1 (pending deltas folded into maxima)."""

    def __init__(self, n):
        self.n = n
        self._max = [0] * (4 * n)
        self._pending = [0] * (4 * n)

    def add(self, lo, hi, delta):
        self._add(1, 0, self.n - 1, lo, hi, delta)

    def _add(self, node, nlo, nhi, lo, hi, delta):
        if hi < nlo or nhi < lo:
            return
        if lo <= nlo and nhi <= hi:
            self._max[node] += delta
            self._pending[node] += delta
            return
        mid = (nlo + nhi) // 2
        self._add(2 * node, nlo, mid, lo, hi, delta)
        self._add(2 * node + 1, mid + 1, nhi, lo, hi, delta)
        self._max[node] = self._pending[node] + max(
            self._max[2 * node], self._max[2 * node + 1]
        )

    @property
    def max_value(self):
        return self._max[1]


def _lap_records(g: PwlMap):
    """Per monotone piece: (xlo, xhi, image_min, image_max)."""
    recs = []
    for (lo, hi), _direction in lap_count(g).pieces:
        e0, e1 = g.eval(lo), g.eval(hi)
        recs.append((lo, hi, min(e0, e1), max(e0, e1)))
    return recs


def _best_full_cover(laps):
    """Sweep for the (u, v) maximizing #laps inside [u, v] with image >= [u, v].

    A lap (xlo, xhi, vmin, vmax) counts for (u, v) iff u in [vmin, xlo]
    and v in [xhi, vmax]; that is a rectangle in the (u, v) plane, so the
    best pair is a maximal rectangle overlap.  Ties resolve to the
    smallest u, then the smallest v.
    """
    rects = [
        (vmin, xlo, xhi, vmax)
        for xlo, xhi, vmin, vmax in laps
        if vmin <= xlo and xhi <= vmax
    ]
    if not rects:
        return None
    vcoords = sorted({r[2] for r in rects} | {r[3] for r in rects})
    vindex = {v: i for i, v in enumerate(vcoords)}
    adds, removes = {}, {}
    for r in rects:
        adds.setdefault(r[0], []).append(r)
        removes.setdefault(r[1], []).append(r)
    tree = _MaxAddTree(len(vcoords))
    best_count, best_u = 0, None
    for u in sorted(adds.keys() | removes.keys()):
        for r in adds.get(u, ()):
            tree.add(vindex[r[2]], vindex[r[3]], 1)
        if tree.max_value > best_count:
            best_count, best_u = tree.max_value, u
        for r in removes.get(u, ()):
            tree.add(vindex[r[2]], vindex[r[3]], -1)
    if best_count == 0:
        return None
    diff = [0] * (len(vcoords) + 1)
    for r in rects:
        if r[0] <= best_u <= r[1]:
            diff[vindex[r[2]]] += 1
            diff[vindex[r[3]] + 1] -= 1
    depth = 0
    for i, d in enumerate(diff[:-1]):
        depth += d
        if depth == best_count:
            return best_count, best_u, vcoords[i]
    raise AssertionError("sweep bookkeeping out of sync")


def _covering_pieces(g: PwlMap, laps, u, v):
    """Clipped monotone pieces inside [u, v] whose image covers [u, v].

    Interior laps reuse their stored image; evaluation is only needed for
    the at most two laps clipped at the candidate boundary.
    """
    xlos = [lap[0] for lap in laps]
    start = max(0, bisect_left(xlos, u) - 1)
    pieces = []
    for xlo, xhi, vmin, vmax in laps[start:]:
        if xlo >= v:
            break
        a, b = max(xlo, u), min(xhi, v)
        if a >= b:
            continue
        if a == xlo and b == xhi:
            lo_val, hi_val = vmin, vmax
        else:
            ea, eb = g.eval(a), g.eval(b)
            lo_val, hi_val = (ea, eb) if ea <= eb else (eb, ea)
        if lo_val <= u and hi_val >= v:
            pieces.append((a, b))
    return pieces


def _partition_from_pieces(u, v, pieces):
    """Extend disjoint covering pieces to a tiling of [u, v]."""
    bounds = [u] + [hi for _lo, hi in pieces[:-1]] + [v]
    return tuple(zip(bounds, bounds[1:]))


def _verify_horseshoe(g: PwlMap, interval, partition, laps=None):
    """Exact check: partition tiles the interval, each element covers it."""
    u, v = interval
    if len(partition) < 2 or partition[0][0] != u or partition[-1][1] != v:
        return False
    for (a0, b0), (a1, _b1) in zip(partition, partition[1:]):
        if b0 != a1 or a0 >= b0:
            return False
    if partition[-1][0] >= partition[-1][1]:
        return False
    if laps is None:
        laps = _lap_records(g)
    xlos = [lap[0] for lap in laps]
    for a, b in partition:
        found = False
        start = max(0, bisect_left(xlos, a) - 1)
        for xlo, xhi, _vmin, _vmax in laps[start:]:
            if xlo >= b:
                break
            lo, hi = max(xlo, a), min(xhi, b)
            if lo >= hi:
                continue
            e0, e1 = g.eval(lo), g.eval(hi)
            if min(e0, e1) <= u and max(e0, e1) >= v:
                found = True
                break
        if not found:
            return False
    return True


def _horseshoe_for(g: PwlMap, k: int) -> Optional[Horseshoe]:
    laps = _lap_records(g)
    swept = _best_full_cover(laps)
    candidates = set()
    if swept is not None:
        candidates.add((swept[1], swept[2]))
    if len(laps) <= _REFINE_LAP_LIMIT:
        # lap images catch horseshoes whose boundary pieces are clipped
        images = {(vmin, vmax) for _xlo, _xhi, vmin, vmax in laps if vmin < vmax}
        if len(images) <= _REFINE_CANDIDATE_LIMIT:
            candidates.update(images)
    best = None
    for u, v in sorted(candidates):
        pieces = _covering_pieces(g, laps, u, v)
        if len(pieces) >= 2 and (best is None or len(pieces) > best[0]):
            best = (len(pieces), u, v, pieces)
    if best is None:
        return None
    s, u, v, pieces = best
    partition = _partition_from_pieces(u, v, pieces)
    shoe = Horseshoe(k=k, interval=(u, v), partition=partition, s=s)
    if not _verify_horseshoe(g, shoe.interval, shoe.partition, laps=laps):
        raise AssertionError("constructed horseshoe failed exact verification")
    return shoe


def horseshoe_search(f: PwlMap, k: int, max_segments=None) -> Optional[Horseshoe]:
    """Best exactly-verified horseshoe found for f^k, or None.

    Certifies entropy >= log2(s)/k when it returns s pieces.
    """
    g = iterate(f, k, max_segments=max_segments)
    return _horseshoe_for(g, k)


def constant_slope_entropy(f: PwlMap) -> float:
    """Exact entropy max{0, log2 s} for maps of uniform absolute slope s.

    Rejects maps with flat pieces or mixed absolute slopes.
    """
    slopes = {abs(f.slope(i)) for i in range(f.n_segments)}
    if len(slopes) != 1:
        raise NotConstantSlope(f"absolute slopes {sorted(slopes)} are not uniform")
    s = slopes.pop()
    if s == 0:
        raise NotConstantSlope("map is constant")
    return max(0.0, log2_rational(s))


def lap_upper_sequence(f: PwlMap, k_max: int, max_segments=None, strict=False):
    """Rows (k, c(f^k), log2(c)/k) for k <= k_max; each row upper-bounds entropy.

    Stops early at the segment ceiling unless strict=True, in which case
    ResourceLimit propagates.
    """
    limit = max_segments if max_segments is not None else DEFAULT_MAX_SEGMENTS
    rows = []
    try:
        for k, g in iterates(f, k_max, max_segments=limit):
            c = lap_count(g).count
            rows.append((k, c, log2_rational(c) / k))
    except ResourceLimit:
        if strict:
            raise
    return rows


def _check_bracket_exact(lower_src, upper_src):
    """Exact big-integer soundness check lower <= upper.

    Sources are ("laps", c, k), ("horseshoe", s, k), ("slope", p, q) or None.
    """

    def bounds(src):
        kind = src[0]
        if kind == "slope":
            _, p, q = src
            return (p, q, 1)  # log2(p/q) / 1
        _, n, k = src
        return (n, 1, k)  # log2(n/1) / k

    if lower_src is None or upper_src is None:
        return True
    lp, lq, lk = bounds(lower_src)
    up, uq, uk = bounds(upper_src)
    # log2(lp/lq)/lk <= log2(up/uq)/uk  <=>  (lp/lq)^uk <= (up/uq)^lk
    return lp**uk * uq**lk <= up**lk * lq**uk


def entropy_bracket(f: PwlMap, k_max: int, max_segments=None) -> EntropyBracket:
    """Certified [lower, upper] entropy bracket in bits from k <= k_max evidence.

    lower = best verified horseshoe rate, upper = best lap rate; for maps
    of uniform absolute slope the exact value tightens both sides.  On
    hitting the segment ceiling the bracket is built from the completed
    rows and flagged as limited.
    """
    if not f.self_map:
        raise NotSelfMap("entropy bracket requires a self-map")
    limit = max_segments if max_segments is not None else DEFAULT_MAX_SEGMENTS
    rows = []
    limited = False
    note = None
    try:
        for k, g in iterates(f, k_max, max_segments=limit):
            c = lap_count(g).count
            upper_k = log2_rational(c) / k
            shoe = _horseshoe_for(g, k)
            if shoe is None:
                rows.append(EvidenceRow(k, c, upper_k, None, None))
            else:
                rows.append(
                    EvidenceRow(k, c, upper_k, shoe.s, log2_rational(shoe.s) / k)
                )
    except ResourceLimit as exc:
        limited = True
        note = f"segment ceiling {limit} reached after k={len(rows)}"
        if not rows:
            raise exc
    upper_bits = min(r.upper_bits for r in rows)
    upper_src = min(
        (("laps", r.laps, r.k) for r in rows),
        key=lambda src: log2_rational(src[1]) / src[2],
    )
    lower_bits = 0.0
    lower_src = None
    for r in rows:
        if r.lower_bits is not None and r.lower_bits > lower_bits:
            lower_bits = r.lower_bits
            lower_src = ("horseshoe", r.horseshoe_s, r.k)
    cs_bits = None
    try:
        cs_bits = constant_slope_entropy(f)
    except NotConstantSlope:
        pass
    if cs_bits is not None:
        s = {abs(f.slope(i)) for i in range(f.n_segments)}.pop()
        cs_src = ("slope", int(s.numerator), int(s.denominator))
        if cs_bits < upper_bits:
            upper_bits, upper_src = cs_bits, cs_src
        if cs_bits > lower_bits:
            lower_bits, lower_src = cs_bits, cs_src
    if not _check_bracket_exact(lower_src, upper_src):
        raise AssertionError(
            f"bracket soundness violated: {lower_src} > {upper_src}"
        )
    lower_bits = min(lower_bits, upper_bits)  # guard float rounding only
    return EntropyBracket(
        lower_bits=lower_bits,
        upper_bits=upper_bits,
        evidence=tuple(rows),
        constant_slope_bits=cs_bits,
        limited=limited,
        limit_note=note,
    )


def rate_sequences(f: PwlMap, k_max: int, max_segments=None) -> RateSequences:
    """Exact C(f^k), Var(f^k), L(f^k) with their per-k rates in bits.

    Rates are None when the underlying quantity is zero (log undefined).
    """
    if not f.self_map:
        raise NotSelfMap("rate sequences require a self-map")
    limit = max_segments if max_segments is not None else DEFAULT_MAX_SEGMENTS
    rows = []
    limited = False
    try:
        for k, g in iterates(f, k_max, max_segments=limit):
            crossings = max_crossing(g)[0]
            var = variation(g)
            lip = lipschitz(g)
            rows.append(
                RateRow(
                    k=k,
                    crossings=crossings,
                    crossing_rate_bits=(
                        log2_rational(crossings) / k if crossings > 0 else None
                    ),
                    variation=var,
                    variation_rate_bits=(
                        log2_rational(var) / k if var > 0 else None
                    ),
                    lipschitz=lip,
                    lipschitz_rate_bits=(
                        log2_rational(lip) / k if lip > 0 else None
                    ),
                )
            )
    except ResourceLimit:
        limited = True
    return RateSequences(rows=tuple(rows), limited=limited)
