"""Exact continuous piecewise-linear self-maps of an interval.

A PwlMap is stored as breakpoints x_0 < ... < x_n with values y_0 ... y_n,
all exact rationals, interpolated affinely on each [x_i, x_{i+1}].  Maps
are always kept canonical: no interior breakpoint whose two incident
segments are collinear.  That makes structural equality, lap counting and
segment counting well defined.

Everything here is pure and exact; instances are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

from .errors import (
    DomainMismatch,
    InvalidInterval,
    LengthMismatch,
    NotBijective,
    NotSelfMap,
    OutOfDomain,
    RangeEscapesDomain,
    ResourceLimit,
    UnsortedBreakpoints,
)
from .rationals import Rational, rat

DEFAULT_MAX_SEGMENTS = 5_000_000


def _canonical_points(points):
    """Drop interior points collinear with their kept neighbours."""
    out = [points[0]]
    for x, y in points[1:]:
        while len(out) >= 2:
            (ax, ay), (bx, by) = out[-2], out[-1]
            if (by - ay) * (x - bx) == (y - by) * (bx - ax):
                out.pop()
            else:
                break
        out.append((x, y))
    return out


class PwlMap:
    """Continuous piecewise-linear function on [breakpoints[0], breakpoints[-1]]."""

    __slots__ = ("breakpoints", "values", "self_map")

    def __init__(self, breakpoints, values):
        if not breakpoints or len(breakpoints) != len(values):
            raise LengthMismatch(
                f"{len(breakpoints)} breakpoints vs {len(values)} values"
            )
        if len(breakpoints) < 2:
            raise LengthMismatch("a map needs at least two breakpoints")
        if any(b >= c for b, c in zip(breakpoints, breakpoints[1:])):
            raise UnsortedBreakpoints("breakpoints must be strictly increasing")
        pts = _canonical_points(list(zip(breakpoints, values)))
        self.breakpoints = tuple(x for x, _ in pts)
        self.values = tuple(y for _, y in pts)
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        self.self_map = min(self.values) >= lo and max(self.values) <= hi

    @property
    def domain_lo(self) -> Rational:
        return self.breakpoints[0]

    @property
    def domain_hi(self) -> Rational:
        return self.breakpoints[-1]

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints) - 1

    def segments(self):
        """Yield (x0, x1, y0, y1) per affine piece, left to right."""
        bp, vals = self.breakpoints, self.values
        for i in range(len(bp) - 1):
            yield bp[i], bp[i + 1], vals[i], vals[i + 1]

    def slope(self, i) -> Rational:
        bp, vals = self.breakpoints, self.values
        return (vals[i + 1] - vals[i]) / (bp[i + 1] - bp[i])

    def eval(self, x) -> Rational:
        """Exact value at x; raises OutOfDomain outside the interval."""
        bp, vals = self.breakpoints, self.values
        if x < bp[0] or x > bp[-1]:
            raise OutOfDomain(f"{x} outside [{bp[0]}, {bp[-1]}]")
        i = bisect_right(bp, x) - 1
        if i >= len(bp) - 1:
            return vals[-1]
        if x == bp[i]:
            return vals[i]
        return vals[i] + (vals[i + 1] - vals[i]) * (x - bp[i]) / (bp[i + 1] - bp[i])

    __call__ = eval

    def value_range(self):
        """Exact (min, max) of the map over its domain."""
        return min(self.values), max(self.values)

    def __eq__(self, other):
        if not isinstance(other, PwlMap):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.values == other.values

    def __hash__(self):
        return hash((self.breakpoints, self.values))

    def __repr__(self):
        return (
            f"PwlMap({self.n_segments} segments on "
            f"[{self.domain_lo}, {self.domain_hi}])"
        )


def make_pwl(domain_lo, domain_hi, breakpoints, values) -> PwlMap:
    """Validated constructor: endpoints must coincide with the domain."""
    lo, hi = rat(domain_lo), rat(domain_hi)
    if lo >= hi:
        raise DomainMismatch(f"empty domain [{lo}, {hi}]")
    bp = [rat(b) for b in breakpoints]
    vals = [rat(v) for v in values]
    if not bp or len(bp) != len(vals):
        raise LengthMismatch(f"{len(bp)} breakpoints vs {len(vals)} values")
    if any(b >= c for b, c in zip(bp, bp[1:])):
        raise UnsortedBreakpoints("breakpoints must be strictly increasing")
    if bp[0] != lo or bp[-1] != hi:
        raise DomainMismatch(
            f"breakpoints span [{bp[0]}, {bp[-1]}], domain is [{lo}, {hi}]"
        )
    return PwlMap(bp, vals)


def identity_map(lo=0, hi=1) -> PwlMap:
    lo, hi = rat(lo), rat(hi)
    return PwlMap((lo, hi), (lo, hi))


def compose(outer: PwlMap, inner: PwlMap, max_segments=None) -> PwlMap:
    """Exact outer-after-inner.

    Breakpoints of the result are inner's breakpoints plus the preimages
    under inner of outer's interior breakpoints; horizontal inner segments
    contribute no preimages.  Raises RangeEscapesDomain when inner's value
    range leaves outer's domain, ResourceLimit past the segment ceiling.
    """
    rmin, rmax = inner.value_range()
    if rmin < outer.domain_lo or rmax > outer.domain_hi:
        raise RangeEscapesDomain(
            f"inner range [{rmin}, {rmax}] outside outer domain "
            f"[{outer.domain_lo}, {outer.domain_hi}]"
        )
    obp, ovals = outer.breakpoints, outer.values
    limit = max_segments if max_segments is not None else DEFAULT_MAX_SEGMENTS
    pts = [(inner.breakpoints[0], outer.eval(inner.values[0]))]
    for u, v, p, q in inner.segments():
        if p != q:
            lo_v, hi_v = (p, q) if p < q else (q, p)
            first = bisect_right(obp, lo_v)
            last = bisect_left(obp, hi_v)  # obp[first:last] strictly inside
            indices = range(first, last) if q > p else range(last - 1, first - 1, -1)
            dx_dv = (v - u) / (q - p)
            for j in indices:
                pts.append((u + (obp[j] - p) * dx_dv, ovals[j]))
        pts.append((v, outer.eval(q)))
        if len(pts) - 1 > limit:
            raise ResourceLimit(f"composition exceeds {limit} segments")
    return PwlMap([x for x, _ in pts], [y for _, y in pts])


def iterate(f: PwlMap, k: int, max_segments=None) -> PwlMap:
    """Exact k-fold iterate f^k (k >= 1); f must map its interval into itself."""
    if k < 1:
        raise ValueError(f"iterate order must be >= 1, got {k}")
    if not f.self_map:
        raise NotSelfMap("iteration requires a self-map")
    g = f
    for step in range(2, k + 1):
        try:
            g = compose(f, g, max_segments=max_segments)
        except ResourceLimit as exc:
            exc.completed_k = step - 1
            raise
    return g


def iterates(f: PwlMap, k_max: int, max_segments=None):
    """Yield (k, f^k) for k = 1..k_max, stopping early at the segment ceiling."""
    if not f.self_map:
        raise NotSelfMap("iteration requires a self-map")
    g = f
    yield 1, g
    for k in range(2, k_max + 1):
        g = compose(f, g, max_segments=max_segments)
        yield k, g


def clamp(f: PwlMap, a, b) -> PwlMap:
    """Saturate f's values into [a, b] (postcompose with the clamp map)."""
    a, b = rat(a), rat(b)
    if a >= b:
        raise InvalidInterval(f"clamp interval [{a}, {b}] is empty")
    rmin, rmax = f.value_range()
    lo, hi = min(a, rmin), max(b, rmax)
    pts = [(lo, max(a, min(b, lo)))]
    for cut in (a, b, hi):
        if cut > pts[-1][0]:
            pts.append((cut, max(a, min(b, cut))))
    tau = PwlMap([x for x, _ in pts], [y for _, y in pts])
    return compose(tau, f)


class Homeomorphism:
    """Strictly monotone PwlMap, bijective onto its value interval."""

    __slots__ = ("map",)

    def __init__(self, pwl_map: PwlMap):
        vals = pwl_map.values
        increasing = all(a < b for a, b in zip(vals, vals[1:]))
        decreasing = all(a > b for a, b in zip(vals, vals[1:]))
        if not (increasing or decreasing):
            raise NotBijective("values must be strictly monotone")
        self.map = pwl_map

    @classmethod
    def affine_between(cls, src_lo, src_hi, dst_lo, dst_hi, increasing=True):
        """The affine bijection [src_lo, src_hi] -> [dst_lo, dst_hi]."""
        src_lo, src_hi = rat(src_lo), rat(src_hi)
        dst_lo, dst_hi = rat(dst_lo), rat(dst_hi)
        vals = (dst_lo, dst_hi) if increasing else (dst_hi, dst_lo)
        return cls(PwlMap((src_lo, src_hi), vals))

    @property
    def increasing(self) -> bool:
        return self.map.values[0] < self.map.values[-1]

    @property
    def source(self):
        return self.map.domain_lo, self.map.domain_hi

    @property
    def target(self):
        v0, v1 = self.map.values[0], self.map.values[-1]
        return (v0, v1) if v0 < v1 else (v1, v0)

    def inverse(self) -> "Homeomorphism":
        bp, vals = self.map.breakpoints, self.map.values
        if self.increasing:
            return Homeomorphism(PwlMap(vals, bp))
        return Homeomorphism(PwlMap(tuple(reversed(vals)), tuple(reversed(bp))))

    def __repr__(self):
        s, t = self.source, self.target
        arrow = "increasing" if self.increasing else "decreasing"
        return f"Homeomorphism([{s[0]}, {s[1]}] -> [{t[0]}, {t[1]}], {arrow})"


def conjugate(f: PwlMap, phi: Homeomorphism) -> PwlMap:
    """phi o f o phi^{-1}, the copy of f living on phi's target interval."""
    if phi.source != (f.domain_lo, f.domain_hi):
        raise DomainMismatch(
            f"conjugacy source {phi.source} differs from map domain "
            f"[{f.domain_lo}, {f.domain_hi}]"
        )
    return compose(phi.map, compose(f, phi.inverse().map))


def map_from_json(data) -> PwlMap:
    """Decode the map wire format.

    {"domain": ["0", "1"], "breakpoints": [...], "values": [...]} with all
    rationals as "p/q" or integer strings; floats are rejected.
    """
    from .errors import MalformedInput
    from .rationals import parse_rational

    if not isinstance(data, dict) or not {"domain", "breakpoints", "values"} <= data.keys():
        raise MalformedInput('map JSON needs "domain", "breakpoints" and "values"')
    domain = data["domain"]
    if not isinstance(domain, list) or len(domain) != 2:
        raise MalformedInput('"domain" must be a two-element list')
    return make_pwl(
        parse_rational(domain[0]),
        parse_rational(domain[1]),
        [parse_rational(b) for b in data["breakpoints"]],
        [parse_rational(v) for v in data["values"]],
    )


def map_to_json(f: PwlMap) -> dict:
    """Encode a map in the wire format (inverse of map_from_json)."""
    from .rationals import format_rational

    return {
        "domain": [format_rational(f.domain_lo), format_rational(f.domain_hi)],
        "breakpoints": [format_rational(b) for b in f.breakpoints],
        "values": [format_rational(v) for v in f.values],
    }


def linf_distance(f: PwlMap, g: PwlMap) -> Rational:
    """Exact sup-norm of f - g over their (identical) domain.

    f - g is affine between merged breakpoints, so the supremum is
    attained at one of them.
    """
    if (f.domain_lo, f.domain_hi) != (g.domain_lo, g.domain_hi):
        raise DomainMismatch("maps live on different intervals")
    merged = sorted(set(f.breakpoints) | set(g.breakpoints))
    return max(abs(f.eval(x) - g.eval(x)) for x in merged)
