"""Constructors for the worked example maps and the sampled logistic family.

The staircase map packs copies of zigzag powers into dyadic blocks
[2^-n, 2^-(n-1)].  For even lap counts the n-th zigzag power sends both
ends of its interval to the bottom, so literally tiling the blocks would
be discontinuous; each block therefore keeps its lower three quarters for
the conjugated power and spends the top quarter on an affine connector
rising to the next block's fixed left endpoint.  Entropy content is
unchanged: block n still carries a full m^n-piece horseshoe.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoConvergence, ParameterOutOfRange, ResourceLimit
from .pwl import (
    DEFAULT_MAX_SEGMENTS,
    Homeomorphism,
    PwlMap,
    conjugate,
    identity_map,
    iterate,
    make_pwl,
)
from .rationals import Rational, rat


def tent(alpha) -> PwlMap:
    """Tent map with slope +-alpha: peak alpha/2 at 1/2, on [0, 1]."""
    alpha = rat(alpha)
    if not 0 <= alpha <= 2:
        raise ParameterOutOfRange(f"tent slope must lie in [0, 2], got {alpha}")
    return make_pwl(0, 1, [rat(0), rat(1, 2), rat(1)], [rat(0), alpha / 2, rat(0)])


def zigzag(laps: int) -> PwlMap:
    """m full teeth of slope +-m, each mapping onto [0, 1]; zigzag(1) is identity."""
    if laps < 1:
        raise ParameterOutOfRange(f"lap count must be >= 1, got {laps}")
    bp = [rat(j, laps) for j in range(laps + 1)]
    vals = [rat(j % 2) for j in range(laps + 1)]
    return make_pwl(0, 1, bp, vals)


def staircase(blocks: int, base_laps: int, max_segments=None) -> PwlMap:
    """Finite stack of zigzag powers on shrinking dyadic blocks.

    Block n (n = 1..blocks, innermost last) carries a conjugate of
    zigzag(base_laps)^n, so its horseshoe certifies n*log2(base_laps)
    bits; the tail [0, 2^-blocks] is the affine join fixing 0.  Expected
    entropy of the truncation: blocks*log2(base_laps).
    """
    if blocks < 1:
        raise ParameterOutOfRange(f"need at least one block, got {blocks}")
    if base_laps < 2:
        raise ParameterOutOfRange(f"need base_laps >= 2, got {base_laps}")
    limit = max_segments if max_segments is not None else DEFAULT_MAX_SEGMENTS
    if sum(base_laps**n for n in range(1, blocks + 1)) > limit:
        raise ResourceLimit(
            f"staircase({blocks}, {base_laps}) exceeds {limit} segments"
        )
    g = zigzag(base_laps)
    xs, ys = [rat(0)], [rat(0)]
    tail_hi = rat(1, 2**blocks)
    xs.append(tail_hi)
    ys.append(tail_hi)  # tail: affine join fixing 0, slope 1
    for n in range(blocks, 0, -1):
        lo, hi = rat(1, 2**n), rat(1, 2 ** (n - 1))
        core_hi = hi if n == 1 else lo + (hi - lo) * rat(3, 4)
        phi = Homeomorphism.affine_between(0, 1, lo, core_hi)
        block = conjugate(iterate(g, n, max_segments=limit), phi)
        xs.extend(block.breakpoints[1:])
        ys.extend(block.values[1:])
        if n > 1:  # connector up to the next block's fixed left endpoint
            xs.append(hi)
            ys.append(hi)
    return make_pwl(0, 1, xs, ys)


@dataclass(frozen=True)
class SampledMap:
    """Closed-form map evaluated exactly per point, analysed by sampling only."""

    name: str
    parameter: Rational

    def eval(self, x) -> Rational:
        return self.parameter * x * (1 - x)

    def eval_iterate(self, x, k: int) -> Rational:
        y = rat(x)
        for _ in range(k):
            y = self.eval(y)
        return y

    @property
    def descriptor(self) -> str:
        from .rationals import format_rational

        return f"{self.name}:{format_rational(self.parameter)}"


def logistic(beta) -> SampledMap:
    """The quadratic family beta*x*(1-x) on [0, 1], exact per-point values."""
    beta = rat(beta)
    if not 0 <= beta <= 4:
        raise ParameterOutOfRange(f"logistic parameter must lie in [0, 4], got {beta}")
    return SampledMap(name="logistic", parameter=beta)


MIN_SAMPLE_GRID = 1000


def _extrema_estimate(smap: SampledMap, k: int, grid: int) -> int:
    ys = [smap.eval_iterate(rat(i, grid), k) for i in range(grid + 1)]
    signs = []
    for a, b in zip(ys, ys[1:]):
        if b != a:
            signs.append(1 if b > a else -1)
    if not signs:
        return 1
    return 1 + sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sampled_lap_count(smap: SampledMap, k: int, grid: int = MIN_SAMPLE_GRID,
                      max_refinements: int = 10) -> int:
    """Non-rigorous lap estimate for a sampled map's k-th iterate.

    Counts strict local extrema of the exactly-evaluated iterate on a
    uniform grid, doubling the grid until the estimate is unchanged twice
    in a row.  This is an estimate, never a bound.
    """
    if k < 1:
        raise ParameterOutOfRange(f"need k >= 1, got {k}")
    if grid < MIN_SAMPLE_GRID:
        raise ParameterOutOfRange(f"grid must be >= {MIN_SAMPLE_GRID}, got {grid}")
    estimates = [_extrema_estimate(smap, k, grid)]
    for _ in range(max_refinements):
        grid *= 2
        estimates.append(_extrema_estimate(smap, k, grid))
        if len(estimates) >= 3 and estimates[-1] == estimates[-2] == estimates[-3]:
            return estimates[-1]
    raise NoConvergence(
        f"lap estimate still moving after {max_refinements} refinements: {estimates}"
    )


def from_descriptor(text: str):
    """Resolve catalog descriptors: identity, tent:A, zigzag:M, staircase:N:M, logistic:B."""
    from .errors import MalformedInput
    from .rationals import parse_rational

    parts = text.split(":")
    name, args = parts[0], parts[1:]
    try:
        if name == "identity" and not args:
            return identity_map()
        if name == "tent" and len(args) == 1:
            return tent(parse_rational(args[0]))
        if name == "zigzag" and len(args) == 1:
            return zigzag(int(args[0]))
        if name == "staircase" and len(args) == 2:
            return staircase(int(args[0]), int(args[1]))
        if name == "logistic" and len(args) == 1:
            return logistic(parse_rational(args[0]))
    except ParameterOutOfRange:
        raise
    except ValueError as exc:
        raise MalformedInput(f"bad catalog descriptor {text!r}: {exc}") from exc
    raise MalformedInput(f"unknown catalog descriptor {text!r}")
