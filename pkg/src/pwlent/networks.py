"""One-input networks with rational weights: exact extraction and bounds.

A network is a stack of layers (weight matrix, bias vector, gate) acting
on an interval.  Only relu, max and identity gates are evaluable; the
(t, d1, d2) gate profile is tracked for bound arithmetic either way.
Extraction propagates one exact PwlMap per neuron through the layers, so
the extracted map agrees with forward evaluation at every rational input.

Structure accounting: depth counts gate (non-identity) layers; width is
the largest number of affine units in any layer.  The closing affine
output layer is written as an identity-gate layer and adds no depth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from .analysis import lap_count
from .entropy import EntropyBracket, entropy_bracket
from .errors import (
    DimensionMismatch,
    MalformedInput,
    NonPositiveEntropy,
    UnsupportedGate,
)
from .pwl import PwlMap, clamp, compose, identity_map
from .rationals import parse_rational, rat

_GATES = ("relu", "max", "identity")


@dataclass(frozen=True)
class GateProfile:
    """Semi-algebraic structure parameters (t, d1, d2) of the gates."""

    t: int
    d1: int
    d2: int

    @classmethod
    def relu(cls):
        return cls(1, 1, 1)

    @classmethod
    def max_gate(cls, n_inputs: int):
        return cls(max(1, n_inputs * (n_inputs - 1)), 1, 1)

    def merged(self, other: "GateProfile") -> "GateProfile":
        return GateProfile(
            max(self.t, other.t), max(self.d1, other.d1), max(self.d2, other.d2)
        )


@dataclass(frozen=True)
class Layer:
    weights: tuple  # rows of rational coefficients
    biases: tuple
    gate: str

    @property
    def rows(self) -> int:
        return len(self.weights)

    @property
    def cols(self) -> int:
        return len(self.weights[0])

    @property
    def output_dim(self) -> int:
        return 1 if self.gate == "max" else self.rows


@dataclass(frozen=True)
class NeuralNet:
    """Validated layered network with scalar rational input and output."""

    layers: tuple

    @property
    def depth(self) -> int:
        return sum(1 for layer in self.layers if layer.gate != "identity")

    @property
    def width(self) -> int:
        return max(layer.rows for layer in self.layers)

    def profile(self) -> GateProfile:
        prof = None
        for layer in self.layers:
            if layer.gate == "relu":
                this = GateProfile.relu()
            elif layer.gate == "max":
                this = GateProfile.max_gate(layer.rows)
            else:
                continue
            prof = this if prof is None else prof.merged(this)
        return prof if prof is not None else GateProfile(1, 1, 1)

    def forward(self, x):
        """Exact forward evaluation at a rational input."""
        state = [rat(x)]
        for layer in self.layers:
            pre = [
                sum((w * s for w, s in zip(row, state)), rat(0)) + b
                for row, b in zip(layer.weights, layer.biases)
            ]
            if layer.gate == "relu":
                state = [max(rat(0), z) for z in pre]
            elif layer.gate == "max":
                state = [max(pre)]
            else:
                state = pre
        return state[0]


def _validate_layers(layers) -> NeuralNet:
    if not layers:
        raise MalformedInput("network needs at least one layer")
    prev_out = 1
    for i, layer in enumerate(layers):
        if layer.gate not in _GATES:
            raise UnsupportedGate(f"layer {i}: gate {layer.gate!r}")
        if layer.rows == 0:
            raise MalformedInput(f"layer {i}: empty weight matrix")
        widths = {len(row) for row in layer.weights}
        if len(widths) != 1:
            raise DimensionMismatch(f"layer {i}: ragged weight rows")
        if layer.cols != prev_out:
            raise DimensionMismatch(
                f"layer {i}: expects {layer.cols} inputs, gets {prev_out}"
            )
        if len(layer.biases) != layer.rows:
            raise DimensionMismatch(
                f"layer {i}: {layer.rows} rows but {len(layer.biases)} biases"
            )
        prev_out = layer.output_dim
    last = layers[-1]
    if last.gate != "identity" or last.output_dim != 1:
        raise MalformedInput("final layer must be identity-gated with one output")
    return NeuralNet(layers=tuple(layers))


def parse_network(source) -> NeuralNet:
    """Parse the JSON network description (text or already-decoded dict).

    Weights and biases are rational strings or integers; floats are
    rejected so extraction stays exact.
    """
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(source, dict) or "layers" not in source:
        raise MalformedInput('network JSON needs a "layers" list')
    raw_layers = source["layers"]
    if not isinstance(raw_layers, list) or not raw_layers:
        raise MalformedInput('"layers" must be a non-empty list')
    layers = []
    for i, raw in enumerate(raw_layers):
        if not isinstance(raw, dict) or not {"weights", "biases", "gate"} <= raw.keys():
            raise MalformedInput(f"layer {i}: needs weights, biases and gate")
        weights = raw["weights"]
        if not isinstance(weights, list) or not all(
            isinstance(row, list) for row in weights
        ):
            raise MalformedInput(f"layer {i}: weights must be a list of rows")
        layers.append(
            Layer(
                weights=tuple(
                    tuple(parse_rational(w) for w in row) for row in weights
                ),
                biases=tuple(parse_rational(b) for b in raw["biases"]),
                gate=raw["gate"],
            )
        )
    return _validate_layers(layers)


def _affine_combine(maps, coeffs, bias) -> PwlMap:
    grid = sorted(set().union(*(m.breakpoints for m in maps)))
    vals = [
        sum((c * m.eval(x) for c, m in zip(coeffs, maps)), bias) for x in grid
    ]
    return PwlMap(grid, vals)


def _relu_pwl(h: PwlMap) -> PwlMap:
    rmin, rmax = h.value_range()
    if rmin >= 0:
        return h
    if rmax <= 0:
        return PwlMap((h.domain_lo, h.domain_hi), (rat(0), rat(0)))
    gate = PwlMap((rmin, rat(0), rmax), (rat(0), rat(0), rmax))
    return compose(gate, h)


def _max_pwl(f: PwlMap, g: PwlMap) -> PwlMap:
    grid = sorted(set(f.breakpoints) | set(g.breakpoints))
    fs = [f.eval(x) for x in grid]
    gs = [g.eval(x) for x in grid]
    pts = []
    for i, x in enumerate(grid):
        pts.append((x, max(fs[i], gs[i])))
        if i + 1 < len(grid):
            d0, d1 = fs[i] - gs[i], fs[i + 1] - gs[i + 1]
            if (d0 > 0 > d1) or (d0 < 0 < d1):
                t = x + (grid[i + 1] - x) * d0 / (d0 - d1)
                pts.append((t, f.eval(t)))
    return PwlMap([x for x, _ in pts], [y for _, y in pts])


def network_to_pwl(net: NeuralNet, a, b, clamp_output=False) -> PwlMap:
    """Exact piecewise-linear extraction of the network on [a, b].

    With clamp_output the result is saturated into [a, b] and is then a
    self-map of that interval.
    """
    a, b = rat(a), rat(b)
    state = [identity_map(a, b)]
    for layer in net.layers:
        pre = [
            _affine_combine(state, row, bias)
            for row, bias in zip(layer.weights, layer.biases)
        ]
        if layer.gate == "relu":
            state = [_relu_pwl(h) for h in pre]
        elif layer.gate == "max":
            acc = pre[0]
            for h in pre[1:]:
                acc = _max_pwl(acc, h)
            state = [acc]
        else:
            state = pre
    out = state[0]
    return clamp(out, a, b) if clamp_output else out


def entropy_upper_bound_thm1(l: int, m: int, profile: GateProfile) -> float:
    """Entropy bound in bits from depth, width and the gate profile.

    l(1 + log2 m + log2 t + log2 d1) + 2 l^2 log2 d2; zero depth means an
    affine map, bound zero.
    """
    if l < 0 or m < 1:
        raise ValueError(f"need depth >= 0 and width >= 1, got l={l}, m={m}")
    return l * (
        1 + math.log2(m) + math.log2(profile.t) + math.log2(profile.d1)
    ) + 2 * l * l * math.log2(profile.d2)


def lap_bound_thm1(l: int, m: int, profile: GateProfile) -> int:
    """Exact integer bound 2(2 m t d1)^l d2^(2 l^2) on the clamped lap count."""
    if l < 0 or m < 1:
        raise ValueError(f"need depth >= 0 and width >= 1, got l={l}, m={m}")
    return 2 * (2 * m * profile.t * profile.d1) ** l * profile.d2 ** (2 * l * l)


def width_lower_bound_thm2(h_bits, l: int, profile: GateProfile, k: int = 1) -> float:
    """Minimal width forcing: 2^(k h / 2l) / (2 t d1 d2^(2l)).

    Any network of depth l with the given gates that approximates (in sup
    norm, to the map's own tolerance) the k-th iterate of a map with
    entropy h_bits needs at least this width.
    """
    if not (h_bits > 0) or h_bits != h_bits or h_bits == float("inf"):
        raise NonPositiveEntropy(
            f"width certificates need positive finite entropy, got {h_bits}"
        )
    if l < 1 or k < 1:
        raise ValueError(f"need l >= 1 and k >= 1, got l={l}, k={k}")
    return 2.0 ** (k * h_bits / (2 * l)) / (
        2 * profile.t * profile.d1 * profile.d2 ** (2 * l)
    )


def compile_tent_power(k: int) -> NeuralNet:
    """Depth-k width-2 relu net computing the k-th iterate of the full tent map.

    Each block computes t(x) = 2 relu(x) - 4 relu(x - 1/2); the affine
    output of a block is folded into the next block's weights.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    half = rat(1, 2)
    layers = [Layer(((rat(1),), (rat(1),)), (rat(0), -half), "relu")]
    fold = ((rat(2), rat(-4)), (rat(2), rat(-4)))
    for _ in range(k - 1):
        layers.append(Layer(fold, (rat(0), -half), "relu"))
    layers.append(Layer(((rat(2), rat(-4)),), (rat(0),), "identity"))
    return _validate_layers(layers)


@dataclass(frozen=True)
class BoundReport:
    """Structure-parameter bounds next to measured quantities of tau o g."""

    depth: int
    width: int
    profile: GateProfile
    entropy_upper_bits: float
    lap_bound: int
    measured_laps: int
    bracket: Optional[EntropyBracket]
    lap_bound_satisfied: bool
    entropy_bound_satisfied: bool

    @property
    def satisfied(self) -> bool:
        return self.lap_bound_satisfied and self.entropy_bound_satisfied


def bound_report(net: NeuralNet, a, b, k_max: int, max_segments=None) -> BoundReport:
    """Extract tau o g, measure laps and bracket, compare against the bounds."""
    g = network_to_pwl(net, a, b, clamp_output=True)
    laps = lap_count(g).count
    bracket = entropy_bracket(g, k_max, max_segments=max_segments)
    profile = net.profile()
    upper = entropy_upper_bound_thm1(net.depth, net.width, profile)
    lap_cap = lap_bound_thm1(net.depth, net.width, profile)
    return BoundReport(
        depth=net.depth,
        width=net.width,
        profile=profile,
        entropy_upper_bits=upper,
        lap_bound=lap_cap,
        measured_laps=laps,
        bracket=bracket,
        lap_bound_satisfied=laps <= lap_cap,
        entropy_bound_satisfied=bracket.lower_bits <= upper,
    )
