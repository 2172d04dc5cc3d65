import json
import math
import random

import pytest

from pwlent.analysis import lap_count
from pwlent.entropy import entropy_bracket
from pwlent.errors import (
    DimensionMismatch,
    MalformedInput,
    NonPositiveEntropy,
    NonRationalWeight,
    UnsupportedGate,
)
from pwlent.networks import (
    GateProfile,
    Layer,
    NeuralNet,
    bound_report,
    compile_tent_power,
    entropy_upper_bound_thm1,
    lap_bound_thm1,
    network_to_pwl,
    parse_network,
    width_lower_bound_thm2,
)
from pwlent.pwl import clamp, identity_map, iterate, linf_distance, make_pwl
from pwlent.rationals import rat

from oracles import random_relu_net

TENT_NET_JSON = (
    '{"layers":['
    '{"weights":[["1"],["1"]],"biases":["0","-1/2"],"gate":"relu"},'
    '{"weights":[["2","-4"]],"biases":["0"],"gate":"identity"}]}'
)


class TestParsing:
    def test_tent_network_round_trip(self, t2):
        net = parse_network(TENT_NET_JSON)
        assert net.depth == 1 and net.width == 2
        assert net.profile() == GateProfile(1, 1, 1)
        assert linf_distance(network_to_pwl(net, 0, 1), t2) == 0

    def test_empty_layer_list(self):
        with pytest.raises(MalformedInput):
            parse_network('{"layers":[]}')

    def test_missing_layers_key(self):
        with pytest.raises(MalformedInput):
            parse_network("{}")

    def test_invalid_json(self):
        with pytest.raises(MalformedInput):
            parse_network("{not json")

    def test_float_weight_rejected(self):
        bad = json.loads(TENT_NET_JSON)
        bad["layers"][0]["weights"][0][0] = 0.5
        with pytest.raises(NonRationalWeight):
            parse_network(bad)

    def test_unknown_gate(self):
        bad = json.loads(TENT_NET_JSON)
        bad["layers"][0]["gate"] = "sigmoid"
        with pytest.raises(UnsupportedGate):
            parse_network(bad)

    def test_ragged_weights(self):
        bad = json.loads(TENT_NET_JSON)
        bad["layers"][1]["weights"] = [["2"]]
        with pytest.raises(DimensionMismatch):
            parse_network(bad)

    def test_final_layer_must_be_identity_scalar(self):
        bad = json.loads(TENT_NET_JSON)
        bad["layers"][-1]["gate"] = "relu"
        with pytest.raises(MalformedInput):
            parse_network(bad)

    def test_relu_three_by_two_shape(self):
        net = compile_tent_power(3)
        assert (net.depth, net.width) == (3, 2)
        assert net.profile() == GateProfile(1, 1, 1)


class TestExtraction:
    def test_identity_affine_layer(self):
        net = parse_network('{"layers":[{"weights":[["1"]],"biases":["0"],"gate":"identity"}]}')
        assert network_to_pwl(net, 0, 1) == identity_map()
        assert net.depth == 0

    def test_tent_power_two_extracts_exactly(self, t2):
        net = compile_tent_power(2)
        assert network_to_pwl(net, 0, 1) == iterate(t2, 2)

    def test_forward_equals_extraction(self):
        rng = random.Random(311)
        for _ in range(8):
            net = random_relu_net(rng, max_depth=3, max_width=4)
            g = network_to_pwl(net, 0, 1)
            for _ in range(125):
                x = rat(rng.randint(0, 2048), 2048)
                assert net.forward(x) == g.eval(x)

    def test_clamp_consistency(self):
        rng = random.Random(313)
        for _ in range(20):
            net = random_relu_net(rng, max_depth=3, max_width=4)
            clamped = network_to_pwl(net, 0, 1, clamp_output=True)
            raw = network_to_pwl(net, 0, 1, clamp_output=False)
            assert clamped == clamp(raw, 0, 1)
            assert clamped.self_map

    def test_max_gate_pairwise(self):
        net = NeuralNet(
            layers=(
                Layer(((rat(1),), (rat(-1),)), (rat(0), rat(1)), "max"),
                Layer(((rat(1),),), (rat(0),), "identity"),
            )
        )
        g = network_to_pwl(net, 0, 1)
        assert g == make_pwl(0, 1, [0, rat(1, 2), 1], [1, rat(1, 2), 1])
        assert net.profile() == GateProfile(2, 1, 1)
        rng = random.Random(317)
        for _ in range(100):
            x = rat(rng.randint(0, 999), 999)
            assert net.forward(x) == max(x, 1 - x)


class TestTentPowerCompiler:
    def test_extraction_equals_iterates(self, t2):
        for k in range(1, 11):
            assert network_to_pwl(compile_tent_power(k), 0, 1) == iterate(t2, k)

    def test_k_three_lap_count(self):
        g = network_to_pwl(compile_tent_power(3), 0, 1)
        assert lap_count(g).count == 8

    def test_shape(self):
        net = compile_tent_power(1)
        assert (net.depth, net.width) == (1, 2)


class TestBoundFormulas:
    def test_relu_upper_bound(self):
        assert entropy_upper_bound_thm1(3, 2, GateProfile.relu()) == 6.0
        assert entropy_upper_bound_thm1(1, 1, GateProfile.relu()) == 1.0

    def test_general_profile_upper_bound(self):
        assert entropy_upper_bound_thm1(2, 4, GateProfile(2, 1, 1)) == 8.0

    def test_lap_bounds(self):
        relu = GateProfile.relu()
        assert lap_bound_thm1(1, 2, relu) == 8
        assert lap_bound_thm1(2, 2, relu) == 32
        assert lap_bound_thm1(1, 1, relu) == 4

    def test_lap_bound_with_degree(self):
        assert lap_bound_thm1(2, 1, GateProfile(1, 1, 2)) == 2 * 4 * 2**8

    def test_width_formula(self):
        relu = GateProfile.relu()
        assert width_lower_bound_thm2(1.0, 1, relu, 1) == pytest.approx(2**-0.5)
        assert width_lower_bound_thm2(1.0, 2, relu, 20) == 16.0

    def test_width_needs_positive_entropy(self):
        with pytest.raises(NonPositiveEntropy):
            width_lower_bound_thm2(0.0, 1, GateProfile.relu())
        with pytest.raises(NonPositiveEntropy):
            width_lower_bound_thm2(float("inf"), 1, GateProfile.relu())


class TestBoundReport:
    def test_tent_network(self, t2):
        rep = bound_report(parse_network(TENT_NET_JSON), 0, 1, 2)
        assert rep.measured_laps == 2 <= rep.lap_bound == 8
        assert rep.bracket.lower_bits == 1.0 <= rep.entropy_upper_bits == 2.0
        assert rep.satisfied

    def test_identity_affine_network(self):
        net = parse_network('{"layers":[{"weights":[["1"]],"biases":["0"],"gate":"identity"}]}')
        rep = bound_report(net, 0, 1, 2)
        assert rep.depth == 0
        assert rep.measured_laps == 1 <= rep.lap_bound
        assert rep.bracket.lower_bits == 0.0 <= rep.entropy_upper_bits == 0.0
        assert rep.satisfied

    def test_fuzzed_soundness_small(self):
        rng = random.Random(331)
        for _ in range(40):
            net = random_relu_net(rng)
            g = network_to_pwl(net, 0, 1, clamp_output=True)
            laps = lap_count(g).count
            assert laps <= lap_bound_thm1(net.depth, net.width, GateProfile.relu())
            b = entropy_bracket(g, 2)
            bound = entropy_upper_bound_thm1(net.depth, net.width, GateProfile.relu())
            assert b.lower_bits <= bound
            assert b.lower_bits <= math.log2(laps) + 1e-12 if laps > 1 else b.lower_bits == 0.0
