"""Exact piecewise-linear interval dynamics with certified entropy brackets.

The core objects are exact rational scalars (:mod:`pwlent.rationals`) and
continuous piecewise-linear self-maps (:mod:`pwlent.pwl`).  On top of
those sit combinatorial map statistics (:mod:`pwlent.analysis`),
certified entropy brackets and rate diagnostics (:mod:`pwlent.entropy`),
exact periodic-orbit inventories (:mod:`pwlent.periods`), one-input
rational-weight networks with structure-parameter bounds
(:mod:`pwlent.networks`), the worked example maps
(:mod:`pwlent.catalog`), and a reporting CLI (:mod:`pwlent.cli`).
"""

from .analysis import (
    CrossingReport,
    LapDecomposition,
    crossing_count,
    lap_count,
    lipschitz,
    max_crossing,
    variation,
)
from .catalog import (
    SampledMap,
    logistic,
    sampled_lap_count,
    staircase,
    tent,
    zigzag,
)
from .entropy import (
    EntropyBracket,
    Horseshoe,
    RateSequences,
    constant_slope_entropy,
    entropy_bracket,
    horseshoe_search,
    lap_upper_sequence,
    rate_sequences,
)
from .networks import (
    BoundReport,
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
from .periods import (
    PeriodSet,
    PeriodicPoints,
    minimal_periods,
    periodic_points,
    positive_entropy_witness,
    sharkovsky_consistency,
    sharkovsky_less,
)
from .pwl import (
    Homeomorphism,
    PwlMap,
    clamp,
    compose,
    conjugate,
    identity_map,
    iterate,
    iterates,
    linf_distance,
    make_pwl,
    map_from_json,
    map_to_json,
)
from .rationals import Rational, format_rational, parse_rational, rat

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CrossingReport",
    "EntropyBracket",
    "GateProfile",
    "Homeomorphism",
    "Horseshoe",
    "LapDecomposition",
    "Layer",
    "NeuralNet",
    "PeriodSet",
    "PeriodicPoints",
    "PwlMap",
    "Rational",
    "RateSequences",
    "SampledMap",
    "bound_report",
    "clamp",
    "compile_tent_power",
    "compose",
    "conjugate",
    "constant_slope_entropy",
    "crossing_count",
    "entropy_bracket",
    "entropy_upper_bound_thm1",
    "format_rational",
    "horseshoe_search",
    "identity_map",
    "iterate",
    "iterates",
    "lap_bound_thm1",
    "lap_count",
    "lap_upper_sequence",
    "linf_distance",
    "lipschitz",
    "logistic",
    "make_pwl",
    "map_from_json",
    "map_to_json",
    "max_crossing",
    "minimal_periods",
    "network_to_pwl",
    "parse_network",
    "parse_rational",
    "periodic_points",
    "positive_entropy_witness",
    "rat",
    "rate_sequences",
    "sampled_lap_count",
    "sharkovsky_consistency",
    "sharkovsky_less",
    "staircase",
    "tent",
    "variation",
    "width_lower_bound_thm2",
    "zigzag",
]
