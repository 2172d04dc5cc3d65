"""Exception hierarchy shared across the package.

Every exception derives from PwlentError so callers can catch the whole
family; most also derive from ValueError because they signal bad inputs.
"""


class PwlentError(Exception):
    """Base class for all pwlent errors."""


class UnsortedBreakpoints(PwlentError, ValueError):
    """Breakpoint list is not strictly increasing."""


class LengthMismatch(PwlentError, ValueError):
    """Breakpoint and value lists have different lengths (or are empty)."""


class DomainMismatch(PwlentError, ValueError):
    """Endpoints disagree with the declared domain, or domains differ."""


class OutOfDomain(PwlentError, ValueError):
    """Evaluation point lies outside the map's domain."""


class RangeEscapesDomain(PwlentError, ValueError):
    """Inner map's range is not contained in the outer map's domain."""


class NotSelfMap(PwlentError, ValueError):
    """Operation requires a self-map of its interval."""


class NotBijective(PwlentError, ValueError):
    """Candidate conjugacy is not strictly monotone onto its target."""


class InvalidInterval(PwlentError, ValueError):
    """Interval bounds are not ordered (x >= y)."""


class NotConstantSlope(PwlentError, ValueError):
    """Map does not have a single absolute slope on all pieces."""


class NonPositiveEntropy(PwlentError, ValueError):
    """Width certificates require positive, finite entropy."""


class ParameterOutOfRange(PwlentError, ValueError):
    """Catalog parameter outside its admissible range."""


class NoConvergence(PwlentError, RuntimeError):
    """Sampled estimate failed to stabilise under grid refinement."""


class ResourceLimit(PwlentError, RuntimeError):
    """Segment-count ceiling exceeded while iterating a map."""

    def __init__(self, message, completed_k=0):
        super().__init__(message)
        self.completed_k = completed_k


class MalformedInput(PwlentError, ValueError):
    """Input file or description misses required structure."""


class DimensionMismatch(PwlentError, ValueError):
    """Adjacent network layers have incompatible dimensions."""


class NonRationalWeight(PwlentError, ValueError):
    """Network weight or map coordinate is not an exact rational."""


class UnsupportedGate(PwlentError, ValueError):
    """Gate name outside the evaluable set {relu, max, identity}."""
