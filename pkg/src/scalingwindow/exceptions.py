"""Exception types raised across the package."""


class ScalingWindowError(Exception):
    """Base class for all package errors."""


class ZeroDegree(ScalingWindowError, ValueError):
    """A vertex of degree 0 was supplied."""


class OddSum(ScalingWindowError, ValueError):
    """The degree sum is odd, so no (multi)graph realizes the sequence."""


class Infeasible(ScalingWindowError, ValueError):
    """A degree-family builder cannot satisfy its parameters."""


class PreconditionError(ScalingWindowError, ValueError):
    """An operation was called outside its documented domain."""


class ViolatedIdentity(ScalingWindowError, AssertionError):
    """One of the degree-sequence identities failed; indicates an arithmetic bug."""

    def __init__(self, name, detail=""):
        self.name = name
        super().__init__(f"{name} violated {detail}".strip())


class Exhausted(ScalingWindowError, RuntimeError):
    """Rejection sampling hit its attempt budget without a simple graph."""

    def __init__(self, max_attempts):
        self.max_attempts = max_attempts
        super().__init__(f"no simple configuration after {max_attempts} attempts")


class TooLarge(ScalingWindowError, ValueError):
    """An exhaustive oracle was asked for an instance beyond its size bound."""


class OverlappingPairs(ScalingWindowError, ValueError):
    """Copy pairs passed to the pair-join oracle share a vertex-copy."""


class Halted(ScalingWindowError, RuntimeError):
    """The exploration has matched every vertex-copy."""


class Degenerate(ScalingWindowError, ValueError):
    """A regression has no spread in its abscissa."""
