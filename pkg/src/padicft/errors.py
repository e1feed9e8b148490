"""Typed errors shared by the whole package.

The CLI maps these onto exit codes: scene/flag parsing problems exit 2,
evaluator errors exit 3, failed verification suites exit 4.
"""


class PadicFTError(Exception):
    """Base class for all package errors."""


class SceneParseError(PadicFTError):
    """A scene file (or CLI argument) could not be parsed strictly."""


class EvaluatorError(PadicFTError):
    """Base class for errors raised while evaluating integrals or sums."""


class LevelExceeded(EvaluatorError):
    """A character or root of unity would need conductor beyond max_level."""


class NotAUnit(EvaluatorError):
    """Modular inverse requested for an element divisible by p."""


class Divergent(EvaluatorError):
    """A weight integral diverges (pole of order >= 1 on the divisor)."""


class DivisorTouched(EvaluatorError):
    """Inverse-phase Riemann sum over a cube that meets the divisor."""


class BudgetExceeded(EvaluatorError):
    """An enumeration or sampling budget was exhausted."""


class GeometryError(PadicFTError):
    """Base class for conic-set calculus errors."""


class MalformedStratum(GeometryError):
    """Stratum data does not fit the ambient space."""


class UnsupportedMap(GeometryError):
    """Pushforward requested along a map that is not a coordinate projection."""


class DimensionMismatch(GeometryError):
    """Point or covector has the wrong dimension for the ambient."""


class DegreeTooHigh(PadicFTError):
    """Elimination problem outside the supported desk-scale range."""


class DegenerateParametrization(PadicFTError):
    """Curve parametrization degenerate: tangency locus is the whole space."""


class ZeroFrequency(PadicFTError):
    """Smooth-locus membership queried at the origin of the dual space."""
