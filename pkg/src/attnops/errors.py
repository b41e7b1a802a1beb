"""Exception types shared across the package."""


class AttnOpsError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(AttnOpsError, ValueError):
    """Operand shapes do not conform."""


class NotSquare(DimensionMismatch):
    """A square matrix was required."""


class NonFiniteInput(AttnOpsError, ValueError):
    """An operand (or a result) contains NaN or Inf."""


class ComplexNotSupported(AttnOpsError, TypeError):
    """The operation is defined for real scalars only."""


class DegenerateNormalizer(AttnOpsError, ArithmeticError):
    """A trace / diagonal / row-sum normalizer fell below its threshold."""


class DegenerateDenominator(AttnOpsError, ArithmeticError):
    """A kernel-attention row denominator fell below its threshold."""


class SingularDenominator(AttnOpsError, ArithmeticError):
    """The rational-approximant denominator is numerically singular."""


class DvMismatch(AttnOpsError, ValueError):
    """The value width must equal the model width for this operation."""


class UnknownVariant(AttnOpsError, KeyError):
    """Variant id is not registered."""


class ShapeTooLarge(AttnOpsError, ValueError):
    """Inputs exceed the size bound of a brute-force check."""
