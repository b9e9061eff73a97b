"""Exception hierarchy for the tame algebra toolkit."""


class TameAlgebraError(ValueError):
    """Base class for every input or precondition failure."""


class DimensionError(TameAlgebraError):
    """Ambient ranks do not match or exceed the configured maximum."""


class RankError(TameAlgebraError):
    """Generators do not span a full-rank subgroup."""


class ContainmentError(TameAlgebraError):
    """A subgroup relation required by the operation does not hold."""


class FieldContainmentError(TameAlgebraError):
    """An abelian field is not contained in the field it should sit in."""


class CoprimalityError(TameAlgebraError):
    """Orders that must be coprime share a prime factor."""


class PreconditionError(TameAlgebraError):
    """An operation was called outside the situation it is defined for."""


class InfeasibleTargetError(TameAlgebraError):
    """Prescribed local indices cannot be realized."""

    def __init__(self, place, message: str):
        super().__init__(f"{place}: {message}")
        self.place = place


class StructuralError(TameAlgebraError):
    """No admissible subgroup exists for a requested construction."""


class NonMaximalError(TameAlgebraError):
    """A subfield skeleton that must be maximal is not."""


class BoundError(TameAlgebraError):
    """A bounded scan ran out before the construction could finish."""


class SkeletonValidationError(TameAlgebraError):
    """A skeleton violates one or more of its defining identities."""

    def __init__(self, report):
        lines = "; ".join(f"{v.identity}: {v.message}" for v in report.violations)
        super().__init__(f"invalid skeleton ({lines})")
        self.report = report


class DocumentError(TameAlgebraError):
    """A document could not be parsed; `position` locates the problem."""

    def __init__(self, position: str, message: str):
        super().__init__(f"{position}: {message}")
        self.position = position


class OracleBoundError(TameAlgebraError):
    """A brute-force oracle was asked for more than it can enumerate."""
