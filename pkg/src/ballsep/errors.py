"""Exception and warning classes raised across the package."""


class BallsepError(Exception):
    """Base class for every error raised by ballsep."""


class DimensionError(BallsepError, ValueError):
    pass


class GeneralPositionError(BallsepError):
    pass


class RankError(BallsepError, IndexError):
    pass


class PermutationError(BallsepError, ValueError):
    pass


class PrimalityError(BallsepError, ValueError):
    pass


class DomainError(BallsepError, ValueError):
    pass


class ConditionError(BallsepError, ValueError):
    """Separator parameters fail one of the two feasibility inequalities."""

    def __init__(self, message, lhs, rhs):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs


class Condition1Violated(ConditionError):
    pass


class Condition2Violated(ConditionError):
    pass


class WidthError(BallsepError, ValueError):
    pass


class NoProgressError(BallsepError):
    pass


class DegenerateError(BallsepError, ValueError):
    pass


class SpacingError(BallsepError, ValueError):
    pass


class ParseError(BallsepError, ValueError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DisjointnessError(BallsepError, ValueError):
    def __init__(self, id_a, id_b, distance):
        super().__init__(
            f"balls {id_a} and {id_b} overlap: center distance {distance!r} < 2")
        self.id_a = id_a
        self.id_b = id_b
        self.distance = distance


class FallbackWarning(UserWarning):
    """No direction reached the spread threshold; the result carries no cut bound."""
