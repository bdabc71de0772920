"""Exception hierarchy.

Two families: ``ValidationError`` for malformed input or violated
preconditions (CLI exit code 2), ``NumericalError`` for solver breakdowns
(CLI exit code 3).
"""


class GraphKamError(Exception):
    pass


class ValidationError(GraphKamError):
    pass


class NumericalError(GraphKamError):
    pass


# graph construction and homology
class LoopEdge(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class DuplicateName(ValidationError):
    pass


class UnknownVertex(ValidationError):
    pass


class UnknownEdge(ValidationError):
    pass


class NotACycle(ValidationError):
    pass


# parametrized paths and measures
class BadConcatenation(ValidationError):
    pass


class ZeroSpeedOpenPath(ValidationError):
    pass


class ConsecutiveEquilibria(ValidationError):
    pass


class SkeletonBreak(ValidationError):
    pass


class BadTime(ValidationError):
    pass


class BadMeasure(ValidationError):
    pass


class NotClosed(ValidationError):
    pass


class MultiAtomEdge(ValidationError):
    pass


# Hamiltonians / weak KAM
class BelowFloor(ValidationError):
    pass


class NoSubsolution(ValidationError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class CircuitCapExceeded(NumericalError):
    pass
