"""Exception hierarchy. Every error raised by the package derives from CheegerKitError."""


class CheegerKitError(Exception):
    pass


# graph construction
class DimensionMismatch(CheegerKitError, ValueError):
    pass


class ZeroDegree(CheegerKitError, ValueError):
    pass


class NegativePotentialUnsupported(CheegerKitError, ValueError):
    pass


class SelfLoop(CheegerKitError, ValueError):
    pass


class DuplicateEdge(CheegerKitError, ValueError):
    pass


# stoquasticity
class NotHermitian(CheegerKitError, ValueError):
    pass


class BrokenCycle(CheegerKitError, ValueError):
    pass


class DisconnectedSupport(CheegerKitError, ValueError):
    pass


class ZeroAmplitude(CheegerKitError, ValueError):
    pass


# spectral
class NotSymmetric(CheegerKitError, ValueError):
    pass


class ConvergenceFailure(CheegerKitError, RuntimeError):
    pass


class ZeroVector(CheegerKitError, ValueError):
    pass


class EmptySubset(CheegerKitError, ValueError):
    pass


class NotOrthogonal(CheegerKitError, ValueError):
    pass


class ZeroDenominator(CheegerKitError, ValueError):
    pass


class DegenerateGround(CheegerKitError, ValueError):
    pass


# cheeger
class TooLarge(CheegerKitError, ValueError):
    pass


class ConstantFunction(CheegerKitError, ValueError):
    pass


class ImproperCut(CheegerKitError, ValueError):
    pass


# routing
class RoutingInvalid(CheegerKitError, ValueError):
    pass


class IncompleteCover(RoutingInvalid):
    pass


class MassMismatch(RoutingInvalid):
    pass


class PathLeavesPositive(RoutingInvalid):
    pass


class NonPositiveResidual(RoutingInvalid):
    def __init__(self, message, edge=None, residual=None):
        super().__init__(message)
        self.edge = edge
        self.residual = residual


class OverlappingPaths(RoutingInvalid):
    pass


class ResidualNegative(RoutingInvalid):
    pass


class RoutingInfeasible(CheegerKitError, RuntimeError):
    def __init__(self, message, best_residual=float("-inf")):
        super().__init__(message)
        self.best_residual = best_residual


# bounds
class NotStoquastic(CheegerKitError, ValueError):
    pass


# adiabatic simulation
class StepTooLarge(CheegerKitError, RuntimeError):
    pass


class GapCollapse(CheegerKitError, RuntimeError):
    """The gap bound fell below the floor; ``run`` holds the partial trace."""

    def __init__(self, message, run=None):
        super().__init__(message)
        self.run = run


class AllMassOneVertex(CheegerKitError, ValueError):
    pass


# problem files
class ProblemSyntaxError(CheegerKitError, ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class BadHeader(CheegerKitError, ValueError):
    pass
