"""Exception hierarchy shared by every module.

Each error carries a stable ``code`` (the class name) so the command line
front end can emit a machine-readable error object.
"""


class LoopRateError(Exception):
    """Base class for all package errors."""

    @property
    def code(self):
        return type(self).__name__


# graph construction and embedding
class DisconnectedGraph(LoopRateError):
    pass


class SelfLoop(LoopRateError):
    pass


class NonPositiveWeight(LoopRateError):
    pass


class UnknownEndpoint(LoopRateError):
    pass


class IncompleteRotation(LoopRateError):
    pass


class NonPlanarRotation(LoopRateError):
    pass


class BridgePresent(LoopRateError):
    pass


class EmptyMergeSet(LoopRateError):
    pass


# linear algebra
class NonSquare(LoopRateError):
    pass


class Singular(LoopRateError):
    pass


class IndexOutOfRange(LoopRateError):
    pass


# counting
class KOutOfRange(LoopRateError):
    pass


class TooLarge(LoopRateError):
    pass


class NoUnicycle(LoopRateError):
    pass


# sampling
class UnreachableTarget(LoopRateError):
    pass


class PreconditionFailed(LoopRateError):
    pass


# sandpiles
class VertexStable(LoopRateError):
    pass


class Unstable(LoopRateError):
    pass


class NotATree(LoopRateError):
    pass


class NotRecurrent(LoopRateError):
    pass


class NonIntegerWeight(LoopRateError):
    pass


# lattices
class UnknownLattice(LoopRateError):
    pass


class NonPositiveBeta(LoopRateError):
    pass


class QuadratureNotConverged(LoopRateError):
    pass


class MissingKernel(LoopRateError):
    pass
