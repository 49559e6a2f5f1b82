"""Exception hierarchy shared by all qwalk modules."""


class QWalkError(Exception):
    """Base class for every error raised by qwalk."""


class ZeroDivisor(QWalkError, ZeroDivisionError):
    pass


class QuaternionParseError(QWalkError, ValueError):
    pass


class NonSquare(QWalkError, ValueError):
    pass


class NoConvergence(QWalkError, ArithmeticError):
    pass


class InconsistentSamples(QWalkError, ArithmeticError):
    pass


class PairingFailure(QWalkError, ArithmeticError):
    pass


class ParseError(QWalkError, ValueError):
    pass


class LoopEdge(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class Disconnected(QWalkError, ValueError):
    pass


class MissingWeight(QWalkError, KeyError):
    def __str__(self):
        # KeyError would repr() the message otherwise
        return str(self.args[0]) if self.args else ""


class InconsistentWeights(QWalkError, ValueError):
    pass


class ConditionViolated(QWalkError, ValueError):
    """The coin does not satisfy ``sum_{o(e)=u} q(e) == alpha`` for every vertex."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class TreeCancellationFailure(QWalkError, ArithmeticError):
    pass
