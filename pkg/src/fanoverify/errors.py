"""Exception types raised by the library."""


class FanoVerifyError(Exception):
    """Base class for all library errors."""


class DivisionByZero(FanoVerifyError, ZeroDivisionError):
    pass


class AllZero(FanoVerifyError, ValueError):
    pass


class NotSurjective(FanoVerifyError, ValueError):
    pass


class CapExceeded(FanoVerifyError, RuntimeError):
    pass


class SectionVanishes(FanoVerifyError, ValueError):
    pass


class DuplicatePoint(FanoVerifyError, ValueError):
    pass


class ZeroDirection(FanoVerifyError, ValueError):
    pass


class CurveNotOnHypersurface(FanoVerifyError, ValueError):
    pass


class SingularPoint(FanoVerifyError, ValueError):
    pass


class NotImmersion(FanoVerifyError, ValueError):
    pass


class DirectionTangentToLine(FanoVerifyError, ValueError):
    pass


class DirectionNotInTangentSpace(FanoVerifyError, ValueError):
    pass


class OutOfRange(FanoVerifyError, ValueError):
    pass


class InconsistentMarking(FanoVerifyError, ValueError):
    pass


class EmptySystem(FanoVerifyError, ValueError):
    pass


class PreconditionFailed(FanoVerifyError, ValueError):
    pass


class NonTransversalNode(FanoVerifyError, ValueError):
    pass
