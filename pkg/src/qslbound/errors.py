"""Exception hierarchy shared by every layer of the package."""


class QslError(Exception):
    """Base class for all errors raised by qslbound.

    ``t`` records the evaluation time at which the failure occurred, when known.
    """

    t: float | None = None

    def __str__(self):
        msg = super().__str__()
        return msg if self.t is None else f"{msg} [t={self.t!r}]"


def attach_time(exc: BaseException, t: float) -> BaseException:
    """Record ``t`` on a QslError that does not carry a time yet."""
    if isinstance(exc, QslError) and exc.t is None:
        exc.t = t
    return exc


class DegenerateCoupling(QslError, ZeroDivisionError):
    pass


class IndexOutOfRange(QslError, IndexError):
    pass


class NonConvergence(QslError, ArithmeticError):
    pass


class StepUnderflow(QslError, ArithmeticError):
    pass


class NotHermitian(QslError, ValueError):
    pass


class NotPositive(QslError, ValueError):
    pass


class OutOfDomain(QslError, ValueError):
    pass


class QuadratureFailure(QslError, ArithmeticError):
    pass


class ZeroDenominator(QslError, ZeroDivisionError):
    pass


class DiagonalizationFailure(QslError, ArithmeticError):
    pass


class OracleMismatch(QslError, AssertionError):
    """Analytic pipeline and brute-force propagation disagree."""
