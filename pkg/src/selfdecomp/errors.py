"""Exception hierarchy. Every error raised by the package derives from ``SelfDecompError``."""


class SelfDecompError(Exception):
    pass


class NonConvergent(SelfDecompError):
    """The integral of min(x^2, 1) against the Levy density diverges."""


class QuadratureFailure(SelfDecompError):
    """Adaptive quadrature did not reach the requested tolerance."""


class DerivativeOrderUnavailable(SelfDecompError):
    """A closed-form chain was asked for a level it does not store."""


class UnknownDistribution(SelfDecompError, KeyError):
    pass


class InvalidParam(SelfDecompError, ValueError):
    pass


class InvalidSequence(SelfDecompError, ValueError):
    """A Laplace coefficient sequence whose squares do not appear summable."""


class DomainError(SelfDecompError, ValueError):
    pass


class TailUnknown(SelfDecompError):
    """Tail correction requested but no analytic tail variance is known."""
