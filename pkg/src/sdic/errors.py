"""Exception taxonomy for the toolkit.

Domain errors (everything deriving from :class:`SdicError`) map to exit
code 2 in the CLI with a machine-readable JSON body on stderr.
"""


class SdicError(Exception):
    """Base class for all toolkit domain errors."""


class InvalidParams(SdicError, ValueError):
    """Channel parameters violate their constraints (powers, |rho|<=1, ...)."""


class UnknownVariable(SdicError, KeyError):
    """A referenced variable name is not defined in the scene."""

    def __str__(self):  # KeyError quotes its payload; keep the message plain
        return self.args[0] if self.args else ""


class DegenerateCovariance(SdicError):
    """Covariance determinant at or below the singularity threshold.

    Signals linearly dependent variables, i.e. differential entropy -inf.
    """

    def __init__(self, message, det=None, threshold=None):
        super().__init__(message)
        self.det = det
        self.threshold = threshold


class InvalidZIC(SdicError, ValueError):
    """Z channel requested with a nonzero receiver-2 cross gain."""


class BadSplit(SdicError, ValueError):
    """Power split outside [0, P1]."""


class WrongRegime(SdicError):
    """Operation invoked outside the interference regime it is proved for."""


class SingularDenominator(SdicError):
    """Coefficient system denominator too close to zero to solve."""


class BadFactorization(SdicError, ValueError):
    """Auxiliary variable loads on basis components its factorization forbids."""


class OrderingViolated(SdicError):
    """Receiver power ordering assumption violated; swap transmitter roles manually."""


class GateViolated(SdicError):
    """Cross-decoding gate inequality fails for the supplied auxiliaries."""

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
        #: signed slack, >= 0 iff the gate holds
        self.slack = None if (lhs is None or rhs is None) else rhs - lhs


class InternalInconsistency(SdicError):
    """Two mathematically equivalent evaluation routes disagreed."""


class UsageError(SdicError, ValueError):
    """Bad command line or config input; CLI exit code 1."""
