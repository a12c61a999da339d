"""Exception hierarchy shared by every zerohull module."""


class ZeroHullError(Exception):
    """Base class for all zerohull failures."""


class DegenerateInputError(ZeroHullError, ValueError):
    """Input is empty or affinely rank-deficient where full rank is required."""


class GeneralPositionError(ZeroHullError):
    """A fast path or construction needs z in general position w.r.t. S."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OracleCapExceeded(ZeroHullError):
    def __init__(self, size, cap):
        super().__init__(
            f"subset scan over |S| = {size} exceeds the oracle cap {cap} "
            f"(raise it with --oracle-cap)"
        )
        self.size = size
        self.cap = cap


class PreconditionError(ZeroHullError, ValueError):
    """Arguments to a construction do not satisfy its hypotheses."""


class CertificateError(ZeroHullError, AssertionError):
    """A constructed certificate failed its exact re-check. Always a bug."""


class InstanceFormatError(ZeroHullError, ValueError):
    """Malformed instance or report file."""


class GenerationBudgetExceeded(ZeroHullError):
    def __init__(self, seed, attempts):
        super().__init__(f"rejection budget of {attempts} attempts exhausted for seed {seed}")
        self.seed = seed
        self.attempts = attempts
