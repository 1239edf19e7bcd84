"""Exception hierarchy. Every failure carries the name of the operation
that raised it (``op``), which the CLI surfaces in its error messages."""


class ModelError(Exception):
    """Base class for domain and model failures."""

    def __init__(self, message, op=None):
        super().__init__(message)
        self.op = op


class DomainError(ModelError, ValueError):
    """Input outside the operation's domain (negative temperature, ...)."""


class UnsupportedRegimeError(ModelError):
    """Physically meaningful regime that the model deliberately omits."""


class StubResonanceError(ModelError):
    """A stub sits at a tan() pole; carries the offending frequency if known."""

    def __init__(self, message, op=None, frequency=None, stub_len=None):
        super().__init__(message, op=op)
        self.frequency = frequency
        self.stub_len = stub_len


class SweepError(ModelError):
    """One or more sweep points failed; ``failures`` is [(frequency, error)]."""

    def __init__(self, message, op=None, failures=()):
        super().__init__(message, op=op)
        self.failures = list(failures)


class FitConvergenceError(ModelError):
    """Optimizer hit its iteration cap; carries the best point found so far."""

    def __init__(self, message, op=None, best=None, best_value=None):
        super().__init__(message, op=op)
        self.best = best
        self.best_value = best_value


class NonFiniteObjectiveError(ModelError):
    """Objective returned NaN/inf mid-run; carries the offending point."""

    def __init__(self, message, op=None, point=None):
        super().__init__(message, op=op)
        self.point = point


class SpectrumFormatError(ModelError):
    """Malformed spectrum file; ``line`` is the 1-based offending line."""

    def __init__(self, message, op=None, line=None):
        super().__init__(message, op=op)
        self.line = line
