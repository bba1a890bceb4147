"""Error taxonomy shared by all solvers.

The CLI maps these onto exit codes: ValidationError -> 2, everything
derived from SolverError -> 3.
"""


class ValidationError(ValueError):
    """Bad user input: non-finite field, negative coupling, unknown key."""


class SolverError(RuntimeError):
    """A numerical routine failed to converge or to bracket a root."""


class AccuracyError(SolverError):
    """Requested tolerance not reached; carries the achieved error estimate."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
