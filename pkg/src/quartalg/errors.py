"""Exception hierarchy.

Computation errors map to CLI exit code 2, input errors to exit code 3.
"""


class ComputationError(RuntimeError):
    """A numerical routine could not produce a trustworthy answer."""


class CommonComponentError(ComputationError):
    pass


class SolverFailure(ComputationError):
    pass


class DegenerateError(ComputationError):
    """Input lies outside the general-position regime."""


class InconsistentSystemError(ComputationError):
    pass


class InputError(ValueError):
    """Malformed or invalid user input."""
