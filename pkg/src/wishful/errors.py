"""Exception types raised by the solver stack."""


class InputError(ValueError):
    """Invalid problem data (shapes, probability vectors, delta, file contents)."""


class SolverError(RuntimeError):
    """The dual solve could not produce a trustworthy answer."""


class EnumerationBoundError(InputError):
    """The brute-force oracle was asked for more states or grid points than it enumerates."""
