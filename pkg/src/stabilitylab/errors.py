"""Exception hierarchy shared by all modules.

Argument-level problems (bad inputs, dimension mismatches) raise
:class:`ArgumentError` subclasses and map to CLI exit code 2.  Resource
limits raise :class:`CapacityError` and map to exit code 3.
"""


class StabilityLabError(Exception):
    pass


class ArgumentError(StabilityLabError, ValueError):
    """Invalid input supplied by the caller."""


class DimensionError(ArgumentError):
    """Shape or dimension mismatch."""


class NonAutomorphismError(ArgumentError):
    """Integer matrix with determinant different from +-1."""


class SingularFixedSetError(ArgumentError):
    """A^n - I singular: the fixed-point set is not isolated."""


class TableError(ArgumentError):
    """Malformed multiplication or character table."""


class CapacityError(StabilityLabError, RuntimeError):
    """A configured cap (enumeration, degree, order, ...) was exceeded."""
