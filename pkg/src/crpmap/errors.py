"""Exception types shared across the package.

The CLI maps these onto exit codes: config/usage problems -> 2,
capacity guards -> 3, numerical failures -> 4.
"""


class CrpMapError(Exception):
    """Base class for package-specific errors."""


class InvalidPartitionError(CrpMapError, ValueError):
    """Blocks are empty, overlap, or fail to cover the index set."""


class DimensionError(CrpMapError, ValueError):
    """Input dimensions disagree, or an operation does not support this d."""


class CapacityError(CrpMapError, RuntimeError):
    """A hard size guard was hit (exhaustive enumeration, permutation search)."""


class NumericalError(CrpMapError, RuntimeError):
    """A numerical precondition failed."""


class NotSPDError(NumericalError):
    """A matrix required to be symmetric positive-definite is not."""


class DegenerateRegionError(NumericalError):
    """A region carries (numerically) zero probability."""


class CoverageError(CrpMapError, ValueError):
    """A point fell outside every region, or region masses fail to sum to 1."""


class ConfigError(CrpMapError, ValueError):
    """A config file or CLI argument could not be interpreted."""
