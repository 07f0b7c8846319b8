"""Exception hierarchy shared across the package."""


class GgmError(Exception):
    """Base class for all ggmrecon errors."""


class NotPositiveDefinite(GgmError):
    """A matrix required to be symmetric positive definite is not."""


class ZeroVariance(GgmError):
    """A data column has zero sample variance."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} has zero sample variance")


class OutOfRange(GgmError):
    """A scalar argument lies outside its mathematical domain."""


class NonpositiveDiagonal(GgmError):
    """A matrix needs a strictly positive diagonal but does not have one."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"diagonal entry {index} is {value!r}, expected > 0")


class InvalidProbability(GgmError):
    """A probability parameter lies outside [0, 1]."""


class InvalidM(GgmError):
    """Invalid attachment count for the preferential-attachment generator."""


class InvalidK(GgmError):
    """Invalid neighbor count for the ring-lattice generator."""


class InsufficientSamples(GgmError):
    """Too few samples for the requested test (degrees of freedom < 1)."""


class SingularLocalCovariance(GgmError):
    """A local covariance submatrix could not be inverted."""


class DimensionMismatch(GgmError):
    """Two objects that must share dimensions do not."""


class GridMismatch(GgmError):
    """Curves being combined were computed on different parameter grids."""


class EmptyCurve(GgmError):
    """An ROC curve has no valid points to integrate."""


class EmptySweep(GgmError):
    """A threshold-selection sweep contained no entries."""


class LoadError(GgmError):
    """Base class for file-ingestion failures."""


class RaggedRow(LoadError):
    """A CSV row has a different number of cells than the header."""

    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        super().__init__(f"row {row} has {got} cells, expected {expected}")


class NonNumericCell(LoadError):
    """A CSV body cell could not be parsed as a finite number."""

    def __init__(self, row: int, col: int, text: str = ""):
        self.row = row
        self.col = col
        super().__init__(f"cell ({row}, {col}) is not a finite number: {text!r}")


class TooFewSamples(LoadError):
    """A loaded data matrix has fewer than two sample rows."""
