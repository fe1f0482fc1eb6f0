"""Exception types raised by the qvolume numerics."""


class QVolumeError(Exception):
    """Base class for qvolume errors."""


class DegenerateInputError(QVolumeError, ValueError):
    """Input outside the range where the construction is defined."""


class BranchCutError(QVolumeError, ValueError):
    """Evaluation requested on a declared cut without a side."""


class ConvergenceError(QVolumeError, RuntimeError):
    """An iterative or adaptive procedure did not reach its tolerance."""

    def __init__(self, message, detail=None):
        super(ConvergenceError, self).__init__(message)
        self.detail = detail
