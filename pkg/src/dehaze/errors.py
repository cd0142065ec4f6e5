"""Exception types shared across the package.

File-not-found and filesystem failures use the Python builtins
(FileNotFoundError, OSError); bad argument values raise ValueError.
Everything domain-specific derives from DehazeError.
"""


class DehazeError(Exception):
    """Base class for dehazing-specific failures."""


class DecodeError(DehazeError):
    """File exists but cannot be decoded as a supported image."""


class ShapeError(DehazeError):
    """Array arguments have incompatible or unsupported shapes."""


class DegenerateImageError(DehazeError):
    """Operation undefined on a constant image (zero dynamic range)."""


class SizeGuardError(DehazeError):
    """Input exceeds a hard size guard on an O(N^2)-memory path."""


class SolverError(DehazeError):
    """Linear solver failed to reach its tolerance within the iteration cap."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
