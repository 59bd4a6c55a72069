"""Exception types shared across the package."""


class BVOscError(Exception):
    """Base class for all package errors."""


class DomainError(BVOscError, ValueError):
    """Cube or point lies (partly) outside the function's domain."""


class DegenerateCubeError(BVOscError, ValueError):
    """Cube or interval with non-positive sidelength."""


class ZeroVariationError(BVOscError, ValueError):
    """Operation requires |Df|(Q) > 0 (Poincare quotient, rescaling, perimeter)."""


class LatticeTooLargeError(BVOscError, ValueError):
    """Candidate lattice exceeds the configured cap; coarsen the step or lower eps."""


class NotConvergedError(BVOscError, ValueError):
    """A converged tangent candidate was required but the input never met the gap tolerance."""


class SpecFormatError(BVOscError, ValueError):
    """Malformed function-spec JSON; message names the offending field."""
