"""Exception types shared across the package."""


class InvalidSiteError(ValueError):
    """Site index outside the lattice or off the allowed sublattice."""


class GeometryError(ValueError):
    """Block grid or region layout does not tile the lattice."""


class InfeasiblePlanError(ValueError):
    """Requested event counts cannot be realized (negative or over capacity)."""


class DimensionMismatchError(ValueError):
    """Two objects live on different lattices or grids."""


class NormalizationError(ValueError):
    """Wave norm differs from one beyond the allowed tolerance."""


class RangeOverflowError(ValueError):
    """Evolution requested past the time range covered by the disorder field."""


class OversizedKernelError(ValueError):
    """Smoothing kernel support exceeds the circle."""


class NonUnitaryError(RuntimeError):
    """Step product failed the unitarity diagnostic."""
