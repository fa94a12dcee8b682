"""Exception hierarchy for the solver."""


class TevError(Exception):
    """Base class for all tevsolve errors."""


class ConfigError(TevError):
    """Invalid configuration, CLI arguments, or operation preconditions."""


class NumericalError(TevError):
    """Base class for runtime numerical failures."""


class RangeError(NumericalError):
    """Argument outside the supported range of a special function."""


class SingularityError(NumericalError):
    """Evaluation too close to a kernel singularity."""


class SingularMatrix(NumericalError):
    """LU factorization hit a pivot below the singularity tolerance."""

    def __init__(self, pivot_index: int, pivot: float, tol: float):
        self.pivot_index = pivot_index
        self.pivot = pivot
        self.tol = tol
        super().__init__(
            f"matrix singular to tolerance: |pivot[{pivot_index}]| = {pivot:.3e} <= {tol:.3e}"
        )


class NumericalFailure(NumericalError):
    """Iterative linear-algebra kernel failed to converge."""


class GeometryError(TevError):
    """Boundary curve is degenerate (irregular, self-touching, or misoriented)."""


class PoleError(NumericalError):
    """Evaluation at or too close to a pole of an analytic symbol."""


class InteriorResonance(NumericalError):
    """A boundary single-layer operator is singular: the wavenumber sits on an
    interior Dirichlet eigenvalue, where the single-layer representation breaks
    down.  Shift the contour or wavenumber away from the resonance."""

    def __init__(self, wavenumber: complex):
        self.wavenumber = wavenumber
        super().__init__(f"single-layer operator singular at wavenumber {wavenumber}")


class CapacityExceeded(NumericalError):
    """Contour eigensolver probe space saturated: the zeroth moment matrix is
    numerically full rank, so there may be more eigenvalues inside the contour
    than probe columns.  Increase probe_columns or shrink the contour."""


class TrackingLost(NumericalError):
    """Eigenvalue branch continuation lost a branch between consecutive steps."""

    def __init__(self, branch: int, step, distance: float):
        self.branch = branch
        self.step = step
        self.distance = distance
        super().__init__(
            f"branch {branch} lost at step {step}: nearest eigenvalue {distance:.3g} away"
        )
