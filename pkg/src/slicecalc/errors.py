"""Exception types shared across the package."""


class SliceCalcError(Exception):
    """Base class for all library errors."""


class SingularElementError(SliceCalcError):
    """A Clifford element has no inverse (zero paravector, singular quadratic)."""


class SingularOperatorError(SliceCalcError):
    """The regular representation of an operator is numerically singular."""


class SpectrumHitError(SliceCalcError):
    """A requested point (u, r) lies on the S-spectrum of the operator."""

    def __init__(self, u: float, r: float, message: str | None = None):
        self.u = float(u)
        self.r = float(r)
        super().__init__(message or f"point (u={u:.6g}, r={r:.6g}) lies on the S-spectrum")


class ConvergenceError(SliceCalcError):
    """A series evaluation or expansion did not converge under its preconditions."""


class ContourError(SliceCalcError):
    """A contour fails separation, winding, or clearance requirements."""


class OperatorSchemaError(SliceCalcError):
    """An operator or function file violates the expected schema."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")
