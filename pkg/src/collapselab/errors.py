"""Exception taxonomy shared across the package.

Names mirror the failure modes of the public operations.  ``RuleViolation``
is deliberately absent: a violated at-most-one-singular-point rule is a
*finding* reported by the detector, not an error.
"""


class CollapseLabError(Exception):
    """Base class for all package-specific failures."""


class GridTooSmall(CollapseLabError):
    """Fewer grid points than the stencils require."""


class DegenerateMetric(CollapseLabError):
    """A metric coefficient is nonpositive where it must be positive."""


class ZeroB(CollapseLabError):
    """Quotient by a twisted circle action needs a nonzero u-translation."""


class CflViolation(CollapseLabError):
    """Requested time step exceeds the stability bound."""


class CurvatureBlowup(CollapseLabError):
    """|K| crossed the configured ceiling; a singularity is forming."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


class DomainError(CollapseLabError):
    """Argument outside the mathematical domain of the formula."""


class NotEssential(CollapseLabError):
    """The requested quantity is undefined for a nonnegative lowest eigenvalue."""


class FlatHistory(CollapseLabError):
    """Point selection is impossible when rm_norm vanishes identically."""


class WindowOutOfRange(CollapseLabError):
    """Requested rescaling window leaves the recorded history."""


class BallOutOfGrid(CollapseLabError):
    """Comparison ball exits the truncated domain (reported, not fatal)."""


class WindowEmpty(CollapseLabError):
    """A sampling or time window contains no grid data."""


class TooLarge(CollapseLabError):
    """Input exceeds the exhaustive-enumeration threshold."""


class DegenerateScales(CollapseLabError):
    """Distance distribution supports fewer than three usable scales."""


class NoOverlap(CollapseLabError):
    """No shift aligns two profile windows within tolerance."""


class SeamMismatch(CollapseLabError):
    """Glued windows disagree beyond tolerance on an overlap."""


class TwoClosedEnds(CollapseLabError):
    """Both ends of a glued profile reach f = 0; the surface closed up."""


class ClosureFailure(CollapseLabError):
    """Vanishing end matches neither a smooth tip nor a recognized cone."""


class InconsistentInput(CollapseLabError):
    """Local-model data does not match any table row."""


class NotPositive(CollapseLabError):
    """Curvature fails the required positivity."""


class ConfigError(CollapseLabError):
    """Invalid run configuration; nothing was written."""


class PipelineError(CollapseLabError):
    """A pipeline stage failed.  Carries the stage name."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
