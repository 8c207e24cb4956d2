"""Exception hierarchy shared across the package.

The CLI maps these onto stable exit codes (see ``resonance.cli``), so new
error conditions should subclass one of the classes below rather than raise
bare ValueErrors for anything a script might want to distinguish.
"""


class ResonanceError(Exception):
    """Base class for all errors raised by this package."""


class DimensionLimitError(ResonanceError):
    """An operation would produce a Hilbert space above the configured cap."""


class HermiticityError(ResonanceError):
    """A matrix required to be Hermitian is not, within tolerance."""

    def __init__(self, message: str, row: int = -1, col: int = -1, defect: float = 0.0):
        super().__init__(message)
        self.row = row
        self.col = col
        self.defect = defect


class ModelFormatError(ResonanceError):
    """A model description file could not be parsed or validated."""


class RefinementError(ResonanceError):
    """Peak refinement could not converge."""


class PeakLostError(RefinementError):
    """No local maximum above threshold inside a refinement window."""

    def __init__(self, message: str, window: tuple = (0.0, 0.0)):
        super().__init__(message)
        self.window = window


class FitError(ResonanceError):
    """A least-squares fit failed (for example on a flat signal)."""


class StepLimitError(ResonanceError):
    """The split-step count needed to reach a target error exceeds the cap."""


class HeraldFailureError(ResonanceError):
    """Post-selection on the herald sector has (numerically) zero weight."""


class DarkTransitionError(ResonanceError):
    """The requested eigenstate has a vanishing transition amplitude."""
