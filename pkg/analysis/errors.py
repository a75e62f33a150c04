"""
Exception hierarchy — every failure the toolkit reports on purpose.
"""


class ZLossError(ValueError):
    """Base class. `exit_code` is what the CLI returns when this escapes a command."""

    exit_code = 1


class InvalidInput(ZLossError):
    pass


class DegenerateSample(ZLossError):
    """Sample carries no spread (zero variance, or ddof leaves no degrees of freedom)."""


class InsufficientData(ZLossError):
    pass


class DegenerateInput(ZLossError):
    """Two distributions are identical, so they have no intersection."""


class FitFailed(ZLossError):
    pass


class NoSignChange(ZLossError):
    pass


class NoConvergence(ZLossError):
    pass


class TrainingDiverged(ZLossError):
    def __init__(self, epoch: int, detail: str = "non-finite loss"):
        super().__init__(f"Training diverged at epoch {epoch}: {detail}")
        self.epoch = epoch


class MalformedInput(ZLossError):
    """Unreadable input file. Carries the offending 1-based line numbers."""

    exit_code = 2

    def __init__(self, message: str, lines: list[int] | None = None):
        self.lines = lines or []
        if self.lines:
            shown = ", ".join(str(n) for n in self.lines[:20])
            more = "" if len(self.lines) <= 20 else f" (+{len(self.lines) - 20} more)"
            message = f"{message} (lines: {shown}{more})"
        super().__init__(message)


class UsageError(ZLossError):
    """Flag values that parse but make no sense together."""

    exit_code = 2
