"""Exception types shared across the toolkit.

Precondition violations raise plain ``ValueError`` (or the subclasses below
when callers need to tell the cases apart); numerical failures raise
``RuntimeError`` subclasses.
"""


class ParseError(ValueError):
    """A file could not be parsed. Carries the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateDemonstrationError(ValueError):
    """Demonstration start and goal coincide in every dimension, so the
    regression that scales with their difference has no solution."""


class DegeneratePhaseError(ValueError):
    """Basis activations have vanished at the requested phase."""


class PrefixTooShortError(ValueError):
    """The retained prefix is too short to blend (fewer than 3 samples)."""


class InstabilityError(RuntimeError):
    """Numerical integration diverged."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class SolverError(RuntimeError):
    """A linear solve failed unexpectedly."""
