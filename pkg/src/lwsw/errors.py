"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter tuple violates one of the model assumptions.

    ``assumption`` names the violated condition, e.g. ``"sigma > 0"``.
    """

    def __init__(self, assumption: str, detail: str = ""):
        self.assumption = assumption
        msg = f"assumption violated: {assumption}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SolverError(RuntimeError):
    """A profile solver failed.

    ``reason`` is one of ``"non-convergence"``, ``"trivial-limit"``,
    ``"nonpositive-constraint"`` or ``"line-search-stagnation"``; ``report``
    carries the diagnostics gathered up to the failure (may be ``None``).
    """

    def __init__(self, reason: str, message: str, report=None):
        self.reason = reason
        self.report = report
        super().__init__(f"{reason}: {message}")


class StepError(RuntimeError):
    """Time stepping was refused or blew up."""

    def __init__(self, message: str, suggested_dt: float | None = None, step_index: int | None = None):
        self.suggested_dt = suggested_dt
        self.step_index = step_index
        super().__init__(message)
