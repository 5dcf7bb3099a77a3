"""Error hierarchy. Each error carries a process exit code and a one-line reason."""

from collections.abc import Sequence


class PMCError(Exception):
    """Base error: ``reason`` is ``"<kind>: <detail>"`` and fits on one line."""

    exit_code: int = 1
    kind: str = "error"

    def __init__(self, detail: str):
        self.detail = " ".join(str(detail).split())
        super().__init__(self.reason)

    @property
    def reason(self) -> str:
        return f"{self.kind}: {self.detail}"


# ---------------------------------------------------------------------------
# Usage (exit 1)
# ---------------------------------------------------------------------------


class UsageError(PMCError):
    exit_code = 1
    kind = "usage"


# ---------------------------------------------------------------------------
# Preconditions and class violations (exit 2)
# ---------------------------------------------------------------------------


class PreconditionError(PMCError):
    exit_code = 2
    kind = "precondition"


class ClassViolationError(PreconditionError):
    kind = "class-violation"


class NoSolutionError(PreconditionError):
    kind = "no-solution"


class UnsupportedChartError(PreconditionError):
    kind = "unsupported-chart"


class DomainError(PreconditionError):
    kind = "domain"


class AxisSingularityError(PreconditionError):
    kind = "axis-singularity"


# ---------------------------------------------------------------------------
# Numerical failures (exit 3)
# ---------------------------------------------------------------------------


class NumericalError(PMCError):
    exit_code = 3
    kind = "numerical"


class NonClosureError(NumericalError):
    kind = "non-closure"

    def __init__(self, detail: str, defect: float):
        self.defect = defect
        super().__init__(detail)


class NonConvergenceError(NumericalError):
    kind = "non-convergence"

    def __init__(self, detail: str, residual_history: Sequence[float] = ()):
        self.residual_history = list(residual_history)
        super().__init__(detail)


class VerticalPointError(NumericalError):
    """The radial graph becomes vertical before the requested radius."""

    kind = "vertical-point"

    def __init__(self, r_star: float):
        self.r_star = float(r_star)
        super().__init__(f"graph ceases to be a graph at R*={self.r_star:.12g}")


class StepRejectedError(NumericalError):
    kind = "step-rejected"

    def __init__(self, detail: str, s: float, estimate: float):
        self.s = s
        self.estimate = estimate
        super().__init__(detail)
