"""Exception types shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One failed parameter constraint."""

    name: str
    value: float
    constraint: str

    def __str__(self) -> str:
        return f"{self.name}={self.value!r} violates: {self.constraint}"


class InvalidParameter(ValueError):
    """A parameter set failed validation; carries every violated constraint."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class MalformedParamsFile(ValueError):
    """A key=value parameter file could not be parsed."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class EvaluationError(ArithmeticError):
    """A numerical evaluation produced a non-finite intermediate."""


class OutsideMgfDomain(ValueError):
    """Argument outside the domain of the moment generating function."""


class GridTooCoarse(RuntimeError):
    """Inverted density misses unit mass by more than the sanity bound."""


class NonHermitianCf(ValueError):
    """Characteristic function fails phi(-u) == conj(phi(u))."""


class OutOfRange(ValueError):
    """Probability argument outside (0, 1)."""


class ZeroExpectedFrequency(ValueError):
    """A theoretical class frequency is zero in the quadratic Pearson index."""


class NonPositiveVariance(RuntimeError):
    """Variance recursion produced a non-positive value."""


class RankDeficient(ValueError):
    """Regressor matrix does not have full column rank."""


class IcaNoConvergence(RuntimeError):
    """Fixed-point iteration exhausted its budget; carries the partial model."""

    def __init__(self, message: str, model=None):
        self.model = model
        super().__init__(message)


class EmptyInput(ValueError):
    """An input file or series contains no observations."""


class SeriesTooShort(ValueError):
    """Series shorter than the minimum required length."""
