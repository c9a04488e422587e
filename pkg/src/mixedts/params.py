"""Parameter containers, validation, and flat key=value serialization.

All containers are frozen dataclasses: plain value objects that are safe to
share between threads.  Validation is explicit (``validate``) so that invalid
candidates can still be constructed and reported on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from scipy.special import gamma as _gamma

from .errors import InvalidParameter, MalformedParamsFile, Violation


@dataclass(frozen=True)
class CtsParams:
    """Classical tempered stable law: stability, tempering rates, scales, location.

    The law has Levy density ``c_plus * exp(-lambda_plus*x) / x**(1+alpha)`` on
    x > 0 and the mirror image with ``c_minus, lambda_minus`` on x < 0, with the
    location convention that ``mu`` is the mean.
    """

    alpha: float
    lambda_plus: float
    lambda_minus: float
    c_plus: float
    c_minus: float
    mu: float


@dataclass(frozen=True)
class StdCtsParams:
    """Classical tempered stable standardized to zero mean and unit variance."""

    alpha: float
    lambda_plus: float
    lambda_minus: float


@dataclass(frozen=True)
class GammaMixParams:
    """Gamma mixing variable V, shape-scale parameterization with E[V] = a * sigma2."""

    a: float
    sigma2: float


@dataclass(frozen=True)
class MixedTsParams:
    """General mixed tempered stable variate mu0 + mu*V + sigma*sqrt(V)*X.

    V is Gamma(a, 1) and X given V is a standardized classical tempered stable
    with tempering rates scaled by sigma*sqrt(V).  ``alpha == 2`` is the
    variance-gamma boundary, where the conditional law is Gaussian.
    """

    mu0: float
    mu: float
    sigma: float
    a: float
    lambda_plus: float
    lambda_minus: float
    alpha: float


_ALPHA_ONE_TOL = 1e-12


def _finite(name: str, value, out: list) -> bool:
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        out.append(Violation(name, value, "finite real number"))
        return False
    return True


def _positive(name: str, value, out: list) -> None:
    if _finite(name, value, out) and value <= 0:
        out.append(Violation(name, value, f"{name} > 0"))


def _alpha_constraints(alpha, out: list, upper_closed: bool) -> None:
    if not _finite("alpha", alpha, out):
        return
    if alpha <= 0:
        out.append(Violation("alpha", alpha, "alpha > 0"))
    hi = "alpha <= 2" if upper_closed else "alpha < 2"
    if (alpha > 2) if upper_closed else (alpha >= 2):
        out.append(Violation("alpha", alpha, hi))
    if abs(alpha - 1.0) < _ALPHA_ONE_TOL:
        out.append(Violation("alpha", alpha, "alpha != 1"))


def violations(p) -> list[Violation]:
    """All invariants violated by ``p``; empty when the parameter set is valid."""
    out: list[Violation] = []
    if isinstance(p, CtsParams):
        _alpha_constraints(p.alpha, out, upper_closed=False)
        for name in ("lambda_plus", "lambda_minus", "c_plus", "c_minus"):
            _positive(name, getattr(p, name), out)
        _finite("mu", p.mu, out)
    elif isinstance(p, StdCtsParams):
        _alpha_constraints(p.alpha, out, upper_closed=False)
        _positive("lambda_plus", p.lambda_plus, out)
        _positive("lambda_minus", p.lambda_minus, out)
        if not out and not (std_scale_C(p, _checked=False) > 0):
            out.append(Violation("alpha", p.alpha, "implied scale C > 0"))
    elif isinstance(p, GammaMixParams):
        _positive("a", p.a, out)
        _positive("sigma2", p.sigma2, out)
    elif isinstance(p, MixedTsParams):
        _alpha_constraints(p.alpha, out, upper_closed=True)
        for name in ("sigma", "a", "lambda_plus", "lambda_minus"):
            _positive(name, getattr(p, name), out)
        _finite("mu0", p.mu0, out)
        _finite("mu", p.mu, out)
    else:
        raise TypeError(f"not a parameter container: {type(p).__name__}")
    return out


def validate(p):
    """Return ``p`` unchanged if every invariant holds, else raise InvalidParameter."""
    errs = violations(p)
    if errs:
        raise InvalidParameter(errs)
    return p


def std_scale_C(p: StdCtsParams, _checked: bool = True) -> float:
    """Common scale making the classical tempered stable zero-mean, unit-variance.

    C = 1 / (Gamma(2 - alpha) * (lambda_plus**(alpha-2) + lambda_minus**(alpha-2)))
    """
    if _checked:
        validate(p)
    al = p.alpha
    denom = _gamma(2.0 - al) * (p.lambda_plus ** (al - 2.0) + p.lambda_minus ** (al - 2.0))
    return 1.0 / denom


def as_cts(p: StdCtsParams) -> CtsParams:
    """Equivalent six-parameter form of a standardized law (mu = 0, common scale C)."""
    c = std_scale_C(p)
    return CtsParams(alpha=p.alpha, lambda_plus=p.lambda_plus, lambda_minus=p.lambda_minus,
                     c_plus=c, c_minus=c, mu=0.0)


# ---------------------------------------------------------------------------
# Flat key=value serialization (one "name=value" line per field)
# ---------------------------------------------------------------------------

_PARAM_CLASSES = (MixedTsParams, CtsParams, StdCtsParams, GammaMixParams)
_FIELDS_TO_CLASS = {frozenset(f.name for f in fields(cls)): cls for cls in _PARAM_CLASSES}


def to_kv(p) -> str:
    """Serialize a parameter set to one ``name=value`` line per field."""
    return "".join(f"{f.name}={float(getattr(p, f.name))!r}\n" for f in fields(p))


def from_kv(text: str, cls=None):
    """Parse a flat key=value block into a parameter container.

    The container class is inferred from the set of keys when ``cls`` is not
    given.  Blank lines and ``#`` comments are ignored.  Values round-trip
    IEEE-754 doubles written with ``repr``.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedParamsFile(lineno, raw, "expected name=value")
        name, _, val = line.partition("=")
        name = name.strip()
        if name in values:
            raise MalformedParamsFile(lineno, raw, f"duplicate key {name!r}")
        try:
            values[name] = float(val.strip())
        except ValueError:
            raise MalformedParamsFile(lineno, raw, "value is not a number") from None
    if cls is None:
        cls = _FIELDS_TO_CLASS.get(frozenset(values))
        if cls is None:
            raise MalformedParamsFile(0, ",".join(sorted(values)) or "<empty>",
                                      "key set does not match any parameter container")
    expected = {f.name for f in fields(cls)}
    missing = expected - set(values)
    extra = set(values) - expected
    if missing or extra:
        raise MalformedParamsFile(0, ",".join(sorted(missing | extra)),
                                  f"keys do not match {cls.__name__}")
    return cls(**values)
