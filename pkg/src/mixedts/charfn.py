"""Characteristic exponents (log characteristic functions) of the tempered
stable families.

All functions accept a scalar or ndarray of real frequencies and return a
complex scalar or complex128 ndarray.  Complex powers and logarithms use the
principal branch; the arguments ``lambda +- iu`` never cross the negative real
axis because the tempering rates are strictly positive, so the branch is
unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

from .errors import EvaluationError, InvalidParameter, OutsideMgfDomain, Violation
from .params import (CtsParams, GammaMixParams, MixedTsParams, StdCtsParams,
                     validate)


@dataclass(frozen=True)
class CfGridSpec:
    """Frequency-grid specification for Fourier inversion.

    ``n`` points cover ``[-u_max, u_max)``; ``n`` must be a power of two.
    """

    u_max: float
    n: int

    def __post_init__(self):
        errs = []
        if not (self.u_max > 0 and np.isfinite(self.u_max)):
            errs.append(Violation("u_max", self.u_max, "u_max > 0"))
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            errs.append(Violation("n", self.n, "n >= 2 and a power of two"))
        if errs:
            raise InvalidParameter(errs)


def _freq(u):
    """Return (complex frequency array, was_scalar)."""
    arr = np.asarray(u, dtype=float)
    return arr.astype(complex), arr.ndim == 0


def _finish(value, scalar):
    if not np.all(np.isfinite(value.real)) or not np.all(np.isfinite(value.imag)):
        raise EvaluationError("characteristic exponent evaluated to a non-finite value")
    return complex(value) if scalar else value


def cts_log_cf(u, p: CtsParams):
    """Log characteristic function of the classical tempered stable law.

    i*u*mu - i*u*Gamma(1-alpha)*(C+ l+**(a-1) - C- l-**(a-1))
        + C+ Gamma(-alpha)*((l+ - iu)**a - l+**a)
        + C- Gamma(-alpha)*((l- + iu)**a - l-**a)

    which equals ``i*u*mu`` plus the compensated Levy-Khintchine integral of
    the tempered stable Levy density, so the mean is exactly ``mu``.
    """
    validate(p)
    uc, scalar = _freq(u)
    al = p.alpha
    lp, lm = np.complex128(p.lambda_plus), np.complex128(p.lambda_minus)
    with np.errstate(over="ignore", invalid="ignore"):
        drift = -1j * uc * _gamma(1.0 - al) * (p.c_plus * lp ** (al - 1.0)
                                               - p.c_minus * lm ** (al - 1.0))
        gneg = _gamma(-al)
        jumps = (p.c_plus * gneg * ((lp - 1j * uc) ** al - lp ** al)
                 + p.c_minus * gneg * ((lm + 1j * uc) ** al - lm ** al))
        return _finish(1j * uc * p.mu + drift + jumps, scalar)


def _stdcts_exponent(uc, al, lp, lm, drift_over_alpha_minus_one=True):
    """Unchecked standardized exponent on a complex frequency array."""
    lp, lm = np.complex128(lp), np.complex128(lm)
    with np.errstate(over="ignore", invalid="ignore"):
        denom = (lp ** (al - 2.0) + lm ** (al - 2.0)).real
        main = (((lp - 1j * uc) ** al - lp ** al + (lm + 1j * uc) ** al - lm ** al)
                / (al * (al - 1.0) * denom))
        drift = 1j * uc * (lp ** (al - 1.0) - lm ** (al - 1.0)).real / denom
        if drift_over_alpha_minus_one:
            drift = drift / (al - 1.0)
        return main + drift


def stdcts_log_cf(u, p: StdCtsParams):
    """Characteristic exponent of the standardized classical tempered stable law.

    Zero mean and unit variance by construction of the implied common scale.
    """
    validate(p)
    uc, scalar = _freq(u)
    return _finish(_stdcts_exponent(uc, p.alpha, p.lambda_plus, p.lambda_minus), scalar)


def scaled_stdcts_log_cf(u, p: StdCtsParams, h: float, *,
                         drift_over_alpha_minus_one: bool = True):
    """Characteristic exponent of sqrt(h) * X where X ~ stdCTS with tempering
    rates multiplied by sqrt(h).

    Equals ``h`` times the standardized exponent at the base tempering rates,
    which is what the substitution of ``sqrt(h)*u`` and ``lambda*sqrt(h)``
    into the standardized exponent yields.  ``drift_over_alpha_minus_one=False``
    selects a variant whose drift term is not divided by ``alpha - 1``; it does
    not satisfy the substitution identity and exists only for comparison.
    """
    validate(p)
    if not (h > 0 and np.isfinite(h)):
        raise InvalidParameter([Violation("h", h, "h > 0")])
    uc, scalar = _freq(u)
    val = h * _stdcts_exponent(uc, p.alpha, p.lambda_plus, p.lambda_minus,
                               drift_over_alpha_minus_one)
    return _finish(val, scalar)


def gamma_log_mgf(s, g: GammaMixParams):
    """Log moment generating function of the Gamma mixing variable at complex s.

    Defined for Re(1 - sigma2 * s) > 0; equals ``-a * log(1 - sigma2 * s)``.
    """
    validate(g)
    sc = np.asarray(s, dtype=complex)
    scalar = sc.ndim == 0
    arg = 1.0 - g.sigma2 * sc
    if np.any(arg.real <= 0):
        raise OutsideMgfDomain("Re(1 - sigma2*s) must be positive")
    return _finish(-g.a * np.log(arg), scalar)


def _mixedts_exponent(uc, p: MixedTsParams):
    """Unchecked general mixed tempered stable exponent on a complex array."""
    if p.alpha == 2.0:
        core = -0.5 * (p.sigma ** 2) * uc * uc
    else:
        core = (p.sigma ** 2) * _stdcts_exponent(uc, p.alpha, p.lambda_plus, p.lambda_minus)
    arg = 1.0 - 1j * uc * p.mu - core
    if np.any(arg.real <= 0):
        # Re(core) <= 0 for real frequencies, so this cannot trigger there.
        raise OutsideMgfDomain("mixing-law mgf argument left its domain")
    return 1j * uc * p.mu0 - p.a * np.log(arg)


def mixedts_log_cf(u, p: MixedTsParams):
    """Log characteristic function of the general mixed tempered stable law.

    Assembled by iterated expectation over the Gamma(a, 1) mixing variable V:

        i*u*mu0 - a * log(1 - i*u*mu - L(u))

    where ``L(u) = sigma**2 * stdcts_log_cf(u)`` is the conditional exponent
    of sigma*sqrt(V)*X per unit of V (the tempering of X given V is scaled by
    sigma*sqrt(V), which the scaling identity folds back into ``sigma**2``).
    At ``alpha == 2`` the conditional exponent is the Gaussian -sigma**2*u**2/2.
    """
    validate(p)
    uc, scalar = _freq(u)
    return _finish(_mixedts_exponent(uc, p), scalar)


def geostable_limit_log_cf(u, alpha: float, gamma_scale: float = 1.0):
    """Characteristic exponent of the geometric stable law, -log(1 + g**a * |u|**a).

    This is the limit of the Gamma-mixed family as the common tempering rate
    goes to zero with unit shape and the scale coupled so that the prefactor
    ``|alpha*(alpha-1)/cos(alpha*pi/2)|`` normalizes the tail constant to one.
    It serves as the small-tempering reference for convergence checks.
    """
    errs = []
    if not (0 < alpha < 2) or abs(alpha - 1.0) < 1e-12:
        errs.append(Violation("alpha", alpha, "0 < alpha < 2 and alpha != 1"))
    if not (gamma_scale > 0):
        errs.append(Violation("gamma_scale", gamma_scale, "gamma_scale > 0"))
    if errs:
        raise InvalidParameter(errs)
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    val = -np.log1p((gamma_scale * np.abs(arr)) ** alpha).astype(complex)
    return _finish(val, scalar)
