"""GARCH(1,1) filtering and Gaussian quasi-maximum likelihood.

The variance recursion is ``s2[t] = alpha0 + alpha1*r[t-1]**2 + beta1*s2[t-1]``
with returns ``r[t] = sigma[t] * x[t]``; the innovation law enters only in the
second stage, where the standardized residuals are fitted by histogram MSE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from .errors import InvalidParameter, NonPositiveVariance, SeriesTooShort, Violation
from .estimation import FitOptions, FitResult, fit_mixedts, fit_vg
from .moments import mixedts_moments
from .params import MixedTsParams
from .sampling import sample_mixedts

_STATIONARITY_MARGIN = 1e-6


@dataclass(frozen=True)
class GarchParams:
    """Variance recursion coefficients."""

    alpha0: float
    alpha1: float
    beta1: float


def garch_violations(p: GarchParams) -> list[Violation]:
    out = []
    if not (np.isfinite(p.alpha0) and p.alpha0 > 0):
        out.append(Violation("alpha0", p.alpha0, "alpha0 > 0"))
    if not (np.isfinite(p.alpha1) and p.alpha1 >= 0):
        out.append(Violation("alpha1", p.alpha1, "alpha1 >= 0"))
    if not (np.isfinite(p.beta1) and p.beta1 >= 0):
        out.append(Violation("beta1", p.beta1, "beta1 >= 0"))
    if not out and p.alpha1 + p.beta1 >= 1.0:
        out.append(Violation("alpha1+beta1", p.alpha1 + p.beta1,
                             "alpha1 + beta1 < 1 (covariance stationarity)"))
    return out


def validate_garch(p: GarchParams) -> GarchParams:
    errs = garch_violations(p)
    if errs:
        raise InvalidParameter(errs)
    return p


@dataclass(frozen=True)
class GarchFit:
    """Fitted coefficients with the filtered state."""

    params: GarchParams
    sigmas: np.ndarray
    residuals: np.ndarray
    loglik: float


def garch_filter(returns, p: GarchParams, sigma0_sq: float):
    """Run the variance recursion and score the Gaussian quasi-likelihood.

    Returns
    -------
    (sigmas, residuals, loglik)
        Conditional volatilities, standardized residuals r/sigma, and
        -0.5 * sum(log(2*pi*s2[t]) + r[t]**2 / s2[t]).
    """
    validate_garch(p)
    r = np.asarray(returns, dtype=float)
    if len(r) < 10:
        raise SeriesTooShort(f"need at least 10 observations, got {len(r)}")
    if not sigma0_sq > 0:
        raise NonPositiveVariance(f"initial variance must be positive, got {sigma0_sq}")
    var = np.empty(len(r))
    var[0] = sigma0_sq
    if len(r) > 1:
        driven = p.alpha0 + p.alpha1 * r[:-1] ** 2
        var[1:], _ = lfilter([1.0], [1.0, -p.beta1], driven,
                             zi=np.array([p.beta1 * sigma0_sq]))
    if np.any(var <= 0):
        raise NonPositiveVariance("recursion produced a non-positive variance")
    sigmas = np.sqrt(var)
    loglik = -0.5 * float(np.sum(np.log(2.0 * np.pi * var) + r ** 2 / var))
    return sigmas, r / sigmas, loglik


_EXTRA_STARTS = ((0.10, 0.80), (0.02, 0.95))


def garch_qmle(returns, init: GarchParams | None = None) -> GarchFit:
    """Maximize the Gaussian quasi-likelihood over the stationarity region.

    The simplex search runs from ``init`` plus two fixed fallback starts and
    keeps the best; points outside the feasible region are penalized.  The
    pre-sample variance is the sample variance.
    """
    r = np.asarray(returns, dtype=float)
    if len(r) < 250:
        raise SeriesTooShort(f"need at least 250 observations, got {len(r)}")
    sigma0_sq = float(np.var(r))
    if init is None:
        init = GarchParams(alpha0=sigma0_sq * 0.05, alpha1=0.05, beta1=0.90)
    validate_garch(init)

    def negloglik(x):
        a0, a1, b1 = x
        bad = (max(0.0, -a0 + 1e-12 * sigma0_sq) / sigma0_sq
               + max(0.0, -a1) + max(0.0, -b1)
               + max(0.0, a1 + b1 - (1.0 - _STATIONARITY_MARGIN)))
        if bad > 0:
            return 1e10 * (1.0 + bad)
        p = GarchParams(alpha0=a0, alpha1=a1, beta1=b1)
        try:
            _, _, ll = garch_filter(r, p, sigma0_sq)
        except (NonPositiveVariance, InvalidParameter):
            return 1e10
        return -ll

    starts = [np.array([init.alpha0, init.alpha1, init.beta1])]
    for a1, b1 in _EXTRA_STARTS:
        starts.append(np.array([sigma0_sq * (1.0 - a1 - b1), a1, b1]))

    best = None
    for start in starts:
        res = minimize(negloglik, start, method="Nelder-Mead",
                       options={"maxfev": 4000, "xatol": 1e-10,
                                "fatol": 1e-8, "adaptive": True})
        if best is None or res.fun < best.fun:
            best = res

    params = validate_garch(GarchParams(*map(float, best.x)))
    sigmas, residuals, loglik = garch_filter(r, params, sigma0_sq)
    return GarchFit(params=params, sigmas=sigmas, residuals=residuals, loglik=loglik)


def simulate_garch(p: GarchParams, count: int, seed: int,
                   innovations: MixedTsParams | None = None,
                   burn_in: int = 500) -> np.ndarray:
    """Simulate a return series; innovations are standard Gaussian by default.

    A mixed tempered stable innovation law is standardized to zero mean and
    unit variance using its closed-form moments before driving the recursion.
    """
    validate_garch(p)
    total = count + burn_in
    if innovations is None:
        x = np.random.default_rng(seed).standard_normal(total)
    else:
        batch = sample_mixedts(innovations, total, seed)
        mom = mixedts_moments(innovations)
        x = (batch.values - mom.mean) / np.sqrt(mom.variance)
    var = p.alpha0 / (1.0 - p.alpha1 - p.beta1)
    r = np.empty(total)
    for t in range(total):
        r[t] = np.sqrt(var) * x[t]
        var = p.alpha0 + p.alpha1 * r[t] ** 2 + p.beta1 * var
    return r[burn_in:]


def garch_mixedts_pipeline(returns, innovations: str = "mixedts",
                           fit_options: FitOptions | None = None,
                           bins: int | None = None) -> tuple[GarchFit, FitResult]:
    """Two-stage estimation: QMLE variance filter, then innovation-density fit.

    The standardized residuals are re-centered and re-scaled to exact zero
    mean and unit variance before the histogram fit.  ``innovations`` selects
    the second stage: "mixedts" for the full law, "vg" for the
    variance-gamma constrained fit.
    """
    if innovations not in ("mixedts", "vg"):
        raise ValueError(f"unknown innovation law {innovations!r}")
    gfit = garch_qmle(returns)
    z = gfit.residuals
    z = (z - np.mean(z)) / np.std(z)
    from .estimation import histogram_spec_for

    hist = histogram_spec_for(z, k=bins)
    fitter = fit_mixedts if innovations == "mixedts" else fit_vg
    fres = fitter(z, hist=hist, options=fit_options)
    return gfit, fres


def format_garch_report(fit: GarchFit) -> str:
    """Coefficient block of the two-stage report."""
    return ("# garch(1,1) quasi-maximum likelihood\n"
            f"alpha0 {fit.params.alpha0:.6g}\n"
            f"alpha1 {fit.params.alpha1:.6g}\n"
            f"beta1 {fit.params.beta1:.6g}\n"
            f"loglik {fit.loglik:.6f}\n")
