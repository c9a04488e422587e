"""Statistical factors by fixed-point independent component analysis.

The pipeline regresses a portfolio on observed series, extracts maximally
non-Gaussian components from those series, ranks them by the Jarque-Bera
statistic, splits them into factors and noise, and rebuilds the portfolio
density from the product of the factor characteristic functions with a
Gaussian noise term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charfn import CfGridSpec, _mixedts_exponent
from .density import DensityGrid, auto_grid_spec, invert_cf
from .errors import IcaNoConvergence, RankDeficient, SeriesTooShort
from .estimation import FitOptions, FitResult, fit_mixedts
from .params import validate


@dataclass(frozen=True)
class IcaModel:
    """Whitening, mixing and unmixing maps with the recovered sources.

    ``sources`` rows have unit sample variance and are ordered by descending
    Jarque-Bera statistic, with signs flipped so each row's skewness is
    non-positive; ``mixing @ sources`` reproduces the demeaned data.
    """

    whitening: np.ndarray
    mixing: np.ndarray
    unmixing: np.ndarray
    sources: np.ndarray
    convergence_iters: np.ndarray
    converged: bool


@dataclass(frozen=True)
class FactorSplit:
    """Selected factor rows, residual noise rows, and the re-based exposures."""

    factor_rows: np.ndarray
    noise_rows: np.ndarray
    beta_f: np.ndarray
    beta_n: np.ndarray
    factor_indices: np.ndarray
    noise_indices: np.ndarray


def jarque_bera(series) -> tuple[float, float, float]:
    """Jarque-Bera statistic with the sample skewness and kurtosis behind it.

    JB = (t/6) * (S**2 + (K - 3)**2 / 4) with moment-estimator S and K.
    """
    x = np.asarray(series, dtype=float)
    t = len(x)
    if t < 8:
        raise SeriesTooShort(f"need at least 8 observations, got {t}")
    d = x - x.mean()
    m2 = np.mean(d ** 2)
    skew = float(np.mean(d ** 3) / m2 ** 1.5)
    kurt = float(np.mean(d ** 4) / m2 ** 2)
    jb = t / 6.0 * (skew ** 2 + (kurt - 3.0) ** 2 / 4.0)
    return float(jb), skew, kurt


def ols_exposures(portfolio, factors) -> tuple[np.ndarray, float, np.ndarray]:
    """Least-squares exposures of a portfolio to factor rows (no intercept).

    Parameters
    ----------
    portfolio : array of length t
    factors : array (n, t), one row per factor series

    Returns
    -------
    (beta, r_squared, residuals)
    """
    y = np.asarray(portfolio, dtype=float)
    x = np.atleast_2d(np.asarray(factors, dtype=float))
    n, t = x.shape
    if t != len(y):
        raise ValueError("portfolio and factor series lengths differ")
    if t <= n:
        raise ValueError(f"need more observations than regressors, got t={t}, n={n}")
    beta, _, rank, _ = np.linalg.lstsq(x.T, y, rcond=None)
    if rank < n:
        raise RankDeficient(f"factor matrix has rank {rank} < {n}")
    residuals = y - x.T @ beta
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residuals ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return beta, r_squared, residuals


def _sym_decorrelate(w: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(w @ w.T)
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.T @ w


def fastica(data, n_components: int | None = None, seed: int = 0,
            max_iter: int = 500, tol: float = 1e-10,
            strict: bool = False) -> IcaModel:
    """Symmetric fixed-point extraction with the log-cosh contrast.

    Rows of ``data`` are series; they are demeaned internally and whitened by
    an eigendecomposition of the sample covariance.  Deterministic for a fixed
    seed.  When the budget is exhausted the partial model is returned with
    ``converged=False`` (or raised inside ``IcaNoConvergence`` when
    ``strict=True``).
    """
    x = np.atleast_2d(np.asarray(data, dtype=float))
    n, t = x.shape
    if t <= 10 * n:
        raise SeriesTooShort(f"need t > 10*n observations, got t={t} for n={n}")
    k = n_components if n_components is not None else n
    if not 1 <= k <= n:
        raise ValueError(f"n_components must be in [1, {n}], got {k}")

    xc = x - x.mean(axis=1, keepdims=True)
    cov = xc @ xc.T / (t - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:k]
    whitening = (evecs[:, order] / np.sqrt(evals[order])).T
    z = whitening @ xc

    rng = np.random.default_rng(seed)
    w, _ = np.linalg.qr(rng.standard_normal((k, k)))
    settled = np.full(k, -1, dtype=int)
    converged = False
    for it in range(1, max_iter + 1):
        y = w @ z
        gy = np.tanh(y)
        w_new = gy @ z.T / t - np.mean(1.0 - gy ** 2, axis=1)[:, None] * w
        w_new = _sym_decorrelate(w_new)
        drift = 1.0 - np.abs(np.sum(w_new * w, axis=1))
        w = w_new
        newly = (drift < tol) & (settled < 0)
        settled[newly] = it
        settled[drift >= tol] = -1
        if np.all(drift < tol):
            converged = True
            break
    settled[settled < 0] = max_iter

    unmixing = w @ whitening
    sources = unmixing @ xc
    mixing = np.linalg.pinv(unmixing)

    jb = np.array([jarque_bera(row)[0] for row in sources])
    rank_order = np.argsort(jb)[::-1]
    sources = sources[rank_order]
    unmixing = unmixing[rank_order]
    settled = settled[rank_order]
    mixing = mixing[:, rank_order]

    skews = np.array([jarque_bera(row)[1] for row in sources])
    flips = np.where(skews > 0, -1.0, 1.0)
    sources = sources * flips[:, None]
    unmixing = unmixing * flips[:, None]
    mixing = mixing * flips[None, :]

    model = IcaModel(whitening=whitening, mixing=mixing, unmixing=unmixing,
                     sources=sources, convergence_iters=settled, converged=converged)
    if strict and not converged:
        raise IcaNoConvergence(f"no convergence after {max_iter} iterations", model=model)
    return model


def split_factors(model: IcaModel, beta, l: int, ranking=None) -> FactorSplit:
    """Partition components into the top-``l`` factors and the noise rest.

    The re-based exposures are the original exposures composed with the mixing
    matrix columns, so ``beta_f @ F + beta_n @ N`` equals ``beta`` applied to
    the demeaned data exactly.
    """
    n = model.sources.shape[0]
    if not 1 <= l <= n:
        raise ValueError(f"l must be in [1, {n}], got {l}")
    if ranking is None:
        ranking = np.array([jarque_bera(row)[0] for row in model.sources])
    order = np.argsort(np.asarray(ranking, dtype=float))[::-1]
    fidx, nidx = np.sort(order[:l]), np.sort(order[l:])
    beta_s = np.asarray(beta, dtype=float) @ model.mixing
    return FactorSplit(factor_rows=model.sources[fidx],
                       noise_rows=model.sources[nidx],
                       beta_f=beta_s[fidx], beta_n=beta_s[nidx],
                       factor_indices=fidx, noise_indices=nidx)


def reconstruct_portfolio_density(split: FactorSplit, factor_fits,
                                  noise_mean: float, noise_var: float,
                                  spec: CfGridSpec | None = None,
                                  grid_n: int = 2 ** 14) -> DensityGrid:
    """Portfolio density from the product of factor cfs and a Gaussian noise cf.

    The portfolio log cf is ``sum_i log_cf_i(beta_f[i] * u)`` over the fitted
    factor laws plus ``i*u*noise_mean - 0.5*noise_var*u**2``, inverted on one
    FFT grid.
    """
    if noise_var < 0:
        raise ValueError(f"noise variance must be non-negative, got {noise_var}")
    fits = [validate(f) for f in factor_fits]
    if len(fits) != len(split.beta_f):
        raise ValueError("one fitted law per factor row is required")
    betas = np.asarray(split.beta_f, dtype=float)

    def log_cf(u):
        uc = np.asarray(u, dtype=complex)
        total = 1j * uc * noise_mean - 0.5 * noise_var * uc * uc
        for b, f in zip(betas, fits):
            total = total + _mixedts_exponent(b * uc, f)
        return total

    if spec is None:
        spec = auto_grid_spec(log_cf, n=grid_n)
    return invert_cf(log_cf, spec)


@dataclass(frozen=True)
class IcaPipelineResult:
    """Everything the factor-decomposition pipeline produces."""

    beta: np.ndarray
    r_squared: float
    model: IcaModel
    jb_stats: np.ndarray
    split: FactorSplit
    factor_fits: list[FitResult]
    noise_mean: float
    noise_var: float
    reconstruction: DensityGrid
    normal_fit: tuple[float, float]


def ica_pipeline(factors_data, portfolio, l: int = 4, seed: int = 0,
                 fit_options: FitOptions | None = None,
                 grid_n: int = 2 ** 14) -> IcaPipelineResult:
    """Full decomposition: OLS exposures, ICA, JB split, per-factor fits,
    noise normal, and the reconstructed portfolio density.

    The noise series is ``portfolio - beta_f @ F``, which also absorbs the
    series means, so the reconstruction targets the raw portfolio scale.
    """
    y = np.asarray(portfolio, dtype=float)
    beta, r2, _ = ols_exposures(y, factors_data)
    model = fastica(factors_data, seed=seed)
    jb = np.array([jarque_bera(row)[0] for row in model.sources])
    split = split_factors(model, beta, l, ranking=jb)

    fits = [fit_mixedts(row, options=fit_options) for row in split.factor_rows]
    noise_series = y - split.beta_f @ split.factor_rows
    noise_mean, noise_var = float(np.mean(noise_series)), float(np.var(noise_series))
    recon = reconstruct_portfolio_density(split, [f.params for f in fits],
                                          noise_mean, noise_var, grid_n=grid_n)
    return IcaPipelineResult(beta=beta, r_squared=r2, model=model, jb_stats=jb,
                             split=split, factor_fits=fits,
                             noise_mean=noise_mean, noise_var=noise_var,
                             reconstruction=recon,
                             normal_fit=(float(np.mean(y)), float(np.var(y))))
