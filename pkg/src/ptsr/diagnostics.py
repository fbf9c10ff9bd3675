"""Residuals, model selection criteria and portmanteau diagnostics."""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .estimation import FitResult
from .filtering import run_filter

__all__ = [
    "ResidualSet",
    "InformationCriteria",
    "information_criteria",
    "residuals",
    "acf",
    "acf_band",
    "ljung_box",
    "LjungBoxResult",
    "ks_normality",
]

InformationCriteria = namedtuple("InformationCriteria", ["aic", "sic", "hq"])
LjungBoxResult = namedtuple("LjungBoxResult", ["statistic", "df", "p_value"])

_CDF_CLIP = 1e-12


@dataclass
class ResidualSet:
    simple: np.ndarray  # y_t - mu_t
    quantile: np.ndarray  # Phi^{-1}(F(y_t | mu_t, dispersion))
    clip_count: int  # CDF values clipped away from {0, 1} before Phi^{-1}


def information_criteria(loglik: float, k: int, n: int) -> InformationCriteria:
    """AIC, SIC and HQ with k = total estimated parameter count."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    aic = -2.0 * loglik + 2.0 * k
    sic = -2.0 * loglik + k * np.log(n)
    hq = -2.0 * loglik + 2.0 * k * np.log(np.log(n))
    return InformationCriteria(aic, sic, hq)


def residuals(fit: FitResult, y, X=None) -> ResidualSet:
    """Simple and quantile residuals from the fitted filter."""
    y = np.asarray(y, dtype=float)
    filt = run_filter(fit.spec, fit.params, y, X, derivatives=False)
    u = np.asarray(fit.spec.family.cdf(y, filt.mu, fit.params.phi_disp))
    clipped = np.clip(u, _CDF_CLIP, 1.0 - _CDF_CLIP)
    n_clip = int(np.count_nonzero(clipped != u))
    return ResidualSet(
        simple=y - filt.mu,
        quantile=stats.norm.ppf(clipped),
        clip_count=n_clip,
    )


def acf(r, max_lag: int) -> np.ndarray:
    """Sample autocorrelations for lags 0..max_lag (index = lag)."""
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    if not 0 < max_lag < n:
        raise ValueError("max_lag must satisfy 0 < max_lag < n")
    d = r - r.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise ValueError("zero-variance series has no autocorrelation")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for h in range(1, max_lag + 1):
        out[h] = float(d[h:] @ d[:-h]) / denom
    return out


def acf_band(n: int, n_mean_params: int) -> float:
    """Half-width of the +-1.96/sqrt(n - m) white-noise band."""
    if n <= n_mean_params:
        raise ValueError("n must exceed the number of mean-structure parameters")
    return 1.96 / np.sqrt(n - n_mean_params)


def ljung_box(r, lags: int, fitted_df: int = 0) -> LjungBoxResult:
    """Ljung-Box portmanteau statistic over lags 1..lags.

    Degrees of freedom default to ``lags``; passing ``fitted_df`` > 0
    subtracts it (the usual ARMA-residual adjustment).
    """
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    rho = acf(r, lags)[1:]
    q = float(n * (n + 2.0) * np.sum(rho**2 / (n - np.arange(1, lags + 1))))
    df = lags - fitted_df
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1 after adjustment")
    return LjungBoxResult(q, df, float(stats.chi2.sf(q, df)))


def ks_normality(r):
    """Kolmogorov-Smirnov test of the residuals against N(0, 1)."""
    stat, p = stats.kstest(np.asarray(r, dtype=float), "norm")
    return float(stat), float(p)
