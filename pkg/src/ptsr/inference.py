"""Asymptotic inference: confidence intervals, z-tests and Wald tests."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .estimation import FitResult

__all__ = [
    "LinearRestriction",
    "confidence_interval",
    "z_statistic",
    "wald_test",
    "parse_restrictions",
]


@dataclass
class LinearRestriction:
    """Linear hypothesis A gamma = b on the flat parameter vector."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float))
        k, m = self.A.shape
        if self.b.shape != (k,):
            raise ValueError("b length must match the number of restriction rows")
        if k >= m:
            raise ValueError("number of restrictions must be < parameter count")
        if np.linalg.matrix_rank(self.A) < k:
            raise ValueError("restriction matrix must have full row rank")

    @property
    def k(self) -> int:
        return self.A.shape[0]


def _require_vcov(fit: FitResult):
    if fit.vcov is None:
        raise ValueError("covariance matrix unavailable for this fit")


def confidence_interval(fit: FitResult, i: int, level: float = 0.95):
    """Normal-approximation interval for the i-th flat coefficient."""
    _require_vcov(fit)
    if not 0.5 < level < 1.0:
        raise ValueError("level must be in (0.5, 1)")
    z = stats.norm.ppf(0.5 * (1.0 + level))
    center = fit.params.to_array()[i]
    half = z * fit.std_errors[i]
    return center - half, center + half


def z_statistic(fit: FitResult, i: int, value: float = 0.0):
    """z statistic and two-sided p-value for H0: gamma_i = value."""
    _require_vcov(fit)
    z = (fit.params.to_array()[i] - value) / fit.std_errors[i]
    p = 2.0 * stats.norm.sf(abs(z))
    return float(z), float(p)


def wald_test(fit: FitResult, restriction: LinearRestriction):
    """Wald statistic for A gamma = b, chi-square with k degrees of freedom."""
    _require_vcov(fit)
    A, b = restriction.A, restriction.b
    if A.shape[1] != fit.spec.n_params:
        raise ValueError("restriction width does not match the parameter count")
    diff = A @ fit.params.to_array() - b
    middle = A @ fit.vcov @ A.T
    try:
        w = float(diff @ linalg.solve(middle, diff, assume_a="pos"))
    except linalg.LinAlgError as err:
        raise ValueError("restriction covariance is singular") from err
    k = restriction.k
    return w, k, float(stats.chi2.sf(w, k))


def parse_restrictions(expr: str, names) -> LinearRestriction:
    """Compile "name=value,name=value" into a LinearRestriction.

    Names are the flat coefficient names (e.g. alpha, x1, ar1, ma2,
    dispersion).
    """
    names = list(names)
    rows, rhs = [], []
    for part in expr.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"restriction {part!r} is not of the form name=value")
        name, _, value = part.partition("=")
        name = name.strip()
        if name not in names:
            raise ValueError(f"unknown coefficient {name!r}; known: {names}")
        try:
            rhs.append(float(value))
        except ValueError:
            raise ValueError(f"invalid restriction value {value!r}") from None
        row = np.zeros(len(names))
        row[names.index(name)] = 1.0
        rows.append(row)
    if not rows:
        raise ValueError("empty restriction expression")
    return LinearRestriction(np.vstack(rows), np.array(rhs))
