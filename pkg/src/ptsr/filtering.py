"""In-sample filter: conditional means, partial log-likelihood, score and
conditional information matrix."""

from dataclasses import dataclass

import numpy as np

from ._recursions import filter_kernel
from .model import ModelSpec, ParameterVector

__all__ = [
    "FilterExplosionError",
    "FilterOutput",
    "run_filter",
    "log_likelihood",
    "score",
    "conditional_information",
]


class FilterExplosionError(RuntimeError):
    """The recursion produced a conditional mean outside (0, inf)."""

    def __init__(self, t: int):
        super().__init__(f"conditional mean left (0, inf) at t={t + 1}")
        self.t = t


@dataclass
class FilterOutput:
    """Per-t sequences produced by the recursion.

    ``deriv`` holds d eta_t / d rho_j for the mean-structure parameters in
    flat order (alpha, beta, ar, ma); ``dmu_deta`` is 1/g1'(mu_t).
    """

    eta: np.ndarray
    mu: np.ndarray
    e: np.ndarray
    dmu_deta: np.ndarray
    deriv: np.ndarray = None


def _validate_data(spec: ModelSpec, y, X):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] < 1:
        raise ValueError("y must be a nonempty 1-d array")
    if not np.all(np.isfinite(y)) or np.any(y <= 0.0):
        raise ValueError("y must be strictly positive and finite")
    n = y.shape[0]
    if spec.s == 0:
        X = np.empty((n, 0))
    else:
        if X is None:
            raise ValueError(f"spec declares s={spec.s} covariates but X is None")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape != (n, spec.s):
            raise ValueError(f"X must have shape ({n}, {spec.s}), got {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("X must be finite")
    return y, X


def presample_values(spec: ModelSpec, y, X):
    """Pre-sample response / covariate stand-ins used for lags with t < 1.

    The response stand-in is the mean of the first p observations (0 when
    p = 0, in which case it is never referenced); the covariate stand-in is
    the column mean of the first p rows when the AR correction uses the
    covariates, else zero.
    """
    ybar = float(np.mean(y[: spec.p])) if spec.p > 0 else 0.0
    if spec.p > 0 and spec.include_x_in_ar:
        xhat = np.mean(X[: spec.p], axis=0)
    else:
        xhat = np.zeros(spec.s)
    return ybar, xhat


def run_filter(
    spec: ModelSpec,
    params: ParameterVector,
    y,
    X=None,
    derivatives: bool = True,
    _theta_factor: bool = True,
    _phi_deriv_link=None,
) -> FilterOutput:
    """Run the recursion over t = 1..n.

    The two underscore options select the derivative-recursion variant and
    exist only so tests can demonstrate that the implemented variant (theta
    factor present in the MA derivative, g2 in the AR derivative) is the one
    consistent with the finite-difference gradient.
    """
    y, X = _validate_data(spec, y, X)
    params.check_dims(spec)
    ybar, xhat = presample_values(spec, y, X)

    gphi = spec.g2 if _phi_deriv_link is None else _phi_deriv_link
    g2_pre = gphi_pre = 0.0
    if spec.p > 0:
        g2_pre = spec.g2.eval(ybar)
        gphi_pre = gphi.eval(ybar)

    eta, mu, e, t1, deriv, fail_t = filter_kernel(
        y,
        X,
        params.alpha,
        params.beta,
        params.phi_ar,
        params.theta,
        spec.g1.code,
        spec.g2.code,
        1 if spec.include_x_in_ar else 0,
        g2_pre,
        gphi.code,
        gphi_pre,
        xhat,
        derivatives,
        _theta_factor,
    )
    if fail_t >= 0:
        raise FilterExplosionError(fail_t)
    return FilterOutput(eta, mu, e, t1, deriv if derivatives else None)


def log_likelihood(spec, params, y, X=None, filt: FilterOutput = None) -> float:
    """Partial log-likelihood: sum of conditional log-densities."""
    if filt is None:
        filt = run_filter(spec, params, y, X, derivatives=False)
    y = np.asarray(y, dtype=float)
    return float(np.sum(spec.family.log_density(y, filt.mu, params.phi_disp)))


def score(spec, params, y, X=None, filt: FilterOutput = None) -> np.ndarray:
    """Analytic score in flat parameter order (alpha, beta, ar, ma, dispersion)."""
    if filt is None or filt.deriv is None:
        filt = run_filter(spec, params, y, X, derivatives=True)
    y = np.asarray(y, dtype=float)
    h1 = spec.family.dl_dmu(y, filt.mu, params.phi_disp)
    h2 = spec.family.dl_dphi(y, filt.mu, params.phi_disp)
    u_rho = filt.deriv.T @ (filt.dmu_deta * h1)
    return np.concatenate([u_rho, [np.sum(h2)]])


def conditional_information(spec, params, y, X=None, filt: FilterOutput = None):
    """Conditional information matrix K_n at (spec, params).

    Assembled from the per-t expectation weights: the mean-structure block is
    a Gram matrix of the derivative rows, the cross block couples the mean
    structure with the dispersion (zero for both built-in families), and the
    dispersion entry is a plain sum.
    """
    if filt is None or filt.deriv is None:
        filt = run_filter(spec, params, y, X, derivatives=True)
    e_mu, e_muphi, e_phiphi = spec.family.fisher_blocks(filt.mu, params.phi_disp)
    m = spec.n_params
    K = np.empty((m, m))
    w = np.asarray(e_mu) * filt.dmu_deta**2
    K[:-1, :-1] = filt.deriv.T @ (w[:, None] * filt.deriv)
    cross = filt.deriv.T @ (filt.dmu_deta * np.asarray(e_muphi))
    K[:-1, -1] = cross
    K[-1, :-1] = cross
    K[-1, -1] = float(np.sum(e_phiphi))
    return K
