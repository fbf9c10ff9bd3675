"""In-sample fitted means and h-step-ahead mean forecasts."""

from dataclasses import dataclass

import numpy as np

from .filtering import FilterExplosionError, _validate_data, presample_values
from .model import ModelSpec, ParameterVector

__all__ = ["ForecastResult", "forecast"]


@dataclass
class ForecastResult:
    fitted: np.ndarray  # mu_hat for t = 1..n
    predicted: np.ndarray  # mu_hat_n(1..h)
    horizon: int


def forecast(fit, y, X=None, X_future=None, horizon: int = 1) -> ForecastResult:
    """Run the fitted recursion through the sample and ``horizon`` steps beyond.

    ``fit`` may be a FitResult or a (spec, params) pair. Beyond the sample the
    recursion plugs the predicted mean in for the unobserved response and sets
    the moving-average errors to zero, so this is a plug-in mean forecast.
    Future covariate rows are required whenever the model has covariates.
    """
    if isinstance(fit, tuple):
        spec, params = fit
    else:
        spec, params = fit.spec, fit.params
    spec: ModelSpec
    params: ParameterVector
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    y, X = _validate_data(spec, y, X)
    n = y.shape[0]
    if spec.s > 0:
        if horizon > 0:
            if X_future is None:
                raise ValueError("future covariates required when the model has covariates")
            X_future = np.asarray(X_future, dtype=float)
            if X_future.ndim == 1:
                X_future = X_future[:, None]
            if X_future.shape != (horizon, spec.s):
                raise ValueError(
                    f"X_future must have shape ({horizon}, {spec.s}), got {X_future.shape}"
                )
        else:
            X_future = np.empty((0, spec.s))
        X_all = np.vstack([X, X_future])
    else:
        X_all = np.empty((n + horizon, 0))

    ybar, xhat = presample_values(spec, y, X)
    g2_pre = spec.g2.eval(ybar) if spec.p > 0 else 0.0
    xhat_b = float(xhat @ params.beta)
    xb = X_all @ params.beta

    mu = np.empty(n + horizon)
    e = np.zeros(n + horizon)
    for t in range(n + horizon):
        eta = params.alpha + xb[t]
        for k in range(spec.p):
            u = t - 1 - k
            if u < 0:
                eta += params.phi_ar[k] * (g2_pre - int(spec.include_x_in_ar) * xhat_b)
            else:
                yhat = y[u] if u < n else mu[u]
                eta += params.phi_ar[k] * (
                    spec.g2.eval(yhat) - int(spec.include_x_in_ar) * xb[u]
                )
        for j in range(spec.q):
            u = t - 1 - j
            if u >= 0:
                eta += params.theta[j] * e[u]
        try:
            mu[t] = spec.g1.inverse(eta)
        except ValueError as err:
            raise FilterExplosionError(t) from err
        if t < n:
            e[t] = y[t] - mu[t]

    return ForecastResult(fitted=mu[:n], predicted=mu[n:], horizon=horizon)
