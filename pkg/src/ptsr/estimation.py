"""Partial maximum likelihood estimation."""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .filtering import (
    FilterExplosionError,
    conditional_information,
    log_likelihood,
    run_filter,
    score,
)
from .model import ModelSpec, ParameterVector

__all__ = ["FitOptions", "FitResult", "starting_values", "fit"]

_DISP_FLOOR = 0.01


@dataclass
class FitOptions:
    max_iterations: int = 500
    g_tol: float = 1e-8  # inf-norm of the score
    step_tol: float = 1e-10
    start: ParameterVector = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.g_tol <= 0 or self.step_tol <= 0:
            raise ValueError("tolerances must be > 0")


@dataclass
class FitResult:
    spec: ModelSpec
    params: ParameterVector
    loglik: float
    info_matrix: np.ndarray
    vcov: np.ndarray  # None when the information matrix is singular
    std_errors: np.ndarray  # None when vcov is unavailable
    converged: bool
    iterations: int
    n: int
    message: str = ""

    @property
    def has_vcov(self) -> bool:
        return self.vcov is not None


def starting_values(spec: ModelSpec, y, X=None) -> ParameterVector:
    """OLS of g1(y) on (1, X) for alpha/beta; AR and MA start at zero;
    method-of-moments dispersion from the OLS residuals, floored at 0.01."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n <= spec.n_params:
        raise ValueError("sample too short for the number of parameters")
    if spec.s > 0:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        design = np.column_stack([np.ones(n), X])
    else:
        design = np.ones((n, 1))
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ValueError("OLS design for starting values is rank deficient")
    coef, *_ = np.linalg.lstsq(design, spec.g1.eval(y), rcond=None)
    mu0 = spec.g1.inverse(np.clip(design @ coef, *_eta_bounds(spec)))
    resid = y - mu0

    # variance function: Gamma mu^2/phi, inverse Gaussian mu^3/phi
    power = 2.0 if spec.family.name == "gamma" else 3.0
    denom = float(np.sum(resid**2))
    disp = float(np.sum(mu0**power)) / denom if denom > 0 else 1.0
    return ParameterVector(
        alpha=coef[0],
        beta=coef[1:],
        phi_ar=np.zeros(spec.p),
        theta=np.zeros(spec.q),
        phi_disp=max(disp, _DISP_FLOOR),
    )


def _eta_bounds(spec):
    if spec.g1.kind == "log":
        return -700.0, 700.0
    return 1e-300, 1e150


def _to_opt(params: ParameterVector) -> np.ndarray:
    z = params.to_array()
    z[-1] = np.log(z[-1])
    return z


def _from_opt(spec: ModelSpec, z) -> ParameterVector:
    flat = np.array(z, dtype=float)
    flat[-1] = np.exp(flat[-1])
    return ParameterVector.from_array(spec, flat)


def fit(spec: ModelSpec, y, X=None, options: FitOptions = None) -> FitResult:
    """Maximize the partial log-likelihood with analytic gradients.

    Quasi-Newton (BFGS) ascent on (rho, log dispersion), followed by
    information-matrix scoring steps to drive the score below ``g_tol``.
    Infeasible parameter points (filter range failures) score -inf and are
    rejected by the line search.
    """
    options = options or FitOptions()
    start = options.start or starting_values(spec, y, X)
    start.check_dims(spec)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]

    try:
        ll_start = log_likelihood(spec, start, y, X)
    except FilterExplosionError as err:
        raise ValueError(f"infeasible starting point: {err}") from err
    if not np.isfinite(ll_start):
        raise ValueError("infeasible starting point: non-finite log-likelihood")

    def neg_ll_grad(z):
        gamma = _from_opt(spec, z)
        try:
            filt = run_filter(spec, gamma, y, X)
        except FilterExplosionError:
            return np.inf, np.zeros_like(z)
        ll = log_likelihood(spec, gamma, y, X, filt=filt)
        if not np.isfinite(ll):
            return np.inf, np.zeros_like(z)
        grad = -score(spec, gamma, y, X, filt=filt)
        grad[-1] *= gamma.phi_disp  # chain rule for the log reparameterization
        return -ll, grad

    res = optimize.minimize(
        neg_ll_grad,
        _to_opt(start),
        jac=True,
        method="BFGS",
        options={"gtol": options.g_tol / 10.0, "maxiter": options.max_iterations},
    )
    best = _from_opt(spec, res.x)
    best_ll = -res.fun if np.isfinite(res.fun) else ll_start
    if not np.isfinite(res.fun) or best_ll < ll_start:
        best, best_ll = start, ll_start
    iterations = int(res.nit)

    # scoring polish: Newton-type steps with K_n as curvature, in the
    # reparameterized space so the dispersion stays positive. Near the
    # optimum the likelihood gain is below double rounding, so steps are
    # also accepted when they strictly shrink the score norm without a
    # measurable likelihood loss.
    u = score(spec, best, y, X)
    u_norm = float(np.max(np.abs(u)))
    ll_slack = 1e-9 * (1.0 + abs(best_ll))
    while u_norm > options.g_tol and iterations < options.max_iterations:
        iterations += 1
        K = conditional_information(spec, best, y, X)
        jac = np.ones(spec.n_params)
        jac[-1] = best.phi_disp
        u_z = u * jac
        K_z = K * np.outer(jac, jac)
        try:
            direction = linalg.solve(K_z, u_z, assume_a="pos")
        except linalg.LinAlgError:
            direction = u_z / max(1.0, np.max(np.abs(u_z)))
        z = _to_opt(best)
        step = 1.0
        accepted = False
        prev_norm = u_norm
        for _ in range(40):
            cand = _from_opt(spec, z + step * direction)
            try:
                cand_filt = run_filter(spec, cand, y, X)
                cand_ll = log_likelihood(spec, cand, y, X, filt=cand_filt)
            except FilterExplosionError:
                cand_ll = -np.inf
            if np.isfinite(cand_ll):
                cand_u = score(spec, cand, y, X, filt=cand_filt)
                cand_norm = float(np.max(np.abs(cand_u)))
                if cand_ll >= best_ll or (
                    cand_norm < 0.9 * u_norm and cand_ll >= best_ll - ll_slack
                ):
                    best, best_ll = cand, cand_ll
                    u, u_norm = cand_u, cand_norm
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            break
        # a tiny step is only a stopping signal when it stopped helping:
        # near the optimum the Newton step is O(u) and shrinks the score
        # norm by orders of magnitude even when it barely moves gamma
        if (
            step * float(np.max(np.abs(direction))) < options.step_tol
            and u_norm >= 0.9 * prev_norm
        ):
            break

    converged = bool(u_norm <= options.g_tol)

    K = conditional_information(spec, best, y, X)
    vcov = std_errors = None
    try:
        c, low = linalg.cho_factor(K)
        vcov = linalg.cho_solve((c, low), np.eye(spec.n_params))
        std_errors = np.sqrt(np.diag(vcov))
    except linalg.LinAlgError:
        pass

    return FitResult(
        spec=spec,
        params=best,
        loglik=best_ll,
        info_matrix=K,
        vcov=vcov,
        std_errors=std_errors,
        converged=converged,
        iterations=iterations,
        n=n,
        message=str(res.message),
    )
