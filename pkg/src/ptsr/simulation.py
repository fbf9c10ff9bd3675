"""Synthetic series generation for testing and Monte Carlo studies."""

import math
from dataclasses import dataclass

import numpy as np

from .filtering import FilterExplosionError
from .model import ModelSpec, ParameterVector

__all__ = ["SimulationRequest", "simulate"]

_ETA_MAX = 700.0


@dataclass
class SimulationRequest:
    spec: ModelSpec
    params: ParameterVector
    n: int
    burn_in: int = 500
    X: np.ndarray = None  # (n + burn_in) x s; generated uniform when None
    seed: int = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")


def _scalar_links(spec: ModelSpec):
    # math-module scalar versions of g2 and inverse g1; the loop below is
    # per-step sequential, so the array wrappers in links are too slow here
    g2 = {
        "log": math.log,
        "identity": lambda v: v,
        "sqrt": math.sqrt,
    }[spec.g2.kind]

    kind = spec.g1.kind
    if kind == "log":
        def g1_inv(eta):
            if not -_ETA_MAX < eta < _ETA_MAX:
                return math.nan
            return math.exp(eta)
    elif kind == "identity":
        def g1_inv(eta):
            return eta if eta > 0.0 else math.nan
    else:
        def g1_inv(eta):
            return eta * eta if eta > 0.0 else math.nan
    return g2, g1_inv


def simulate(req: SimulationRequest):
    """Iterate the mean recursion generatively and draw each response from
    the conditional family.

    The first p steps of the burn-in use the static mean (AR and MA terms
    switched off) as a warm start; its influence dies out over the burn-in.
    Returns (y, X, mu_true), each with the burn-in discarded.
    """
    spec, params = req.spec, req.params
    params.check_dims(spec)
    rng = np.random.default_rng(req.seed)
    total = req.n + req.burn_in

    if spec.s == 0:
        X = np.empty((total, 0))
    elif req.X is None:
        X = rng.uniform(size=(total, spec.s))
    else:
        X = np.asarray(req.X, dtype=float)
        if X.shape != (total, spec.s):
            raise ValueError(f"X must have shape ({total}, {spec.s}), got {X.shape}")

    g2, g1_inv = _scalar_links(spec)
    if spec.family.name == "gamma":
        def draw(mu_t):
            return rng.gamma(shape=disp, scale=mu_t / disp)
    else:
        def draw(mu_t):
            return rng.wald(mean=mu_t, scale=disp)

    alpha = params.alpha
    phi = params.phi_ar.tolist()
    theta = params.theta.tolist()
    disp = params.phi_disp
    ix = bool(spec.include_x_in_ar)
    xb = (X @ params.beta).tolist() if spec.s else [0.0] * total
    p, q = spec.p, spec.q

    y = np.empty(total)
    mu = np.empty(total)
    e = [0.0] * total
    for t in range(total):
        eta = alpha + xb[t]
        if t >= p:
            for k in range(p):
                u = t - 1 - k
                eta += phi[k] * (g2(y[u]) - (xb[u] if ix else 0.0))
            for j in range(q):
                u = t - 1 - j
                if u >= 0:
                    eta += theta[j] * e[u]
        mu_t = g1_inv(eta)
        if not math.isfinite(mu_t) or mu_t <= 0.0:
            raise FilterExplosionError(t)
        mu[t] = mu_t
        y_t = draw(mu_t)
        y[t] = y_t
        e[t] = y_t - mu_t

    b = req.burn_in
    return y[b:], X[b:], mu[b:]
