"""Compiled core of the conditional-mean recursion and its derivatives.

Kept free of Python objects so numba can JIT it; the public wrappers live in
``filtering``. Link kinds are passed as integer codes (0 = log, 1 = identity,
2 = sqrt). On failure the kernel reports the offending time index instead of
raising.
"""

import numpy as np
from numba import njit

# matches Link.code
LOG, IDENTITY, SQRT = 0, 1, 2

# feasibility bounds: keep mu small enough that mu^3 (inverse Gaussian
# information weights) stays finite in double precision
_ETA_MAX = 200.0
_MU_MAX = 1e90


@njit(cache=True, inline="always")
def _g_eval(code, x):
    if code == LOG:
        return np.log(x)
    elif code == IDENTITY:
        return x
    return np.sqrt(x)


@njit(cache=True, inline="always")
def _g1_inverse(code, eta):
    # returns nan when eta has no positive preimage / overflows
    if code == LOG:
        if eta > _ETA_MAX or eta < -_ETA_MAX:
            return np.nan
        return np.exp(eta)
    elif code == IDENTITY:
        if eta <= 0.0 or eta > _MU_MAX:
            return np.nan
        return eta
    if eta <= 0.0 or eta * eta > _MU_MAX:
        return np.nan
    return eta * eta


@njit(cache=True, inline="always")
def _dmu_deta(code, mu):
    # 1 / g1'(mu)
    if code == LOG:
        return mu
    elif code == IDENTITY:
        return 1.0
    return 2.0 * np.sqrt(mu)


@njit(cache=True)
def filter_kernel(
    y,
    X,
    alpha,
    beta,
    phi,
    theta,
    g1_code,
    g2_code,
    ix,
    g2_pre,
    gphi_code,
    gphi_pre,
    xhat,
    want_deriv,
    theta_factor_in_ma_deriv,
):
    """Run the mean recursion for t = 1..n.

    Pre-sample lags use ``g2_pre`` (= g2 of the mean of the first p
    observations), ``xhat`` (pre-sample covariate row) and zero errors /
    derivatives. ``gphi_code``/``gphi_pre`` select the link used in the
    AR-coefficient derivative rows (normally g2). Returns
    (eta, mu, e, T1, D, fail_t) with fail_t = -1 on success.
    """
    n = y.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    s = beta.shape[0]
    m = 1 + s + p + q

    eta = np.empty(n)
    mu = np.empty(n)
    e = np.empty(n)
    T1 = np.empty(n)
    D = np.zeros((n, m))

    xb = np.zeros(n)
    for t in range(n):
        acc = 0.0
        for i in range(s):
            acc += X[t, i] * beta[i]
        xb[t] = acc
    xhat_b = 0.0
    for i in range(s):
        xhat_b += xhat[i] * beta[i]

    for t in range(n):
        v = alpha + xb[t]
        for k in range(p):
            u = t - 1 - k
            if u >= 0:
                v += phi[k] * (_g_eval(g2_code, y[u]) - ix * xb[u])
            else:
                v += phi[k] * (g2_pre - ix * xhat_b)
        for j in range(q):
            u = t - 1 - j
            if u >= 0:
                v += theta[j] * e[u]
        if not np.isfinite(v):
            return eta, mu, e, T1, D, t
        eta[t] = v
        m_t = _g1_inverse(g1_code, v)
        if not np.isfinite(m_t) or m_t <= 0.0:
            return eta, mu, e, T1, D, t
        mu[t] = m_t
        e[t] = y[t] - m_t
        T1[t] = _dmu_deta(g1_code, m_t)

        if want_deriv:
            D[t, 0] = 1.0
            for i in range(s):
                acc = X[t, i]
                if ix == 1:
                    for k in range(p):
                        u = t - 1 - k
                        if u >= 0:
                            acc -= phi[k] * X[u, i]
                        else:
                            acc -= phi[k] * xhat[i]
                D[t, 1 + i] = acc
            for k in range(p):
                u = t - 1 - k
                if u >= 0:
                    val = _g_eval(gphi_code, y[u]) - ix * xb[u]
                else:
                    val = gphi_pre - ix * xhat_b
                D[t, 1 + s + k] = val
            for j in range(q):
                u = t - 1 - j
                if u >= 0:
                    D[t, 1 + s + p + j] = e[u]
            for j in range(q):
                u = t - 1 - j
                if u >= 0:
                    c = theta[j] * T1[u]
                    if theta_factor_in_ma_deriv:
                        c_theta = c
                    else:
                        c_theta = T1[u]
                    for col in range(m):
                        if col >= 1 + s + p:
                            D[t, col] -= c_theta * D[u, col]
                        else:
                            D[t, col] -= c * D[u, col]

    return eta, mu, e, T1, D, -1
