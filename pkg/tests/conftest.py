"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest

import ptsr


def reference_filter(spec, params, y, X=None):
    """Straight-line reimplementation of the mean recursion.

    Deliberately independent of the compiled kernel: plain Python loops,
    link methods called directly. Returns (eta, mu, e).
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    X = np.zeros((n, 0)) if spec.s == 0 else np.asarray(X, dtype=float).reshape(n, spec.s)
    ix = 1 if spec.include_x_in_ar else 0

    ybar = float(np.mean(y[: spec.p])) if spec.p > 0 else 0.0
    if spec.p > 0 and spec.include_x_in_ar:
        xhat = np.mean(X[: spec.p], axis=0)
    else:
        xhat = np.zeros(spec.s)

    eta = np.empty(n)
    mu = np.empty(n)
    e = np.empty(n)
    for t in range(n):
        v = params.alpha + float(X[t] @ params.beta)
        for k in range(1, spec.p + 1):
            if t - k >= 0:
                v += params.phi_ar[k - 1] * (
                    spec.g2.eval(y[t - k]) - ix * float(X[t - k] @ params.beta)
                )
            else:
                v += params.phi_ar[k - 1] * (
                    spec.g2.eval(ybar) - ix * float(xhat @ params.beta)
                )
        for j in range(1, spec.q + 1):
            if t - j >= 0:
                v += params.theta[j - 1] * e[t - j]
        eta[t] = v
        mu[t] = spec.g1.inverse(v)
        e[t] = y[t] - mu[t]
    return eta, mu, e


def numerical_score(spec, params, y, X=None, order=5):
    """Central finite differences of the log-likelihood (3- or 5-point)."""
    flat = params.to_array()
    grad = np.empty_like(flat)

    def ll(v):
        return ptsr.log_likelihood(spec, ptsr.ParameterVector.from_array(spec, v), y, X)

    for i in range(len(flat)):
        h = 1e-5 * max(1.0, abs(flat[i]))
        if i == len(flat) - 1:
            h = min(h, 0.4 * flat[i])  # keep the dispersion positive
        def at(delta):
            v = flat.copy()
            v[i] += delta
            return ll(v)

        if order == 5:
            grad[i] = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h)
        else:
            grad[i] = (at(h) - at(-h)) / (2 * h)
    return grad


def numerical_hessian(spec, params, y, X=None):
    """Central second differences of the log-likelihood."""
    flat = params.to_array()
    m = len(flat)
    H = np.empty((m, m))

    def ll(v):
        return ptsr.log_likelihood(spec, ptsr.ParameterVector.from_array(spec, v), y, X)

    steps = np.array([1e-4 * max(1.0, abs(v)) for v in flat])
    steps[-1] = min(steps[-1], 0.2 * flat[-1])
    f0 = ll(flat)
    for i in range(m):
        for j in range(i, m):
            hi, hj = steps[i], steps[j]
            if i == j:
                vp, vm = flat.copy(), flat.copy()
                vp[i] += hi
                vm[i] -= hi
                H[i, i] = (ll(vp) - 2 * f0 + ll(vm)) / hi**2
            else:
                vpp, vpm, vmp, vmm = (flat.copy() for _ in range(4))
                vpp[i] += hi; vpp[j] += hj
                vpm[i] += hi; vpm[j] -= hj
                vmp[i] -= hi; vmp[j] += hj
                vmm[i] -= hi; vmm[j] -= hj
                H[i, j] = H[j, i] = (ll(vpp) - ll(vpm) - ll(vmp) + ll(vmm)) / (
                    4 * hi * hj
                )
    return H


def random_feasible_case(rng, n=200):
    """Draw a random (spec, params, y, X) with a feasible filter."""
    for _ in range(100):
        family = ptsr.get_family(rng.choice(["gamma", "inverse_gaussian"]))
        g1 = ptsr.get_link(rng.choice(["log", "identity", "sqrt"]))
        g2 = ptsr.get_link(rng.choice(["log", "identity", "sqrt"]))
        p, q = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        s = int(rng.integers(0, 3))
        ix = bool(rng.integers(0, 2)) and s > 0 and p > 0
        spec = ptsr.ModelSpec(
            family=family, p=p, q=q, s=s, include_x_in_ar=ix, g1=g1, g2=g2
        )
        # positive base level keeps identity/sqrt mean links feasible
        alpha = 2.0 if g1.kind != "log" else 0.4
        params = ptsr.ParameterVector(
            alpha=alpha,
            beta=rng.uniform(-0.1, 0.1, size=s),
            phi_ar=rng.uniform(-0.15, 0.15, size=p),
            theta=rng.uniform(-0.1, 0.1, size=q),
            phi_disp=float(rng.uniform(1.0, 5.0)),
        )
        y = rng.gamma(shape=4.0, scale=0.5, size=n)
        X = rng.uniform(size=(n, s))
        try:
            ptsr.run_filter(spec, params, y, X)
        except (ptsr.FilterExplosionError, ValueError):
            continue
        return spec, params, y, X
    raise RuntimeError("could not draw a feasible random case")


# the stable Gamma ARMA(1,1)-with-covariate design used by the Monte Carlo tests
STABLE_SPEC = dict(p=1, q=1, s=1)
STABLE_PARAMS = dict(alpha=0.1, beta=[0.3], phi_ar=[0.3], theta=[0.1], phi_disp=4.0)


@pytest.fixture(scope="session")
def gamma_arma_case():
    spec = ptsr.ModelSpec(family=ptsr.get_family("gamma"), **STABLE_SPEC)
    params = ptsr.ParameterVector(**STABLE_PARAMS)
    y, X, mu = ptsr.simulate(
        ptsr.SimulationRequest(spec=spec, params=params, n=2000, seed=42)
    )
    return spec, params, y, X, mu


@pytest.fixture(scope="session")
def gamma_arma_fit(gamma_arma_case):
    spec, _, y, X, _ = gamma_arma_case
    result = ptsr.fit(spec, y, X)
    assert result.converged and result.has_vcov
    return result, y, X
