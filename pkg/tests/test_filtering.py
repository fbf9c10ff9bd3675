import math

import numpy as np
import pytest

import ptsr
from ptsr import (
    FilterExplosionError,
    ModelSpec,
    ParameterVector,
    conditional_information,
    get_family,
    get_link,
    log_likelihood,
    run_filter,
    score,
)

from conftest import numerical_score, random_feasible_case, reference_filter

GAMMA = get_family("gamma")


def test_static_model_constant_mean():
    spec = ModelSpec(family=GAMMA)
    params = ParameterVector(alpha=0.7)
    y = np.full(20, 1.3)
    out = run_filter(spec, params, y)
    assert np.all(out.eta == 0.7)
    assert np.allclose(out.mu, math.exp(0.7), rtol=1e-15)
    assert np.array_equal(out.e, y - out.mu)


def test_one_step_ar_recursion_by_hand():
    spec = ModelSpec(family=GAMMA, p=1)
    params = ParameterVector(alpha=0.0, phi_ar=[0.5])
    y = np.array([math.e**2, 1.0])
    out = run_filter(spec, params, y)
    assert out.eta[1] == pytest.approx(1.0, rel=1e-14)
    assert out.mu[1] == pytest.approx(math.e, rel=1e-14)


def test_alpha_column_is_one_without_ma_terms():
    rng = np.random.default_rng(0)
    spec = ModelSpec(family=GAMMA, p=2, s=1)
    params = ParameterVector(alpha=0.2, beta=[0.1], phi_ar=[0.2, 0.1])
    y = rng.gamma(4.0, 0.5, size=50)
    out = run_filter(spec, params, y, rng.uniform(size=(50, 1)))
    assert np.all(out.deriv[:, 0] == 1.0)


@pytest.mark.parametrize("seed", range(8))
def test_filter_matches_reference_reimplementation(seed):
    rng = np.random.default_rng(seed)
    spec, params, y, X = random_feasible_case(rng, n=100)
    out = run_filter(spec, params, y, X)
    eta_ref, mu_ref, e_ref = reference_filter(spec, params, y, X)
    assert np.allclose(out.eta, eta_ref, rtol=1e-12, atol=1e-12)
    assert np.allclose(out.mu, mu_ref, rtol=1e-12)
    assert np.allclose(out.e, e_ref, rtol=1e-12, atol=1e-12)
    assert np.all(np.isfinite(out.deriv))


def test_loglik_static_exponential():
    spec = ModelSpec(family=GAMMA)
    params = ParameterVector(alpha=0.0, phi_disp=1.0)
    assert log_likelihood(spec, params, np.array([1.0, 1.0])) == pytest.approx(
        -2.0, rel=1e-14
    )


def test_loglik_single_observation_matches_family():
    spec = ModelSpec(family=GAMMA)
    params = ParameterVector(alpha=0.4, phi_disp=2.5)
    y = np.array([1.7])
    mu = math.exp(0.4)
    assert log_likelihood(spec, params, y) == pytest.approx(
        GAMMA.log_density(1.7, mu, 2.5), rel=1e-14
    )


@pytest.mark.parametrize("seed", range(6))
def test_loglik_is_sum_of_per_t_densities(seed):
    rng = np.random.default_rng(100 + seed)
    spec, params, y, X = random_feasible_case(rng, n=80)
    out = run_filter(spec, params, y, X)
    expected = sum(
        spec.family.log_density(yt, mt, params.phi_disp) for yt, mt in zip(y, out.mu)
    )
    assert log_likelihood(spec, params, y, X) == pytest.approx(expected, rel=1e-12)


def test_score_zero_when_y_equals_mu():
    # constant series with alpha matched: mu_t == y_t, Gamma score vanishes
    spec = ModelSpec(family=GAMMA, p=1, q=1)
    c = 2.0
    params = ParameterVector(alpha=math.log(c), phi_ar=[0.0], theta=[0.0])
    y = np.full(30, c)
    u = score(spec, params, y)
    assert np.allclose(u[:-1], 0.0, atol=1e-13)


@pytest.mark.parametrize("seed", range(10))
def test_score_matches_finite_differences(seed):
    rng = np.random.default_rng(200 + seed)
    spec, params, y, X = random_feasible_case(rng, n=200)
    u = score(spec, params, y, X)
    fd = numerical_score(spec, params, y, X)
    denom = np.maximum(np.abs(fd), 1e-4)
    assert np.max(np.abs(u - fd) / denom) < 1e-5


def test_information_symmetric_positive_semidefinite(gamma_arma_case):
    spec, params, y, X, _ = gamma_arma_case
    K = conditional_information(spec, params, y, X)
    assert np.allclose(K, K.T, rtol=1e-12)
    eigs = np.linalg.eigvalsh(K)
    assert eigs.min() >= -1e-8 * np.linalg.norm(K)


def test_gamma_dispersion_block_is_zero(gamma_arma_case):
    spec, params, y, X, _ = gamma_arma_case
    K = conditional_information(spec, params, y, X)
    assert np.all(K[:-1, -1] == 0.0)
    assert np.all(K[-1, :-1] == 0.0)
    assert K[-1, -1] > 0.0


def test_martingale_difference_property():
    spec = ModelSpec(family=GAMMA, p=1, q=1)
    params = ParameterVector(alpha=0.1, phi_ar=[0.3], theta=[0.1], phi_disp=4.0)
    n = 10**5
    y, _, mu = ptsr.simulate(
        ptsr.SimulationRequest(spec=spec, params=params, n=n, seed=3)
    )
    e = y - mu
    assert abs(e.mean()) < 3.0 * e.std() / math.sqrt(n)
    d = e - e.mean()
    denom = d @ d
    for lag in range(1, 6):
        rho = (d[lag:] @ d[:-lag]) / denom
        assert abs(rho) < 3.0 / math.sqrt(n)


def test_ix_toggle_changes_only_beta_columns():
    # beta = 0 isolates the derivative effect: eta itself is unchanged by
    # the toggle, and the MA correction recursion is column-separable
    rng = np.random.default_rng(5)
    y = rng.gamma(4.0, 0.5, size=120)
    X = rng.uniform(size=(120, 2))
    params = ParameterVector(
        alpha=0.2, beta=[0.0, 0.0], phi_ar=[0.3], theta=[0.1], phi_disp=2.0
    )
    d = {
        ix: run_filter(
            ModelSpec(family=GAMMA, p=1, q=1, s=2, include_x_in_ar=ix), params, y, X
        ).deriv
        for ix in (False, True)
    }
    beta_cols = [1, 2]
    other_cols = [0, 3, 4]
    assert not np.allclose(d[False][:, beta_cols], d[True][:, beta_cols])
    assert np.allclose(d[False][:, other_cols], d[True][:, other_cols])
    # with theta = 0 the correction equals -sum_k phi_k X_{t-k,i} exactly
    params0 = ParameterVector(
        alpha=0.2, beta=[0.0, 0.0], phi_ar=[0.3], theta=[0.0], phi_disp=2.0
    )
    d0 = {
        ix: run_filter(
            ModelSpec(family=GAMMA, p=1, q=1, s=2, include_x_in_ar=ix), params0, y, X
        ).deriv
        for ix in (False, True)
    }
    diff = d0[True][:, 1] - d0[False][:, 1]
    expect = np.empty(120)
    expect[0] = -0.3 * X[:1, 0].mean()
    expect[1:] = -0.3 * X[:-1, 0]
    assert np.allclose(diff, expect, rtol=1e-12, atol=1e-14)


def test_phi_derivative_exact_when_theta_zero():
    rng = np.random.default_rng(6)
    y = rng.gamma(4.0, 0.5, size=60)
    spec = ModelSpec(family=GAMMA, p=2, q=0, g2=get_link("identity"))
    params = ParameterVector(alpha=0.1, phi_ar=[0.2, 0.1], phi_disp=2.0)
    out = run_filter(spec, params, y)
    ybar = y[:2].mean()
    for t in range(60):
        for k in (1, 2):
            expect = y[t - k] if t - k >= 0 else ybar
            assert out.deriv[t, k] == pytest.approx(expect, rel=1e-14)


def test_range_error_reports_time_index():
    spec = ModelSpec(family=GAMMA, p=1, g1=get_link("identity"), g2=get_link("identity"))
    params = ParameterVector(alpha=2.5, phi_ar=[-0.5])
    y = np.array([1.0, 5.0, 5.0])
    with pytest.raises(FilterExplosionError) as exc:
        run_filter(spec, params, y)
    assert exc.value.t == 2  # eta_3 = 2.5 - 0.5*5 = 0 has no identity-link mean


def test_dimension_mismatch_rejected():
    spec = ModelSpec(family=GAMMA, s=2)
    params = ParameterVector(alpha=0.1, beta=[0.1, 0.2])
    y = np.full(10, 1.0)
    with pytest.raises(ValueError):
        run_filter(spec, params, y, np.ones((9, 2)))
    with pytest.raises(ValueError):
        run_filter(spec, params, y, None)
    with pytest.raises(ValueError):
        run_filter(spec, ParameterVector(alpha=0.1, beta=[0.1]), y, np.ones((10, 2)))


def test_nonpositive_response_rejected():
    spec = ModelSpec(family=GAMMA)
    with pytest.raises(ValueError):
        run_filter(spec, ParameterVector(alpha=0.0), np.array([1.0, -1.0, 2.0]))
