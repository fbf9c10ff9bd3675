"""Conditional distribution families on (0, inf).

Each family is parameterized by the conditional mean ``mu`` and a
time-constant dispersion ``phi``:

* Gamma: shape ``phi``, scale ``mu/phi``, so E = mu, Var = mu^2 / phi.
* Inverse Gaussian: mean ``mu``, shape ``lambda = phi``, so E = mu,
  Var = mu^3 / phi.

Besides the log-density and its mu/phi derivatives, each family exposes the
conditional expectations of the negative second derivatives (the diagonal
weights that build the conditional information matrix), plus CDF, quantile
and a sampler.
"""

from abc import ABC, abstractmethod

import numpy as np
from scipy import special, stats

__all__ = ["Family", "Gamma", "InverseGaussian", "get_family", "FAMILIES"]


def _check_positive(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise ValueError(f"{name} must be finite and > 0")
    return x


def _maybe_scalar(x):
    x = np.asarray(x)
    return x if x.ndim else float(x)


class Family(ABC):
    """Base class for mean-parameterized positive distributions."""

    name: str

    @abstractmethod
    def log_density(self, y, mu, phi):
        """log f(y | mu, phi)."""

    @abstractmethod
    def dl_dmu(self, y, mu, phi):
        """d log f / d mu."""

    @abstractmethod
    def dl_dphi(self, y, mu, phi):
        """d log f / d phi."""

    @abstractmethod
    def fisher_blocks(self, mu, phi):
        """(E_mu, E_muphi, E_phiphi): conditional expectations of the
        negative second derivatives of the log-density, evaluated
        elementwise in mu."""

    @abstractmethod
    def cdf(self, y, mu, phi):
        """F(y | mu, phi)."""

    @abstractmethod
    def quantile(self, u, mu, phi):
        """Inverse CDF at probability u."""

    @abstractmethod
    def sample(self, mu, phi, rng):
        """Draw with mean mu; deterministic given the generator state."""

    def __repr__(self):
        return f"{type(self).__name__}()"

    def __eq__(self, other):
        return type(other) is type(self)

    def __hash__(self):
        return hash(type(self))


class Gamma(Family):
    """Gamma family: shape phi, scale mu/phi."""

    name = "gamma"

    def log_density(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        out = (
            phi * np.log(phi / mu)
            - special.gammaln(phi)
            + (phi - 1.0) * np.log(y)
            - phi * y / mu
        )
        return _maybe_scalar(out)

    def dl_dmu(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(phi * (y - mu) / mu**2)

    def dl_dphi(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        out = np.log(phi / mu) + 1.0 - special.digamma(phi) + np.log(y) - y / mu
        return _maybe_scalar(out)

    def fisher_blocks(self, mu, phi):
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        e_mu = phi / mu**2
        e_muphi = np.zeros_like(e_mu)
        e_phiphi = np.broadcast_to(
            special.polygamma(1, phi) - 1.0 / phi, e_mu.shape
        ).copy()
        return _maybe_scalar(e_mu), _maybe_scalar(e_muphi), _maybe_scalar(e_phiphi)

    def _frozen(self, mu, phi):
        return stats.gamma(a=phi, scale=np.asarray(mu, dtype=float) / phi)

    def cdf(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(self._frozen(mu, phi).cdf(y))

    def quantile(self, u, mu, phi):
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0.0) or np.any(u >= 1.0):
            raise ValueError("quantile probability must lie in (0, 1)")
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(self._frozen(mu, phi).ppf(u))

    def sample(self, mu, phi, rng):
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(rng.gamma(shape=phi, scale=mu / phi))


class InverseGaussian(Family):
    """Inverse Gaussian family: mean mu, shape lambda = phi.

    scipy's ``invgauss`` uses (mu_s, scale) with mean mu_s * scale; our
    (mu, phi) maps to mu_s = mu / phi, scale = phi.
    """

    name = "inverse_gaussian"

    def log_density(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        out = (
            0.5 * np.log(phi)
            - 0.5 * np.log(2.0 * np.pi * y**3)
            - phi * (y - mu) ** 2 / (2.0 * mu**2 * y)
        )
        return _maybe_scalar(out)

    def dl_dmu(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(phi * (y - mu) / mu**3)

    def dl_dphi(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(0.5 / phi - (y - mu) ** 2 / (2.0 * mu**2 * y))

    def fisher_blocks(self, mu, phi):
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        e_mu = phi / mu**3
        e_muphi = np.zeros_like(e_mu)
        e_phiphi = np.broadcast_to(0.5 / np.asarray(phi) ** 2, e_mu.shape).copy()
        return _maybe_scalar(e_mu), _maybe_scalar(e_muphi), _maybe_scalar(e_phiphi)

    def _frozen(self, mu, phi):
        mu = np.asarray(mu, dtype=float)
        return stats.invgauss(mu / phi, scale=phi)

    def cdf(self, y, mu, phi):
        y = _check_positive("y", y)
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(self._frozen(mu, phi).cdf(y))

    def quantile(self, u, mu, phi):
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0.0) or np.any(u >= 1.0):
            raise ValueError("quantile probability must lie in (0, 1)")
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(self._frozen(mu, phi).ppf(u))

    def sample(self, mu, phi, rng):
        mu = _check_positive("mu", mu)
        phi = _check_positive("phi", phi)
        return _maybe_scalar(rng.wald(mean=mu, scale=phi))


FAMILIES = {"gamma": Gamma(), "inverse_gaussian": InverseGaussian()}


def get_family(name: str) -> Family:
    """Look up a family by config name (case-insensitive)."""
    try:
        return FAMILIES[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown distribution {name!r}; choose from {sorted(FAMILIES)}"
        ) from None
