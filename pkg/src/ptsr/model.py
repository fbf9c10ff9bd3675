"""Model specification and parameter vector containers."""

from dataclasses import dataclass, field

import numpy as np

from .families import Family
from .links import Link

__all__ = ["ModelSpec", "ParameterVector"]


@dataclass(frozen=True)
class ModelSpec:
    """Structure of a positive time series regression model.

    ``p``/``q`` are the AR/MA orders, ``s`` the number of covariates.
    ``include_x_in_ar`` subtracts the covariate effect inside the AR sum
    (irrelevant and forced off when s = 0). ``g1`` is the invertible mean
    link, ``g2`` the lag-transform link.
    """

    family: Family
    p: int = 0
    q: int = 0
    s: int = 0
    include_x_in_ar: bool = False
    g1: Link = None
    g2: Link = None

    def __post_init__(self):
        from .links import get_link

        for name in ("p", "q", "s"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer")
        if self.g1 is None:
            object.__setattr__(self, "g1", get_link("log"))
        if self.g2 is None:
            object.__setattr__(self, "g2", self.g1)
        if self.s == 0:
            object.__setattr__(self, "include_x_in_ar", False)

    @property
    def n_params(self) -> int:
        return self.p + self.q + self.s + 2

    @property
    def n_mean_params(self) -> int:
        """Parameters of the mean structure (everything but the dispersion)."""
        return self.p + self.q + self.s + 1

    def coef_names(self, covariates=None):
        """Flat-order coefficient names: alpha, betas, ar*, ma*, dispersion."""
        if covariates is None:
            covariates = [f"beta{i + 1}" for i in range(self.s)]
        if len(covariates) != self.s:
            raise ValueError("covariate name count does not match s")
        return (
            ["alpha"]
            + list(covariates)
            + [f"ar{i + 1}" for i in range(self.p)]
            + [f"ma{i + 1}" for i in range(self.q)]
            + ["dispersion"]
        )


@dataclass
class ParameterVector:
    """Named parameters with a flat view ordered (alpha, beta, ar, ma, dispersion)."""

    alpha: float
    beta: np.ndarray = field(default_factory=lambda: np.empty(0))
    phi_ar: np.ndarray = field(default_factory=lambda: np.empty(0))
    theta: np.ndarray = field(default_factory=lambda: np.empty(0))
    phi_disp: float = 1.0

    def __post_init__(self):
        self.alpha = float(self.alpha)
        self.beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        self.phi_ar = np.atleast_1d(np.asarray(self.phi_ar, dtype=float))
        self.theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        self.phi_disp = float(self.phi_disp)
        if self.phi_disp <= 0.0 or not np.isfinite(self.phi_disp):
            raise ValueError("dispersion must be finite and > 0")

    def to_array(self) -> np.ndarray:
        return np.concatenate(
            [[self.alpha], self.beta, self.phi_ar, self.theta, [self.phi_disp]]
        )

    @classmethod
    def from_array(cls, spec: ModelSpec, flat) -> "ParameterVector":
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (spec.n_params,):
            raise ValueError(
                f"expected {spec.n_params} parameters, got {flat.shape}"
            )
        s, p, q = spec.s, spec.p, spec.q
        return cls(
            alpha=flat[0],
            beta=flat[1 : 1 + s],
            phi_ar=flat[1 + s : 1 + s + p],
            theta=flat[1 + s + p : 1 + s + p + q],
            phi_disp=flat[-1],
        )

    def check_dims(self, spec: ModelSpec):
        if (
            self.beta.shape != (spec.s,)
            or self.phi_ar.shape != (spec.p,)
            or self.theta.shape != (spec.q,)
        ):
            raise ValueError("parameter dimensions do not match the model spec")
