"""Model configuration files: a flat key = value text format.

Example::

    distribution = gamma
    link_g1 = log
    p = 1
    q = 1
    response = y
    covariates = x1, x2

Unknown keys are rejected. Parameter keys (alpha, beta, ar, ma, dispersion)
and length keys (n, burn_in) are only consumed by the simulate command.
"""

from dataclasses import dataclass, field

import numpy as np

from .families import get_family
from .links import get_link
from .model import ModelSpec, ParameterVector

__all__ = ["ModelConfig", "load_config", "parse_config"]

_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}

_KNOWN_KEYS = {
    "distribution",
    "link_g1",
    "link_g2",
    "p",
    "q",
    "response",
    "covariates",
    "include_x_in_ar",
    "max_iterations",
    "g_tol",
    "step_tol",
    "alpha",
    "beta",
    "ar",
    "ma",
    "dispersion",
    "n",
    "burn_in",
}


@dataclass
class ModelConfig:
    distribution: str = "gamma"
    link_g1: str = "log"
    link_g2: str = None  # defaults to link_g1
    p: int = 0
    q: int = 0
    response: str = "y"
    covariates: list = field(default_factory=list)
    include_x_in_ar: bool = False
    max_iterations: int = 500
    g_tol: float = 1e-8
    step_tol: float = 1e-10
    # generative parameters (simulate command only)
    alpha: float = None
    beta: list = None
    ar: list = None
    ma: list = None
    dispersion: float = None
    n: int = None
    burn_in: int = 500

    def to_spec(self) -> ModelSpec:
        return ModelSpec(
            family=get_family(self.distribution),
            p=self.p,
            q=self.q,
            s=len(self.covariates),
            include_x_in_ar=self.include_x_in_ar,
            g1=get_link(self.link_g1),
            g2=get_link(self.link_g2 or self.link_g1),
        )

    def to_params(self) -> ParameterVector:
        """Build the generative parameter vector for simulation."""
        missing = [
            key
            for key, val in (("alpha", self.alpha), ("dispersion", self.dispersion))
            if val is None
        ]
        if missing:
            raise ValueError(f"config is missing parameter keys: {missing}")
        beta = self.beta if self.beta is not None else []
        ar = self.ar if self.ar is not None else []
        ma = self.ma if self.ma is not None else []
        if len(beta) != len(self.covariates):
            raise ValueError("beta length must match the number of covariates")
        if len(ar) != self.p or len(ma) != self.q:
            raise ValueError("ar/ma lengths must match the p/q orders")
        return ParameterVector(
            alpha=self.alpha,
            beta=np.asarray(beta, dtype=float),
            phi_ar=np.asarray(ar, dtype=float),
            theta=np.asarray(ma, dtype=float),
            phi_disp=self.dispersion,
        )

    def as_dict(self) -> dict:
        return {
            "distribution": self.distribution,
            "link_g1": self.link_g1,
            "link_g2": self.link_g2 or self.link_g1,
            "p": self.p,
            "q": self.q,
            "response": self.response,
            "covariates": list(self.covariates),
            "include_x_in_ar": self.include_x_in_ar,
            "max_iterations": self.max_iterations,
            "g_tol": self.g_tol,
            "step_tol": self.step_tol,
        }


def _parse_list(raw):
    return [item.strip() for item in raw.split(",") if item.strip()]


def _parse_floats(raw):
    return [float(item) for item in _parse_list(raw)]


def parse_config(text: str) -> ModelConfig:
    cfg = ModelConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key, raw = key.strip().lower(), raw.strip()
        if key not in _KNOWN_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key in ("p", "q", "max_iterations", "n", "burn_in"):
                setattr(cfg, key, int(raw))
            elif key in ("g_tol", "step_tol", "alpha", "dispersion"):
                setattr(cfg, key, float(raw))
            elif key == "include_x_in_ar":
                cfg.include_x_in_ar = _BOOL[raw.lower()]
            elif key == "covariates":
                cfg.covariates = _parse_list(raw)
            elif key in ("beta", "ar", "ma"):
                setattr(cfg, key, _parse_floats(raw))
            else:
                setattr(cfg, key, raw)
        except (ValueError, KeyError) as err:
            if isinstance(err, ValueError) and str(err).startswith("config line"):
                raise
            raise ValueError(
                f"config line {lineno}: invalid value {raw!r} for {key!r}"
            ) from None
    cfg.to_spec()  # validates family/link/order combinations
    return cfg


def load_config(path) -> ModelConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
