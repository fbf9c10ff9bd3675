"""Positive time series regression: GARMA-type dynamic models for series on
(0, inf), with partial maximum likelihood estimation, asymptotic inference,
diagnostics, simulation and forecasting."""

__version__ = "0.1.0"

from .diagnostics import (
    InformationCriteria,
    LjungBoxResult,
    ResidualSet,
    acf,
    acf_band,
    information_criteria,
    ks_normality,
    ljung_box,
    residuals,
)
from .estimation import FitOptions, FitResult, fit, starting_values
from .families import FAMILIES, Family, Gamma, InverseGaussian, get_family
from .filtering import (
    FilterExplosionError,
    FilterOutput,
    conditional_information,
    log_likelihood,
    run_filter,
    score,
)
from .forecasting import ForecastResult, forecast
from .inference import (
    LinearRestriction,
    confidence_interval,
    parse_restrictions,
    wald_test,
    z_statistic,
)
from .links import LINKS, Link, get_link
from .model import ModelSpec, ParameterVector
from .simulation import SimulationRequest, simulate

__all__ = [
    "__version__",
    "Link",
    "LINKS",
    "get_link",
    "Family",
    "Gamma",
    "InverseGaussian",
    "FAMILIES",
    "get_family",
    "ModelSpec",
    "ParameterVector",
    "FilterOutput",
    "FilterExplosionError",
    "run_filter",
    "log_likelihood",
    "score",
    "conditional_information",
    "FitOptions",
    "FitResult",
    "starting_values",
    "fit",
    "LinearRestriction",
    "confidence_interval",
    "z_statistic",
    "wald_test",
    "parse_restrictions",
    "ResidualSet",
    "InformationCriteria",
    "LjungBoxResult",
    "information_criteria",
    "residuals",
    "acf",
    "acf_band",
    "ljung_box",
    "ks_normality",
    "ForecastResult",
    "forecast",
    "SimulationRequest",
    "simulate",
]
