"""Persistence of fit results (JSON) and CSV data ingestion."""

import csv
import hashlib
import json

import numpy as np

from .config import ModelConfig, parse_config
from .estimation import FitResult

__all__ = [
    "read_csv",
    "data_fingerprint",
    "save_archive",
    "load_archive",
]

FORMAT_VERSION = 1


class DataError(ValueError):
    """Invalid rows or columns in an input CSV."""


def read_csv(path, response: str, covariates):
    """Load the response and covariate columns from a headered CSV.

    Values use '.' decimals and ',' separators; missing values and
    non-positive responses are rejected with their 1-based data row index.
    Returns (y, X, fingerprint).
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty CSV file") from None
        header = [h.strip() for h in header]
        for col in [response, *covariates]:
            if col not in header:
                raise DataError(f"column {col!r} not found in CSV header {header}")
        y_idx = header.index(response)
        x_idx = [header.index(c) for c in covariates]

        y_vals, x_rows = [], []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise DataError(f"row {row_no}: expected {len(header)} fields")
            try:
                yv = float(row[y_idx])
                xv = [float(row[i]) for i in x_idx]
            except ValueError:
                raise DataError(f"row {row_no}: non-numeric value") from None
            if not np.isfinite(yv) or any(not np.isfinite(v) for v in xv):
                raise DataError(f"row {row_no}: missing or non-finite value")
            if yv <= 0.0:
                raise DataError(f"row {row_no}: response must be > 0, got {yv}")
            y_vals.append(yv)
            x_rows.append(xv)

    if not y_vals:
        raise DataError("CSV contains no data rows")
    y = np.array(y_vals)
    X = np.array(x_rows) if covariates else np.empty((len(y_vals), 0))
    return y, X, data_fingerprint(y, X)


def data_fingerprint(y, X) -> dict:
    """Row count plus a hash of the numeric column contents."""
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(np.asarray(y, dtype=float)).tobytes())
    digest.update(np.ascontiguousarray(np.asarray(X, dtype=float)).tobytes())
    return {"rows": int(len(y)), "column_hash": digest.hexdigest()}


def save_archive(path, fit: FitResult, cfg: ModelConfig, fingerprint: dict):
    """Serialize a fit alongside its config and data fingerprint.

    json round-trips Python floats exactly (shortest-repr encoding), so
    load(save(fit)) reproduces every numeric field bit for bit.
    """
    payload = {
        "format_version": FORMAT_VERSION,
        "config": cfg.as_dict(),
        "fingerprint": fingerprint,
        "fit": {
            "params": fit.params.to_array().tolist(),
            "loglik": fit.loglik,
            "info_matrix": fit.info_matrix.tolist(),
            "vcov": None if fit.vcov is None else fit.vcov.tolist(),
            "std_errors": None if fit.std_errors is None else fit.std_errors.tolist(),
            "converged": fit.converged,
            "iterations": fit.iterations,
            "n": fit.n,
            "message": fit.message,
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_archive(path):
    """Reconstruct (fit, cfg, fingerprint) from a saved archive."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format_version") != FORMAT_VERSION:
        raise ValueError("unsupported archive format version")

    cfg_dict = payload["config"]
    cfg = ModelConfig(
        distribution=cfg_dict["distribution"],
        link_g1=cfg_dict["link_g1"],
        link_g2=cfg_dict["link_g2"],
        p=cfg_dict["p"],
        q=cfg_dict["q"],
        response=cfg_dict["response"],
        covariates=list(cfg_dict["covariates"]),
        include_x_in_ar=cfg_dict["include_x_in_ar"],
        max_iterations=cfg_dict["max_iterations"],
        g_tol=cfg_dict["g_tol"],
        step_tol=cfg_dict["step_tol"],
    )
    spec = cfg.to_spec()
    blob = payload["fit"]
    from .model import ParameterVector

    fit = FitResult(
        spec=spec,
        params=ParameterVector.from_array(spec, np.array(blob["params"])),
        loglik=blob["loglik"],
        info_matrix=np.array(blob["info_matrix"]),
        vcov=None if blob["vcov"] is None else np.array(blob["vcov"]),
        std_errors=None if blob["std_errors"] is None else np.array(blob["std_errors"]),
        converged=blob["converged"],
        iterations=blob["iterations"],
        n=blob["n"],
        message=blob.get("message", ""),
    )
    return fit, cfg, payload["fingerprint"]
