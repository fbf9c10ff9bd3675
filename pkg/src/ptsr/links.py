"""Link functions mapping the positive mean scale to the linear-predictor scale."""

import numpy as np

__all__ = ["Link", "get_link", "LINKS"]

# integer codes shared with the compiled recursion kernel
_LOG, _IDENTITY, _SQRT = 0, 1, 2


class Link:
    """One of the supported links: log, identity or sqrt.

    ``eval``/``deriv``/``inverse`` operate elementwise on scalars or arrays.
    ``deriv`` is nonzero on (0, inf) for all three kinds, so any of them can
    serve as the invertible mean link; the identity is mainly useful as the
    lag-transform link (keeps the original scale).
    """

    def __init__(self, kind: str):
        kind = kind.lower()
        if kind not in ("log", "identity", "sqrt"):
            raise ValueError(f"unknown link kind: {kind!r}")
        self.kind = kind
        self.code = {"log": _LOG, "identity": _IDENTITY, "sqrt": _SQRT}[kind]

    def __repr__(self):
        return f"Link({self.kind!r})"

    def __eq__(self, other):
        return isinstance(other, Link) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    @staticmethod
    def _check_positive(x):
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
            raise ValueError("link argument must be finite and > 0")
        return x

    def eval(self, x):
        x = self._check_positive(x)
        if self.kind == "log":
            out = np.log(x)
        elif self.kind == "identity":
            out = x.copy()
        else:
            out = np.sqrt(x)
        return out if out.ndim else float(out)

    def deriv(self, x):
        x = self._check_positive(x)
        if self.kind == "log":
            out = 1.0 / x
        elif self.kind == "identity":
            out = np.ones_like(x)
        else:
            out = 0.5 / np.sqrt(x)
        return out if out.ndim else float(out)

    def inverse(self, eta):
        eta = np.asarray(eta, dtype=float)
        if not np.all(np.isfinite(eta)):
            raise ValueError("link inverse requires finite input")
        if self.kind == "log":
            with np.errstate(over="ignore"):
                out = np.exp(eta)
        elif self.kind == "identity":
            out = eta.copy()
        else:
            out = eta * eta
            # sqrt link maps onto (0, inf); negative predictor has no preimage
            if np.any(eta <= 0.0):
                raise ValueError("inverse sqrt link requires eta > 0")
        if not np.all(np.isfinite(out)) or np.any(out <= 0.0):
            raise ValueError("inverse link left the positive mean range")
        return out if out.ndim else float(out)


LINKS = {kind: Link(kind) for kind in ("log", "identity", "sqrt")}


def get_link(name: str) -> Link:
    """Look up a link by its config name (case-insensitive)."""
    try:
        return LINKS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown link {name!r}; choose from {sorted(LINKS)}") from None
