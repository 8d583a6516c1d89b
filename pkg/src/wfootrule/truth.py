"""Population values of the W-footrule, Spearman's footrule and Gini's gamma.

All three coefficients are line integrals of the copula:

* W-footrule      Phi   = 6 * int_0^1 C(u, 1-u) du - 1
* footrule        phi   = 6 * int_0^1 C(u, u) du - 2
* Gini's gamma    gamma = 4 * int_0^1 [C(u, u) + C(u, 1-u)] du - 2

Benchmarks and the Gaussian family have closed forms (the Gaussian ones come
from orthant probabilities of a bivariate normal with correlation
(rho -+ 1) / 2); everything else is integrated by adaptive Gauss-Kronrod.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .copulas import Copula, Gaussian, Independence, LowerBound, TwoSegment, UpperBound
from .quadrature import integrate
from .sampling import DEFAULT_SEED, sample

__all__ = [
    "Method",
    "TrueValue",
    "TrueValues",
    "MonteCarloEstimate",
    "phi_true",
    "footrule_true",
    "gini_true",
    "true_values",
    "phi_oracle_L1",
]

DEFAULT_TOL = 1e-9
_KINKS = (0.5,)


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte-carlo"


class TrueValue(NamedTuple):
    value: float
    error: float
    method: Method = Method.CLOSED_FORM


class MonteCarloEstimate(NamedTuple):
    value: float
    se: float


@dataclass(frozen=True)
class TrueValues:
    phi_w: float
    footrule: float
    gini: float
    method: Method
    abs_error_bound: float

    def as_dict(self) -> dict:
        return {
            "phi_w": self.phi_w,
            "footrule": self.footrule,
            "gini": self.gini,
            "method": self.method.value,
            "error_bound": self.abs_error_bound,
        }


# (Phi, phi, gamma) for copulas with exact constant values.
_CONSTANTS = {
    Independence: (0.0, 0.0, 0.0),
    LowerBound: (-1.0, -0.5, -1.0),
    UpperBound: (0.5, 1.0, 1.0),
    TwoSegment: (0.5, 0.625, 0.75),
}


def _closed_form(copula: Copula):
    if type(copula) in _CONSTANTS:
        return _CONSTANTS[type(copula)]
    if isinstance(copula, Gaussian):
        a_anti = math.asin(0.5 * (copula.rho - 1.0))
        a_diag = math.asin(0.5 * (copula.rho + 1.0))
        return (
            0.5 + 3.0 / math.pi * a_anti,
            -0.5 + 3.0 / math.pi * a_diag,
            2.0 / math.pi * (a_anti + a_diag),
        )
    return None


def _check_tol(tol):
    if not tol >= 1e-12:
        raise ValueError(f"tolerance must be >= 1e-12, got {tol}")


@lru_cache(maxsize=256)
def _line_integral(copula: Copula, which: str, tol: float):
    if which == "anti":
        def f(u):
            return copula.cdf(u, 1.0 - u)
    elif which == "diag":
        def f(u):
            return copula.cdf(u, u)
    else:
        def f(u):
            return copula.cdf(u, u) + copula.cdf(u, 1.0 - u)
    return integrate(f, 0.0, 1.0, tol=tol, breakpoints=_KINKS)


def _resolve(copula, tol, method, index, scale, shift):
    _check_tol(tol)
    if method is None or method == Method.CLOSED_FORM:
        exact = _closed_form(copula)
        if exact is not None:
            return TrueValue(exact[index], 0.0, Method.CLOSED_FORM)
        if method == Method.CLOSED_FORM:
            raise ValueError(f"no closed form available for {copula}")
    which = ("anti", "diag", "both")[index]
    res = _line_integral(copula, which, tol / scale)
    return TrueValue(scale * res.value + shift, scale * res.error, Method.QUADRATURE)


def phi_true(copula: Copula, tol: float = DEFAULT_TOL, method: Method | None = None) -> TrueValue:
    """W-footrule of ``copula``.

    ``method=None`` picks the closed form when one exists, otherwise
    quadrature; pass ``Method.QUADRATURE`` to force numerical integration.
    """
    return _resolve(copula, tol, method, 0, 6.0, -1.0)


def footrule_true(copula: Copula, tol: float = DEFAULT_TOL, method: Method | None = None) -> TrueValue:
    """Spearman's footrule of ``copula``."""
    return _resolve(copula, tol, method, 1, 6.0, -2.0)


def gini_true(copula: Copula, tol: float = DEFAULT_TOL, method: Method | None = None) -> TrueValue:
    """Gini's gamma of ``copula`` from its own line-integral definition."""
    return _resolve(copula, tol, method, 2, 4.0, -2.0)


def true_values(copula: Copula, tol: float = DEFAULT_TOL) -> TrueValues:
    phi = phi_true(copula, tol)
    foot = footrule_true(copula, tol)
    gini = gini_true(copula, tol)
    methods = {phi.method, foot.method, gini.method}
    method = Method.CLOSED_FORM if methods == {Method.CLOSED_FORM} else Method.QUADRATURE
    return TrueValues(phi.value, foot.value, gini.value, method,
                      max(phi.error, foot.error, gini.error))


def phi_oracle_L1(copula: Copula, n_mc: int = 10**6, seed=DEFAULT_SEED) -> MonteCarloEstimate:
    """Monte Carlo value of 3 * E|1 - U - V| - 1 with its standard error."""
    batch = sample(copula, n_mc, seed)
    dist = np.abs(1.0 - batch.u - batch.v)
    se = 3.0 * dist.std(ddof=1) / math.sqrt(n_mc) if n_mc > 1 else math.inf
    return MonteCarloEstimate(3.0 * dist.mean() - 1.0, se)
