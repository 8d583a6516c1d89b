"""Bivariate copulas: benchmarks, parametric families and structural transforms.

Every copula is an immutable dataclass exposing a vectorised ``cdf(u, v)``.
Boundary values (a zero argument, or an argument equal to one) are returned
exactly from the uniform-margin conditions, so family formulas only ever see
interior points.

Specification strings (case-insensitive)::

    pi | w | m | twosegment
    gaussian:rho=-0.9 | clayton:theta=5 | gumbel:theta=3 | frank:theta=-5
    transpose(<spec>) | survival(<spec>) | tilde(<spec>)
    mixture(<weight>, <spec>, <spec>)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from ._normal import bvn_cdf, ndtri

__all__ = [
    "Copula",
    "Independence",
    "LowerBound",
    "UpperBound",
    "Gaussian",
    "Clayton",
    "Gumbel",
    "Frank",
    "TwoSegment",
    "Transpose",
    "Survival",
    "Tilde",
    "Mixture",
    "PI",
    "W",
    "M",
    "cdf",
    "parse_copula",
]


def _lower(u, v):
    return np.maximum(u + v - 1.0, 0.0)


def _upper(u, v):
    return np.minimum(u, v)


@dataclass(frozen=True)
class Copula:
    """Base class. Subclasses implement ``_cdf`` on interior points."""

    family: ClassVar[str] = "copula"

    @property
    def param(self) -> float | None:
        return None

    def cdf(self, u, v):
        """Evaluate C(u, v); arguments broadcast and must lie in [0, 1]."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        if np.any(~((u >= 0.0) & (u <= 1.0))) or np.any(~((v >= 0.0) & (v <= 1.0))):
            raise ValueError("copula arguments must lie in the unit square")
        out = np.where(u == 1.0, v, u)
        out = np.where((u == 0.0) | (v == 0.0), 0.0, out)
        inner = (u > 0.0) & (u < 1.0) & (v > 0.0) & (v < 1.0)
        if np.any(inner):
            ui, vi = u[inner], v[inner]
            val = np.asarray(self._cdf(ui, vi), dtype=float)
            if np.any(np.isnan(val)):
                raise FloatingPointError(f"{self}: CDF evaluation lost precision")
            out = out.copy()
            out[inner] = np.clip(val, _lower(ui, vi), _upper(ui, vi))
        return out[()] if out.ndim == 0 else out

    def _cdf(self, u, v):
        raise NotImplementedError

    def __str__(self) -> str:
        return self.family


@dataclass(frozen=True)
class Independence(Copula):
    family: ClassVar[str] = "pi"

    def _cdf(self, u, v):
        return u * v


@dataclass(frozen=True)
class LowerBound(Copula):
    """Countermonotonic copula W(u, v) = max(u + v - 1, 0)."""

    family: ClassVar[str] = "w"

    def _cdf(self, u, v):
        return _lower(u, v)


@dataclass(frozen=True)
class UpperBound(Copula):
    """Comonotonic copula M(u, v) = min(u, v)."""

    family: ClassVar[str] = "m"

    def _cdf(self, u, v):
        return _upper(u, v)


@dataclass(frozen=True)
class Gaussian(Copula):
    """Gaussian copula; rho = +1 and -1 evaluate as M and W exactly."""

    rho: float
    family: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not (math.isfinite(self.rho) and -1.0 <= self.rho <= 1.0):
            raise ValueError(f"Gaussian rho must lie in [-1, 1], got {self.rho}")

    @property
    def param(self):
        return self.rho

    def _cdf(self, u, v):
        if self.rho == 1.0:
            return _upper(u, v)
        if self.rho == -1.0:
            return _lower(u, v)
        if self.rho == 0.0:
            return u * v
        return bvn_cdf(ndtri(u), ndtri(v), self.rho)

    def __str__(self):
        return f"gaussian:rho={self.rho:g}"


@dataclass(frozen=True)
class Clayton(Copula):
    theta: float
    family: ClassVar[str] = "clayton"

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0.0):
            raise ValueError(f"Clayton theta must be > 0, got {self.theta}")

    @property
    def param(self):
        return self.theta

    def _cdf(self, u, v):
        t = self.theta
        with np.errstate(over="ignore", divide="ignore"):
            s = np.power(u, -t) + np.power(v, -t) - 1.0
            return np.power(s, -1.0 / t)

    def __str__(self):
        return f"clayton:theta={self.theta:g}"


@dataclass(frozen=True)
class Gumbel(Copula):
    theta: float
    family: ClassVar[str] = "gumbel"

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta >= 1.0):
            raise ValueError(f"Gumbel theta must be >= 1, got {self.theta}")

    @property
    def param(self):
        return self.theta

    def _cdf(self, u, v):
        t = self.theta
        s = np.power(-np.log(u), t) + np.power(-np.log(v), t)
        return np.exp(-np.power(s, 1.0 / t))

    def __str__(self):
        return f"gumbel:theta={self.theta:g}"


@dataclass(frozen=True)
class Frank(Copula):
    theta: float
    family: ClassVar[str] = "frank"

    def __post_init__(self):
        if not math.isfinite(self.theta) or self.theta == 0.0:
            raise ValueError(
                f"Frank theta must be finite and nonzero, got {self.theta} "
                "(use Independence for theta = 0)"
            )

    @property
    def param(self):
        return self.theta

    def _cdf(self, u, v):
        t = self.theta
        num = np.expm1(-t * u) * np.expm1(-t * v)
        return -np.log1p(num / np.expm1(-t)) / t

    def __str__(self):
        return f"frank:theta={self.theta:g}"


@dataclass(frozen=True)
class TwoSegment(Copula):
    """Singular copula with uniform mass on two segments.

    The segments join (0, 0) to (1/2, 1/2) and (1/2, 1) to (1, 1/2). Its
    W-footrule equals 1/2 even though it is not M.
    """

    family: ClassVar[str] = "twosegment"

    def _cdf(self, u, v):
        corner = (u >= 0.5) & (v >= 0.5)
        return np.where(corner, np.maximum(0.5, u + v - 1.0), np.minimum(u, v))


@dataclass(frozen=True)
class Transpose(Copula):
    """C^T(u, v) = C(v, u)."""

    inner: Copula
    family: ClassVar[str] = "transpose"

    def __post_init__(self):
        _check_inner(self.inner)

    def _cdf(self, u, v):
        return self.inner.cdf(v, u)

    def __str__(self):
        return f"transpose({self.inner})"


@dataclass(frozen=True)
class Survival(Copula):
    """Survival copula u + v - 1 + C(1 - u, 1 - v)."""

    inner: Copula
    family: ClassVar[str] = "survival"

    def __post_init__(self):
        _check_inner(self.inner)

    def _cdf(self, u, v):
        return u + v - 1.0 + self.inner.cdf(1.0 - u, 1.0 - v)

    def __str__(self):
        return f"survival({self.inner})"


@dataclass(frozen=True)
class Tilde(Copula):
    """u - C(u, 1 - v): the copula of (U, 1 - V) when (U, V) ~ C."""

    inner: Copula
    family: ClassVar[str] = "tilde"

    def __post_init__(self):
        _check_inner(self.inner)

    def _cdf(self, u, v):
        return u - self.inner.cdf(u, 1.0 - v)

    def __str__(self):
        return f"tilde({self.inner})"


@dataclass(frozen=True)
class Mixture(Copula):
    """Convex combination weight * left + (1 - weight) * right."""

    weight: float
    left: Copula
    right: Copula
    family: ClassVar[str] = "mixture"

    def __post_init__(self):
        if not (math.isfinite(self.weight) and 0.0 <= self.weight <= 1.0):
            raise ValueError(f"mixture weight must lie in [0, 1], got {self.weight}")
        _check_inner(self.left)
        _check_inner(self.right)

    @property
    def param(self):
        return self.weight

    def _cdf(self, u, v):
        a = self.weight
        return a * self.left.cdf(u, v) + (1.0 - a) * self.right.cdf(u, v)

    def __str__(self):
        return f"mixture({self.weight:g},{self.left},{self.right})"


def _check_inner(c):
    if not isinstance(c, Copula):
        raise TypeError(f"expected a Copula, got {type(c).__name__}")


PI = Independence()
W = LowerBound()
M = UpperBound()


def cdf(copula: Copula, u, v):
    """Functional form of ``copula.cdf(u, v)``."""
    return copula.cdf(u, v)


_SIMPLE = {"pi": Independence, "independence": Independence, "w": LowerBound,
           "m": UpperBound, "twosegment": TwoSegment}
_PARAMETRIC = {"gaussian": (Gaussian, "rho"), "clayton": (Clayton, "theta"),
               "gumbel": (Gumbel, "theta"), "frank": (Frank, "theta")}
_UNARY = {"transpose": Transpose, "survival": Survival, "tilde": Tilde}
_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _number(text: str, where: str) -> float:
    text = text.strip()
    if not _NUMBER.match(text):
        raise ValueError(f"invalid number {text!r} in copula spec {where!r}")
    return float(text)


def _split_args(body: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return [p.strip() for p in parts]


def parse_copula(text: str) -> Copula:
    """Parse a specification string such as ``"frank:theta=-5"``."""
    s = text.strip().lower().replace(" ", "")
    if s in _SIMPLE:
        return _SIMPLE[s]()
    m = re.fullmatch(r"([a-z]+)\((.*)\)", s)
    if m:
        name, body = m.groups()
        args = _split_args(body)
        if name in _UNARY and len(args) == 1:
            return _UNARY[name](parse_copula(args[0]))
        if name == "mixture" and len(args) == 3:
            return Mixture(_number(args[0], text), parse_copula(args[1]), parse_copula(args[2]))
        raise ValueError(f"malformed copula spec {text!r}")
    name, _, rest = s.partition(":")
    if name not in _PARAMETRIC or not rest:
        raise ValueError(f"unknown copula spec {text!r}")
    cls, key = _PARAMETRIC[name]
    pname, eq, value = rest.partition("=")
    if not eq:
        pname, value = key, rest
    if pname != key:
        raise ValueError(f"{name} takes parameter {key!r}, got {pname!r}")
    return cls(_number(value, text))
