"""Reproducible i.i.d. sampling on the copula scale.

Random streams come from numpy's counter-based Philox generator keyed by a
``SeedSequence``: ``stream(seed, scenario_id, replication)`` yields a stream
that depends only on its key, so replications can be generated in any order
or on any number of workers with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch

import numpy as np

from ._normal import ndtr
from .copulas import (
    Clayton,
    Copula,
    Frank,
    Gaussian,
    Gumbel,
    Independence,
    LowerBound,
    Mixture,
    Survival,
    Tilde,
    Transpose,
    TwoSegment,
    UpperBound,
)

__all__ = ["DEFAULT_SEED", "NotSamplableError", "SampleBatch", "sample", "stream"]

DEFAULT_SEED = 20240917


class NotSamplableError(TypeError):
    pass


@dataclass(frozen=True, eq=False)
class SampleBatch:
    u: np.ndarray
    v: np.ndarray
    seed: int | None
    spec: Copula

    def __len__(self):
        return len(self.u)

    @property
    def pairs(self) -> np.ndarray:
        return np.column_stack([self.u, self.v])


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox stream for ``(seed, *key)``; all parts are u64."""
    for part in (seed, *key):
        if not 0 <= int(part) < 2**64:
            raise ValueError(f"seed and stream keys must be unsigned 64-bit, got {part}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def sample(copula: Copula, n: int, seed: int | np.random.Generator = DEFAULT_SEED) -> SampleBatch:
    """Draw ``n`` i.i.d. pairs from ``copula``.

    ``seed`` is either a u64 seed or an existing generator (for example one
    returned by :func:`stream`). Coordinates are strictly inside (0, 1).
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if isinstance(seed, np.random.Generator):
        rng, tag = seed, None
    else:
        rng, tag = stream(seed), int(seed)
    u, v = _draw(copula, n, rng)
    return SampleBatch(_interior(u), _interior(v), tag, copula)


def _interior(x):
    x = np.asarray(x, dtype=float)
    x = np.where(x <= 0.0, np.nextafter(0.0, 1.0), x)
    return np.where(x >= 1.0, np.nextafter(1.0, 0.0), x)


@singledispatch
def _draw(copula, n, rng):
    raise NotSamplableError(f"no sampler for {type(copula).__name__} copulas")


@_draw.register
def _(copula: Independence, n, rng):
    return rng.random(n), rng.random(n)


@_draw.register
def _(copula: LowerBound, n, rng):
    u = rng.random(n)
    return u, 1.0 - u


@_draw.register
def _(copula: UpperBound, n, rng):
    u = rng.random(n)
    return u, u.copy()


@_draw.register
def _(copula: Gaussian, n, rng):
    rho = copula.rho
    if rho == 1.0:
        return _draw(UpperBound(), n, rng)
    if rho == -1.0:
        return _draw(LowerBound(), n, rng)
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    return ndtr(z1), ndtr(rho * z1 + np.sqrt(1.0 - rho * rho) * z2)


@_draw.register
def _(copula: Clayton, n, rng):
    # Marshall-Olkin: gamma frailty with shape 1/theta.
    t = copula.theta
    frailty = rng.gamma(1.0 / t, size=n)
    e = rng.standard_exponential((2, n))
    with np.errstate(divide="ignore"):
        u = np.power(1.0 + e / frailty, -1.0 / t)
    return u[0], u[1]


def _positive_stable(alpha, n, rng):
    """Kanter/Chambers-Mallows-Stuck draw with Laplace transform exp(-s**alpha)."""
    if alpha == 1.0:
        return np.ones(n)
    angle = np.pi * (1.0 - rng.random(n))  # in (0, pi]
    e = rng.standard_exponential(n)
    a = np.sin(alpha * angle) / np.sin(angle) ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * angle) / e) ** ((1.0 - alpha) / alpha)
    return a * b


@_draw.register
def _(copula: Gumbel, n, rng):
    alpha = 1.0 / copula.theta
    s = _positive_stable(alpha, n, rng)
    e = rng.standard_exponential((2, n))
    u = np.exp(-np.power(e / s, alpha))
    return u[0], u[1]


@_draw.register
def _(copula: Frank, n, rng):
    # Invert the conditional CDF of V given U = u at a uniform level p.
    t = copula.theta
    u = rng.random(n)
    p = rng.random(n)
    x = p * np.expm1(-t) / (p + (1.0 - p) * np.exp(-t * u))
    return u, -np.log1p(x) / t


@_draw.register
def _(copula: TwoSegment, n, rng):
    t = 0.5 * rng.random(n)
    heads = rng.random(n) < 0.5
    return np.where(heads, t, 0.5 + t), np.where(heads, t, 1.0 - t)


@_draw.register
def _(copula: Transpose, n, rng):
    u, v = _draw(copula.inner, n, rng)
    return v, u


@_draw.register
def _(copula: Survival, n, rng):
    u, v = _draw(copula.inner, n, rng)
    return 1.0 - u, 1.0 - v


@_draw.register
def _(copula: Tilde, n, rng):
    u, v = _draw(copula.inner, n, rng)
    return u, 1.0 - v


@_draw.register
def _(copula: Mixture, n, rng):
    pick_left = rng.random(n) < copula.weight
    ul, vl = _draw(copula.left, n, rng)
    ur, vr = _draw(copula.right, n, rng)
    return np.where(pick_left, ul, ur), np.where(pick_left, vl, vr)
