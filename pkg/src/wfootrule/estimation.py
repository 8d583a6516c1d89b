"""Rank-based estimation and inference for the W-footrule.

The point estimator only needs ranks::

    Phi_n = 6 / (n (n + 1)) * sum_i (n + 1 - R_i - S_i)^+ - 1

Sums are accumulated exactly on doubled ranks (mid-ranks are half-integers),
so the estimate is the correctly rounded value of a rational number.

Inference uses the plug-in influence function

    j_n(u, v) = (1 - u - v)^+ - int_u^1 D1(s, 1-s) ds - int_0^{1-v} D2(s, 1-s) ds

where D1, D2 are finite-difference partial derivatives of the empirical
copula, and sigma_n^2 = 36 * sample variance of j_n at the pseudo-observations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from ._normal import ndtr, ndtri

__all__ = [
    "TieError",
    "TieWarning",
    "RankedSample",
    "rank_data",
    "phi_hat",
    "footrule_hat",
    "gini_hat",
    "empirical_copula",
    "default_bandwidth",
    "partial_derivative_hat",
    "InfluenceFunction",
    "InfluenceGrid",
    "influence_hat",
    "influence_grid",
    "sigma_hat",
    "confidence_interval",
    "TestResult",
    "countermonotonicity_test",
    "perturbation_bound_check",
    "EstimateReport",
    "estimate",
]

DEFAULT_GRID = 512


class TieError(ValueError):
    pass


class TieWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class RankedSample:
    """Paired ranks of a bivariate sample.

    ``r`` and ``s`` hold ranks in 1..n (half-integers under mid-ranking).
    """

    r: np.ndarray
    s: np.ndarray
    ties: bool = False

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        s = np.asarray(self.s, dtype=float)
        if r.ndim != 1 or r.shape != s.shape:
            raise ValueError("rank vectors must be 1-D and of equal length")
        n = len(r)
        if n < 2:
            raise ValueError(f"need at least 2 observations, got {n}")
        for x in (r, s):
            if np.any(2 * x != np.round(2 * x)) or x.min() < 1 or x.max() > n:
                raise ValueError("ranks must be integers or half-integers in 1..n")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def pseudo_obs(self) -> tuple[np.ndarray, np.ndarray]:
        return self.r / (self.n + 1), self.s / (self.n + 1)

    def _doubled(self):
        return np.rint(2 * self.r).astype(np.int64), np.rint(2 * self.s).astype(np.int64)

    @classmethod
    def from_ranks(cls, r, s) -> "RankedSample":
        r = np.asarray(r, dtype=float)
        s = np.asarray(s, dtype=float)
        ties = len(np.unique(r)) < len(r) or len(np.unique(s)) < len(s)
        return cls(r, s, ties)


def rank_data(xs, ys, ties: str = "midrank") -> RankedSample:
    """Rank two paired samples column-wise.

    ``ties`` is ``"midrank"`` (average ranks, with a :class:`TieWarning`) or
    ``"error"`` (raise :class:`TieError`).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("inputs must be 1-D sequences")
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError(f"need at least 2 observations, got {len(xs)}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("inputs must be finite")
    if ties not in ("midrank", "error"):
        raise ValueError(f"unknown tie policy {ties!r}")
    has_ties = len(np.unique(xs)) < len(xs) or len(np.unique(ys)) < len(ys)
    if has_ties:
        if ties == "error":
            raise TieError("sample contains ties")
        warnings.warn("ties present; using mid-ranks", TieWarning, stacklevel=2)
    return RankedSample(rankdata(xs), rankdata(ys), has_ties)


def _phi_fraction(rs: RankedSample) -> Fraction:
    n = rs.n
    r2, s2 = rs._doubled()
    total = int(np.maximum(2 * (n + 1) - r2 - s2, 0).sum())  # = 2 * sum (n+1-R-S)^+
    return Fraction(3 * total - n * (n + 1), n * (n + 1))


def phi_hat(rs: RankedSample, exact: bool = False):
    """W-footrule estimate; ``exact=True`` returns the rational value."""
    value = _phi_fraction(rs)
    return value if exact else float(value)


def footrule_hat(rs: RankedSample, variant: str = "pseudo", exact: bool = False):
    """Spearman's footrule estimate.

    ``"pseudo"`` uses 1 - 3 sum|R - S| / (n (n + 1)), matching the W-footrule's
    pseudo-observation scaling; ``"classical"`` uses the n^2 - 1 denominator.
    """
    n = rs.n
    r2, s2 = rs._doubled()
    d2 = int(np.abs(r2 - s2).sum())  # = 2 * sum |R - S|
    if variant == "pseudo":
        value = 1 - Fraction(3 * d2, 2 * n * (n + 1))
    elif variant == "classical":
        value = 1 - Fraction(3 * d2, 2 * (n * n - 1))
    else:
        raise ValueError(f"unknown footrule variant {variant!r}")
    return value if exact else float(value)


def gini_hat(rs: RankedSample) -> float:
    """Gini's gamma through the decomposition (2/3)(footrule + W-footrule)."""
    return float(Fraction(2, 3) * (footrule_hat(rs, exact=True) + _phi_fraction(rs)))


def empirical_copula(rs: RankedSample, u, v):
    """C_n(u, v) = (1/n) #{i : U_i <= u, V_i <= v} on pseudo-observations."""
    pu, pv = rs.pseudo_obs
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    flat_u, flat_v = u.ravel(), v.ravel()
    out = np.empty(flat_u.shape)
    step = max(1, 2_000_000 // rs.n)
    for i in range(0, len(flat_u), step):
        a = flat_u[i:i + step, None]
        b = flat_v[i:i + step, None]
        out[i:i + step] = np.count_nonzero((pu <= a) & (pv <= b), axis=1)
    out = (out / rs.n).reshape(u.shape)
    return out[()] if out.ndim == 0 else out


def default_bandwidth(n: int) -> float:
    return min(max(n ** -0.5, 1.0 / n), 0.25)


def partial_derivative_hat(rs: RankedSample, which: str, u, v, h: float | None = None):
    """Finite-difference estimate of dC/du (``"d1"``) or dC/dv (``"d2"``).

    Central differences with step ``h`` in the interior, one-sided within
    ``h`` of the boundary; the result is clipped to [0, 1].
    """
    h = default_bandwidth(rs.n) if h is None else float(h)
    if not 0.0 < h < 0.5:
        raise ValueError(f"bandwidth must lie in (0, 0.5), got {h}")
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    x = u if which == "d1" else v if which == "d2" else None
    if x is None:
        raise ValueError(f"which must be 'd1' or 'd2', got {which!r}")
    lo = np.where(x >= h, x - h, x)
    hi = np.where(x <= 1.0 - h, x + h, x)
    if which == "d1":
        diff = empirical_copula(rs, hi, v) - empirical_copula(rs, lo, v)
    else:
        diff = empirical_copula(rs, u, hi) - empirical_copula(rs, u, lo)
    return np.clip(diff / (hi - lo), 0.0, 1.0)


class InfluenceFunction:
    """Plug-in influence function j_n of the W-footrule estimator.

    The two anti-diagonal integrals are tabulated once with a midpoint rule on
    ``grid`` cells and linearly interpolated afterwards.
    """

    def __init__(self, rs: RankedSample, h: float | None = None, grid: int = DEFAULT_GRID):
        if grid < 2:
            raise ValueError("grid must have at least 2 cells")
        self.h = default_bandwidth(rs.n) if h is None else float(h)
        self.grid = int(grid)
        mid = (np.arange(grid) + 0.5) / grid
        d1 = partial_derivative_hat(rs, "d1", mid, 1.0 - mid, self.h)
        d2 = partial_derivative_hat(rs, "d2", mid, 1.0 - mid, self.h)
        self.nodes = np.linspace(0.0, 1.0, grid + 1)
        # tail1[j] = int_{t_j}^1 D1, head2[j] = int_0^{t_j} D2
        self.tail1 = np.concatenate([np.cumsum(d1[::-1])[::-1], [0.0]]) / grid
        self.head2 = np.concatenate([[0.0], np.cumsum(d2)]) / grid

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        first = np.interp(u, self.nodes, self.tail1)
        second = np.interp(1.0 - v, self.nodes, self.head2)
        return np.maximum(1.0 - u - v, 0.0) - first - second


@dataclass(frozen=True, eq=False)
class InfluenceGrid:
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray  # values[i, k] = j_n(u[i], v[k])
    h: float


def influence_hat(rs: RankedSample, u, v, h: float | None = None, grid: int = DEFAULT_GRID):
    """Evaluate j_n(u, v); multiply by 6 for the influence function."""
    return InfluenceFunction(rs, h, grid)(u, v)


def influence_grid(rs: RankedSample, size: int = 101, h: float | None = None,
                   grid: int = DEFAULT_GRID) -> InfluenceGrid:
    jf = InfluenceFunction(rs, h, grid)
    axis = np.linspace(0.0, 1.0, size)
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    return InfluenceGrid(axis, axis.copy(), jf(uu, vv), jf.h)


def sigma_hat(rs: RankedSample, h: float | None = None, grid: int = DEFAULT_GRID) -> float:
    """Plug-in estimate of the asymptotic standard deviation of sqrt(n) Phi_n."""
    jf = InfluenceFunction(rs, h, grid)
    z = jf(*rs.pseudo_obs)
    return 6.0 * float(np.std(z, ddof=1))


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def confidence_interval(rs: RankedSample, alpha: float = 0.05, sigma: float | None = None,
                        h: float | None = None, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    """Asymptotic two-sided interval Phi_n -+ z_{alpha/2} sigma_n / sqrt(n), cut to [-1, 1/2]."""
    _check_alpha(alpha)
    if sigma is None:
        sigma = sigma_hat(rs, h, grid)
    est = phi_hat(rs)
    half = -ndtri(alpha / 2) * sigma / math.sqrt(rs.n)
    return max(est - half, -1.0), min(est + half, 0.5)


class TestResult(NamedTuple):
    statistic: float
    p_value: float
    reject: bool
    boundary: bool
    sigma: float

    __test__ = False  # not a pytest class


def countermonotonicity_test(rs: RankedSample, alpha: float = 0.05, sigma: float | None = None,
                             h: float | None = None, grid: int = DEFAULT_GRID) -> TestResult:
    """One-sided test of H0: C = W with T_n = sqrt(n) (Phi_n + 1) / sigma_n.

    Exactly countermonotone ranks give Phi_n = -1; that boundary case is
    reported with ``boundary=True`` and never rejects. A zero variance
    estimate with Phi_n > -1 rejects with p-value 0.
    """
    _check_alpha(alpha)
    if sigma is None:
        sigma = sigma_hat(rs, h, grid)
    excess = phi_hat(rs) + 1.0
    if excess == 0.0:
        return TestResult(0.0, float(1.0 - ndtr(0.0)), False, True, sigma)
    if sigma == 0.0:
        return TestResult(math.inf, 0.0, True, False, sigma)
    t = math.sqrt(rs.n) * excess / sigma
    p = min(max(float(1.0 - ndtr(t)), 0.0), 1.0)
    return TestResult(t, p, bool(t > -ndtri(alpha)), False, sigma)


def perturbation_bound_check(rs: RankedSample, replacement, index: int = 0) -> float:
    """|change in Phi_n| when observation ``index`` moves to ``replacement``.

    ``replacement`` is a point (u, v) on the pseudo-observation scale; the
    modified sample is re-ranked with mid-ranks.
    """
    u, v = (np.array(a, dtype=float) for a in rs.pseudo_obs)
    u[index], v[index] = replacement
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TieWarning)
        moved = rank_data(u, v, ties="midrank")
    return abs(float(_phi_fraction(moved) - _phi_fraction(rs)))


@dataclass(frozen=True)
class EstimateReport:
    phi_hat: float
    footrule_hat: float
    gini_hat: float
    sigma_hat: float
    ci_low: float
    ci_high: float
    test_stat: float
    p_value: float
    reject: bool
    boundary: bool
    n: int
    alpha: float
    ties: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def estimate(xs, ys, alpha: float = 0.05, ties: str = "midrank", footrule: str = "pseudo",
             h: float | None = None, grid: int = DEFAULT_GRID) -> EstimateReport:
    """Full report for a raw bivariate sample."""
    _check_alpha(alpha)
    rs = rank_data(xs, ys, ties)
    sigma = sigma_hat(rs, h, grid)
    low, high = confidence_interval(rs, alpha, sigma)
    test = countermonotonicity_test(rs, alpha, sigma)
    foot = footrule_hat(rs, footrule)
    phi = phi_hat(rs)
    return EstimateReport(
        phi_hat=phi,
        footrule_hat=foot,
        gini_hat=2.0 / 3.0 * (foot + phi),
        sigma_hat=sigma,
        ci_low=low,
        ci_high=high,
        test_stat=test.statistic,
        p_value=test.p_value,
        reject=test.reject,
        boundary=test.boundary,
        n=rs.n,
        alpha=alpha,
        ties=rs.ties,
    )
