import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from wfootrule._normal import bvn_cdf


def oracle(x, y, r):
    """P(X <= x, Y <= y) by 1-D quadrature over X's density."""
    if abs(r) == 1.0:
        if r > 0:
            return norm.cdf(min(x, y))
        return max(0.0, norm.cdf(x) - norm.cdf(-y))
    s = math.sqrt(1.0 - r * r)
    pts = [y / r] if r != 0 and -40 < y / r < x else None
    return quad(lambda t: norm.pdf(t) * norm.cdf((y - r * t) / s), -40, x,
                points=pts, epsabs=1e-15, epsrel=1e-13, limit=500)[0]


@pytest.mark.parametrize("r", [-1.0, -0.9999, -0.95, -0.93, -0.9, -0.6, -0.2, 0.0,
                               0.1, 0.5, 0.8, 0.92, 0.93, 0.99, 0.9999, 1.0])
def test_bvn_matches_quadrature_oracle(r):
    rng = np.random.default_rng(abs(hash(r)) % 2**32)
    xs = rng.normal(scale=2.5, size=25)
    ys = rng.normal(scale=2.5, size=25)
    got = bvn_cdf(xs, ys, r)
    want = np.array([oracle(x, y, r) for x, y in zip(xs, ys)])
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-10)


@pytest.mark.parametrize("r", [-0.99, -0.7, -0.3, 0.0, 0.4, 0.95])
def test_orthant_probability(r):
    # Sheppard: P(X <= 0, Y <= 0) = 1/4 + asin(r) / (2 pi)
    assert bvn_cdf(0.0, 0.0, r) == pytest.approx(0.25 + math.asin(r) / (2 * math.pi), abs=1e-14)


def test_infinite_limits():
    assert bvn_cdf(-np.inf, 0.3, 0.5) == 0.0
    assert bvn_cdf(np.inf, 0.3, 0.5) == pytest.approx(norm.cdf(0.3), abs=1e-15)
    assert bvn_cdf(0.3, np.inf, -0.5) == pytest.approx(norm.cdf(0.3), abs=1e-15)
    assert bvn_cdf(np.inf, np.inf, 0.2) == 1.0


def test_bvn_rejects_bad_correlation():
    with pytest.raises(ValueError):
        bvn_cdf(0.0, 0.0, 1.5)


def test_bvn_shapes():
    x = np.zeros((3, 4))
    assert bvn_cdf(x, 0.5, 0.3).shape == (3, 4)
    assert np.ndim(bvn_cdf(0.1, 0.2, 0.3)) == 0
