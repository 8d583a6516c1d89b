import math

import numpy as np
import pytest
from scipy.integrate import quad

from wfootrule.quadrature import QuadratureError, integrate


@pytest.mark.parametrize(
    "f, a, b, exact",
    [
        (np.exp, 0.0, 1.0, math.e - 1.0),
        (lambda x: x ** 3, -1.0, 2.0, 15.0 / 4.0),
        (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.29),
        (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
        (lambda x: np.minimum(x, 1.0 - x), 0.0, 1.0, 0.25),
    ],
)
def test_known_integrals(f, a, b, exact):
    res = integrate(f, a, b, tol=1e-11)
    assert res.value == pytest.approx(exact, abs=1e-10)
    assert res.error <= 1e-11


def test_against_quadpack():
    f = lambda x: np.log1p(np.expm1(5 * x) * np.expm1(5 * (1 - x)) / np.expm1(5.0))
    want = quad(f, 0, 1, epsabs=1e-14)[0]
    assert integrate(f, 0.0, 1.0, tol=1e-12).value == pytest.approx(want, abs=1e-12)


def test_breakpoints_speed_up_kinks():
    f = lambda x: np.abs(x - 0.5)
    plain = integrate(f, 0.0, 1.0, tol=1e-12)
    split = integrate(f, 0.0, 1.0, tol=1e-12, breakpoints=[0.5])
    assert split.evaluations < plain.evaluations
    assert split.value == pytest.approx(0.25, abs=1e-15)


def test_nonconvergence_carries_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.sin(1.0 / x), 1e-6, 1.0, tol=1e-14, max_panels=20)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_bound > 1e-14


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate(np.exp, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate(np.exp, 0.0, 1.0, tol=0.0)
