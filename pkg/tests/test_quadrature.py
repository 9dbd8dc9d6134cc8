import numpy as np
import pytest

from rieszlat.quadrature import (DEFAULT_CONFIG, QuadConfig, QuadratureError,
                                 digamma, integrate_1d, integrate_halfspace,
                                 integrate_semiinf, trigamma)


def test_polynomial_exact():
    r = integrate_1d(lambda x: 3 * x ** 2, 0.0, 2.0)
    assert abs(r.value - 8.0) < 1e-12


def test_exponential_interval():
    r = integrate_1d(np.exp, 0.0, 1.0)
    assert abs(r.value - (np.e - 1.0)) < 1e-12
    assert r.abs_error < 1e-8


def test_error_estimate_honest():
    r = integrate_1d(lambda x: np.sin(50 * x), 0.0, 1.0)
    truth = (1 - np.cos(50.0)) / 50.0
    assert abs(r.value - truth) <= max(r.abs_error * 10, 1e-12)


def test_semiinf_exponential():
    r = integrate_semiinf(lambda y: np.exp(-y))
    assert abs(r.value - 1.0) < 1e-10


def test_semiinf_algebraic():
    r = integrate_semiinf(lambda y: 1.0 / (1.0 + y * y), decay="algebraic")
    assert abs(r.value - np.pi / 2) < 1e-9


def test_semiinf_sinh_constant():
    # integral of y*log(y^2/pi^2+1)/sinh(y)^2 = pi * 0.0497822...
    r = integrate_semiinf(
        lambda y: y * np.log(y * y / np.pi ** 2 + 1.0) / np.sinh(y) ** 2)
    assert abs(r.value - np.pi * 0.0497822) < 5e-6


def test_halfspace_gaussian():
    r = integrate_halfspace(
        lambda x, y: y * np.exp(-(x[:, 0] ** 2 + y ** 2)), 1,
        QuadConfig(1e-8, 1e-10), y_decay="exponential")
    assert abs(r.value - np.sqrt(np.pi) / 2) < 1e-7


def test_halfspace_d2():
    r = integrate_halfspace(
        lambda x, y: np.exp(-(x[:, 0] ** 2 + x[:, 1] ** 2 + y ** 2)), 2,
        QuadConfig(1e-6, 1e-8), y_decay="exponential")
    assert abs(r.value - np.pi ** 1.5 / 2) < 1e-5


def test_nonfinite_raises():
    with pytest.raises(QuadratureError):
        integrate_1d(lambda x: 1.0 / x, -1.0, 1.0)


def test_digamma_trigamma():
    euler = 0.5772156649015329
    assert abs(digamma(1.0) + euler) < 1e-12
    assert abs(trigamma(1.0) - np.pi ** 2 / 6) < 1e-12
    assert abs(trigamma(0.5) - np.pi ** 2 / 2) < 1e-12
