import numpy as np
import pytest

from rieszlat.poisson import (PeriodicPoissonEvaluator, fast_periodic_h2,
                              g_bound, green_w, harmonic_extension,
                              periodic_h, periodic_h_closed_1d,
                              periodic_h_grad, periodic_h_grad_closed_1d,
                              poisson_grad, poisson_p, psi_boundary)
from rieszlat.quadrature import integrate_1d


def test_poisson_kernel_normalized():
    # the d=1 kernel integrates to 1 over the line
    from rieszlat.quadrature import integrate_semiinf
    r = integrate_semiinf(
        lambda x: 2 * poisson_p(x, np.full(np.shape(x), 0.7), d=1),
        decay="algebraic")
    assert abs(r.value - 1.0) < 1e-8


def test_poisson_grad_finite_difference():
    rng = np.random.default_rng(0)
    for d in (1, 2):
        x = rng.uniform(-1, 1, (5, d))
        y = rng.uniform(0.3, 2.0, 5)
        g = poisson_grad(x, y, d=d)
        eps = 1e-6
        for j in range(d):
            xp = x.copy(); xp[:, j] += eps
            xm = x.copy(); xm[:, j] -= eps
            fd = (poisson_p(xp, y, d=d) - poisson_p(xm, y, d=d)) / (2 * eps)
            assert np.allclose(g[:, j], fd, atol=1e-6)
        fd = (poisson_p(x, y + eps, d=d)
              - poisson_p(x, y - eps, d=d)) / (2 * eps)
        assert np.allclose(g[:, d], fd, atol=1e-6)


def test_closed_1d_matches_lattice_sum():
    x = np.array([0.0, 0.3, 0.5])
    y = np.array([0.2, 0.7, 1.3])
    direct = np.zeros_like(x)
    R = 4000
    for n in range(-R, R + 1):
        direct += poisson_p(x - n, y, d=1)
    direct += 2 * y / (np.pi * (R + 0.5))  # midpoint tail of the lattice sum
    closed = periodic_h_closed_1d(x, y)
    assert np.allclose(closed, direct, rtol=1e-6)


def test_closed_1d_grad_finite_difference():
    x = np.array([0.1, 0.4])
    y = np.array([0.3, 1.1])
    g = periodic_h_grad_closed_1d(x, y)
    eps = 1e-6
    fdx = (periodic_h_closed_1d(x + eps, y)
           - periodic_h_closed_1d(x - eps, y)) / (2 * eps)
    fdy = (periodic_h_closed_1d(x, y + eps)
           - periodic_h_closed_1d(x, y - eps)) / (2 * eps)
    assert np.allclose(g[:, 0], fdx, atol=1e-6)
    assert np.allclose(g[:, 1], fdy, atol=1e-6)


def test_closed_1d_large_y_stable():
    h = periodic_h_closed_1d(np.array([0.3]), np.array([300.0]))
    assert np.isfinite(h[0]) and abs(h[0] - 1.0) < 1e-12


def test_evaluator_regime_continuity_d2():
    ev = PeriodicPoissonEvaluator(d=2, tol=1e-10)
    x = np.array([[0.2, -0.35]])
    for yb in (ev.y_direct_max, ev.y_const_min):
        lo = ev.h(x, np.array([yb - 1e-9]))
        hi = ev.h(x, np.array([yb + 1e-9]))
        assert abs(lo[0] - hi[0]) < 1e-7


def test_fast_h2_matches_evaluator():
    ev = PeriodicPoissonEvaluator(d=2, tol=1e-10)
    fast = fast_periodic_h2()
    rng = np.random.default_rng(3)
    x = rng.uniform(-3, 3, (40, 2))
    y = rng.uniform(1e-3, 9.0, 40)
    a = fast.h(x, y)
    b = ev.h(x, y)
    assert np.max(np.abs(a / b - 1.0)) < 1e-5


def test_periodic_h_wrapper_d1():
    ev = PeriodicPoissonEvaluator(d=1, tol=1e-10)
    x = np.array([[0.25]])
    y = np.array([0.6])
    assert np.allclose(periodic_h(x, y, ev),
                       periodic_h_closed_1d(x[:, 0], y), rtol=1e-8)
    g = periodic_h_grad(x, y, ev)
    gc = periodic_h_grad_closed_1d(x[:, 0], y)
    assert np.allclose(g, gc, atol=1e-7)


def test_gradient_bound():
    # |grad h| <= (d/y) h
    ev = PeriodicPoissonEvaluator(d=2, tol=1e-9)
    rng = np.random.default_rng(5)
    x = rng.uniform(-0.5, 0.5, (20, 2))
    y = rng.uniform(0.05, 3.0, 20)
    h = ev.h(x, y)
    g = ev.grad(x, y)
    assert np.all(np.linalg.norm(g, axis=1) <= 2.0 / y * h * (1 + 1e-8))


def test_psi_boundary_d1():
    x = np.array([0.0, 0.5, 1.0, 2.0, 0.25])
    t = np.pi * x[[1, 4]]
    psi = psi_boundary(x, 1)
    assert np.allclose(psi[[0, 2, 3]], [1.0, 0.0, 0.0], atol=1e-12)
    assert np.allclose(psi[[1, 4]], np.sin(t) ** 2 / t ** 2, atol=1e-12)


def test_psi_boundary_partition_inequality():
    # the translates of Psi sum to 1; a finite window stays just below
    x = np.array([0.3])
    total = sum(float(psi_boundary(x - n, 1)) for n in range(-200, 201))
    assert 0.99 < total <= 1.0 + 1e-6


def test_psi_boundary_d2_lattice_delta():
    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.3, 0.1]])
    psi = psi_boundary(x, 2)
    assert psi[0] == 1.0 and psi[1] == 0.0 and 0.0 < psi[2] < 1.0


def test_green_positive_and_bounded():
    rng = np.random.default_rng(7)
    w = 10.0
    for d in (1, 2):
        x = rng.uniform(-2, 2, (10, d))
        y = rng.uniform(0.1, 4.0, 10)
        g = green_w(x, y, w, d)
        assert np.all(g >= 0)
        # G_w / p_n(0, w) <= 2 y g(y / w)
        p0 = poisson_p(np.zeros((1, d)), np.array([w]), d=d)[0]
        assert np.all(g / p0 <= 2 * y * g_bound(y / w, d) * (1 + 1e-10))


def test_harmonic_extension_delta():
    # u = p_0/h lies in (0, 1] and approaches Psi at the boundary
    ev = PeriodicPoissonEvaluator(d=1, tol=1e-10)
    x = np.array([[0.2]])
    v = harmonic_extension({(0,): 1.0}, x, np.array([1e-4]), ev)
    assert 0.0 < v[0] <= 1.0
    assert abs(v[0] - float(psi_boundary(np.array([0.2]), 1))) < 1e-3
