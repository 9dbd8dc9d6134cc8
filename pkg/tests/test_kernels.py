import numpy as np
import pytest

from rieszlat import kernels as K
from rieszlat.poisson import periodic_h_closed_1d, poisson_p
from rieszlat.quadrature import QuadConfig

FAST = QuadConfig(1e-6, 1e-8)


def test_hmatrix_properties():
    for d in (1, 2, 3):
        for k in range(1, d + 1):
            H = K.hmatrix(k, d)
            a = H.entries
            assert np.allclose(a + a.T, 0.0)
            assert H.is_orthogonal
            assert abs(H.op_norm - 1.0) < 1e-12


def test_cz_riesz_values():
    assert K.cz_riesz_kernel((1,), 1, 1) == pytest.approx(1 / np.pi)
    assert K.cz_riesz_kernel((0, 3), 1, 2) == 0.0
    assert K.cz_riesz_kernel((1, 0), 1, 2) == pytest.approx(1 / (2 * np.pi))
    n = (3, 2)
    v = K.cz_riesz_kernel(n, 1, 2)
    assert v == pytest.approx(3 / (2 * np.pi * 13 ** 1.5))
    assert v == pytest.approx(0.0102, abs=5e-5)


def test_cz_riesz_odd():
    assert K.cz_riesz_kernel((-2, 1), 1, 2) == -K.cz_riesz_kernel((2, -1), 1, 2)


def test_prob_hilbert_closed_form_value():
    # cross-check against the inverse Fourier transform of M-tilde
    from scipy.integrate import quad
    from rieszlat.multipliers import multiplier_Mtilde
    for n in (1, 2):
        v = K.prob_hilbert_kernel_1d(n, FAST)
        ref, _ = quad(lambda xi: 2 * multiplier_Mtilde(xi)
                      * np.sin(2 * np.pi * n * xi), 0, 0.5, limit=200)
        assert v == pytest.approx(ref, abs=1e-7)
    assert 1 / np.pi < K.prob_hilbert_kernel_1d(1, FAST) < 2 / np.pi
    assert K.prob_hilbert_kernel_1d(0, FAST) == 0.0
    assert K.prob_hilbert_kernel_1d(-2, FAST) == -K.prob_hilbert_kernel_1d(2, FAST)


def test_prob_riesz_matches_1d_closed_form():
    for n in (1, 2):
        gen = K.prob_riesz_kernel((n,), 1, 1, FAST)
        closed = K.prob_hilbert_kernel_1d(n, FAST)
        assert gen.value == pytest.approx(closed, abs=5e-6)


def test_rotation_2d_closed_values():
    assert K.rotation_kernel_2d((1, 0), 1) == pytest.approx(0.1318, abs=5e-5)
    assert K.rotation_kernel_2d((0, 2), 1) == 0.0
    assert K.rotation_kernel_2d((-1, 1), 1) == -K.rotation_kernel_2d((1, 1), 1)


def test_rotation_integral_matches_closed():
    for n in ((1, 0), (2, 1)):
        r = K.rotation_kernel(n, 1, 2, FAST)
        assert r.value == pytest.approx(K.rotation_kernel_2d(n, 1), abs=1e-8)


def test_rotation_d3_consistency():
    # coordinate swap symmetry: K_rot^1(a,b,c) relates to K_rot^2(b,a,c)
    r1 = K.rotation_kernel((1, 2, 0), 1, 3, FAST)
    r2 = K.rotation_kernel((2, 1, 0), 2, 3, FAST)
    assert r1.value == pytest.approx(r2.value, abs=1e-7)


def test_finite_w_diagonal_identity():
    # for A = Id the projection telescopes: K^w(0,0) = 1 - p_0(0,w)/h(0,w)
    Id = K.ConstantMatrix(np.eye(2))
    w = 5.0
    r = K.finite_w_kernel((0,), (0,), Id, w, 1, QuadConfig(1e-7, 1e-9))
    h0 = periodic_h_closed_1d(np.array([0.0]), np.array([w]))[0]
    p0 = poisson_p(np.zeros((1, 1)), np.array([w]), d=1)[0]
    assert r.value == pytest.approx(1.0 - p0 / h0, abs=1e-6)


def test_finite_w_converges_to_limit():
    H = K.hmatrix(1, 1)
    lim = K.limit_kernel((1,), (0,), H, 1, FAST).value
    errs = [abs(K.finite_w_kernel((1,), (0,), H, w, 1, FAST).value - lim)
            for w in (10.0, 100.0)]
    assert errs[1] < errs[0]
    assert errs[1] < 1e-3


def test_limit_kernel_matches_prob_kernel():
    H = K.hmatrix(1, 1)
    lim = K.limit_kernel((1,), (0,), H, 1, FAST).value
    assert lim == pytest.approx(K.prob_hilbert_kernel_1d(1, FAST), abs=1e-5)


def test_prob_integrands_identity():
    # U = 4S - 3T pointwise
    S, T, U = K.prob_integrands((1, 1), 1, 2)(
        np.array([[0.3, -0.2]]), np.array([0.8]))
    assert U == pytest.approx(4 * S - 3 * T)


def test_continuous_prob_hilbert_small_z():
    # inside the unit ball the kernel is exactly the continuous Riesz kernel
    v = K.continuous_prob_hilbert(0.5, FAST)
    assert v == pytest.approx(1 / (np.pi * 0.5), rel=1e-8)


def test_fourier_bound_constant():
    assert K.fourier_bound_const(FAST) == pytest.approx(1.0995643, abs=5e-5)
