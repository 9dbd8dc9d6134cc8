"""Kernels of the three discrete Riesz-transform families.

Calderon-Zygmund lattice restriction, probabilistic (harmonic-extension)
kernels via half-space integrals, projection kernels for constant matrices
at finite and infinite horizon, method-of-rotations kernels, and the
continuous probabilistic kernels with the constants attached to them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np

from .poisson import (
    PeriodicPoissonEvaluator,
    fast_periodic_h2,
    green_w,
    periodic_h_closed_1d,
    periodic_h_grad_closed_1d,
    poisson_const,
)
from .quadrature import (
    DEFAULT_CONFIG,
    QuadConfig,
    QuadResult,
    integrate_1d,
    integrate_halfspace,
    integrate_semiinf,
)


@dataclass(frozen=True)
class ConstantMatrix:
    """A constant (d+1)x(d+1) matrix with its spectral norm cached."""

    entries: np.ndarray
    op_norm: float = field(init=False)
    is_orthogonal: bool = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "op_norm", float(np.linalg.norm(a, 2)))
        # <Av, v> = 0 for all v iff the symmetric part vanishes
        object.__setattr__(self, "is_orthogonal",
                           bool(np.abs(a + a.T).max() < 1e-12))

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __eq__(self, other):
        return (isinstance(other, ConstantMatrix)
                and np.array_equal(self.entries, other.entries))


@dataclass(frozen=True)
class KernelKind:
    """Dispatch tag for a kernel family.

    ``tag`` is one of ``cz_riesz``, ``prob_riesz``, ``rotation``,
    ``finite_w``, ``hilbert_dis``, ``prob_hilbert``; ``k`` is the axis for
    the Riesz families, ``A``/``w`` parametrise the finite-horizon kernel.
    """

    tag: str
    d: int = 1
    k: int = 1
    A: ConstantMatrix | None = None
    w: float | None = None

    TAGS = ("cz_riesz", "prob_riesz", "rotation", "finite_w",
            "hilbert_dis", "prob_hilbert")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown kernel tag {self.tag!r}")
        if not 1 <= self.k <= self.d:
            raise ValueError("axis k out of range")
        if self.tag == "finite_w" and (self.A is None or self.w is None):
            raise ValueError("finite_w kernel needs A and w")


def hmatrix(k, d):
    """The antisymmetric matrix H^(k): -1 at (k, d+1), +1 at (d+1, k)."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    a = np.zeros((d + 1, d + 1))
    a[k - 1, d] = -1.0
    a[d, k - 1] = 1.0
    return ConstantMatrix(a)


def cz_riesz_kernel(n, k, d):
    """Lattice restriction c_d n_k / |n|^(d+1) of the Riesz kernel."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    n = np.asarray(n, dtype=float).reshape(d)
    r = np.sqrt(np.sum(n * n))
    if r == 0.0:
        return 0.0
    return poisson_const(d) * n[k - 1] / r ** (d + 1)


def prob_integrands(n, k, d):
    """Factory for the S_n, T_n, U_n integrands of the probabilistic kernel.

    Returns a function (x, y) -> (S, T, U) with x of shape (..., d);
    U = 4S - 3T, and all three integrate to c_d n_k/|n|^(d+1) over the
    half-space.
    """
    n = np.asarray(n, dtype=float).reshape(d)
    cd = poisson_const(d)
    a_s = 2 * cd * cd * (d + 1)
    a_t = (4.0 / 3.0) * cd * cd * (d + 1) ** 2

    def f(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        rn2 = np.sum((x - n) ** 2, axis=-1)
        q0 = r2 + y * y
        qn = rn2 + y * y
        xk = x[..., k - 1]
        s = a_s * xk * y ** 2 / (q0 ** ((d + 3) / 2) * qn ** ((d + 1) / 2))
        t = a_t * xk * y ** 4 / (q0 ** ((d + 3) / 2) * qn ** ((d + 3) / 2))
        return s, t, 4 * s - 3 * t

    return f


def _h_callable(d, ev=None):
    """Periodic-kernel evaluator (x: (m,d), y: (m,)) -> h, fastest available."""
    if ev is not None:
        return lambda x, y: ev.h(x, y)
    if d == 1:
        return lambda x, y: periodic_h_closed_1d(x[..., 0], y)
    if d == 2:
        fast = fast_periodic_h2()
        return fast.h
    ev = PeriodicPoissonEvaluator(d, tol=1e-9)
    return lambda x, y: ev.h(x, y)


def prob_riesz_kernel(n, k, d, cfg=DEFAULT_CONFIG, ev=None):
    """Probabilistic discrete Riesz kernel K_{H^(k)}(n), half-space integral of U_n/h."""
    n = np.asarray(n, dtype=float).reshape(d)
    if n[k - 1] == 0.0:
        return QuadResult(0.0, 0.0, 0)
    stu = prob_integrands(n, k, d)
    h = _h_callable(d, ev)

    def f(x, y):
        return stu(x, y)[2] / h(x, y)

    return integrate_halfspace(f, d, cfg)


def prob_hilbert_kernel_1d(n, cfg=DEFAULT_CONFIG):
    """d=1 closed form: (1/(pi n)) (1 + int 2y^3/((y^2+pi^2 n^2) sinh^2 y))."""
    n = int(n)
    if n == 0:
        return 0.0
    a = (pi * n) ** 2

    def f(y):
        return 2 * y ** 3 / ((y * y + a) * np.sinh(y) ** 2)

    r = integrate_semiinf(f, cfg)
    return (1.0 + r.value) / (pi * n)


def _grad_p_over_h(n, d, ev):
    """Factory for grad(p_n/h)(x, y), an (m, d+1) array per call."""
    n = np.asarray(n, dtype=float).reshape(d)
    cd = poisson_const(d)

    if d == 1 and ev is None:
        def g(x, y):
            z = x[..., 0] - n[0]
            q = z * z + y * y
            p = cd * y / q
            h = periodic_h_closed_1d(x[..., 0], y)
            gh = periodic_h_grad_closed_1d(x[..., 0], y)
            px = -2 * z * p / q
            py = (z * z - y * y) / (y * q) * p
            gx = (px * h - p * gh[..., 0]) / (h * h)
            gy = (py * h - p * gh[..., 1]) / (h * h)
            return np.stack([gx, gy], axis=-1), h
        return g

    evaluator = ev if ev is not None else PeriodicPoissonEvaluator(d, tol=1e-9)

    def g(x, y):
        z = x - n
        r2 = np.sum(z * z, axis=-1)
        q = r2 + y * y
        p = cd * y / q ** ((d + 1) / 2)
        px = -(d + 1) * z * (p / q)[..., None]
        py = (r2 - d * y * y) / (y * q) * p
        gp = np.concatenate([px, py[..., None]], axis=-1)
        h = evaluator.h(x, y)
        gh = evaluator.grad(x, y)
        return (gp * h[..., None] - p[..., None] * gh) / (h * h)[..., None], h
    return g


def _projection_integrand(n, m, A, d, weight, ev=None):
    """Integrand h * A grad(p_m/h) . grad(p_n/h) * weight(x, y)."""
    a = np.asarray(A.entries, dtype=float)
    gn = _grad_p_over_h(n, d, ev)
    gm = _grad_p_over_h(m, d, ev)

    def f(x, y):
        vn, h = gn(x, y)
        vm, _ = gm(x, y)
        av = vm @ a.T
        dot = np.sum(av * vn, axis=-1)
        return h * dot * weight(x, y)
    return f


def finite_w_kernel(n, m, A, w, d, cfg=DEFAULT_CONFIG, ev=None):
    """Finite-horizon projection kernel, Green-function weighted."""
    if w <= 0:
        raise ValueError("need w > 0")
    if A.op_norm == 0.0:
        return QuadResult(0.0, 0.0, 0)
    nv = np.asarray(n, dtype=float).reshape(d)
    pnw = poisson_const(d) * w / (np.sum(nv * nv) + w * w) ** ((d + 1) / 2)

    def weight(x, y):
        return green_w(x, y, w, d) / pnw

    f = _projection_integrand(nv, np.asarray(m, float).reshape(d), A, d,
                              weight, ev)
    return integrate_halfspace(f, d, cfg)


def limit_kernel(n, m, A, d, cfg=DEFAULT_CONFIG, ev=None):
    """Infinite-horizon projection kernel: the 2y-weighted integral."""
    if A.op_norm == 0.0:
        return QuadResult(0.0, 0.0, 0)
    f = _projection_integrand(np.asarray(n, float).reshape(d),
                              np.asarray(m, float).reshape(d), A, d,
                              lambda x, y: 2 * y, ev)
    return integrate_halfspace(f, d, cfg)


def rotation_kernel_2d(n, i):
    """d=2 method-of-rotations kernel, closed form."""
    n = np.asarray(n, dtype=float).reshape(2)
    if n[i - 1] == 0.0:
        return 0.0
    j = 2 - i  # complementary axis index (0-based)
    e = np.zeros(2)
    e[j] = 1.0
    val = (np.linalg.norm(n + e) + np.linalg.norm(n - e)
           - 2 * np.linalg.norm(n))
    return val / (2 * pi * n[i - 1])


def _rotation_inner_2d(lo, hi):
    """Integral of (1+a^2)^(-3/2) over [lo, hi): antiderivative a/sqrt(1+a^2)."""
    return hi / np.sqrt(1 + hi * hi) - lo / np.sqrt(1 + lo * lo)


def rotation_kernel(n, k, d, cfg=DEFAULT_CONFIG):
    """Method-of-rotations kernel from its directional-average integral.

    For n_k = 0 returns 0 by oddness; otherwise the first and k-th
    coordinates are swapped so the fiber direction is axis 1.
    """
    if d < 2:
        raise ValueError("rotation kernel needs d >= 2")
    n = np.asarray(n, dtype=float).reshape(d).copy()
    if n[k - 1] == 0.0:
        return QuadResult(0.0, 0.0, 0)
    n[0], n[k - 1] = n[k - 1], n[0]
    sign = 1.0
    if n[0] < 0:
        n = -n
        sign = -1.0
    n1 = n[0]
    ntail = n[1:]
    c_d = pi * poisson_const(d)

    if d == 2:
        def outer(b):
            lo = (ntail[0] - b) / n1
            return _rotation_inner_2d(lo, lo + 1.0 / n1)

        r = integrate_1d(outer, 0.0, 1.0, cfg)
        val = sign * c_d * r.value / (pi * n1)
        return QuadResult(val, c_d * r.abs_error / (pi * n1), r.evals)

    # d = 3: fixed-order Gauss-Legendre on the inner 1/n1-box, with one
    # level of refinement; adaptive in the outer average
    gl_x, gl_w = np.polynomial.legendre.leggauss(8)

    def inner_box(lo):
        # integral over lo + [0, 1/n1)^2 of (1+|a|^2)^(-2)
        panels = 2 if n1 <= 2 else 1
        step = 1.0 / (n1 * panels)
        total = 0.0
        for i1 in range(panels):
            for i2 in range(panels):
                a1 = lo[0] + i1 * step + (gl_x + 1) * step / 2
                a2 = lo[1] + i2 * step + (gl_x + 1) * step / 2
                g = 1.0 / (1 + a1[:, None] ** 2 + a2[None, :] ** 2) ** 2
                total += (step / 2) ** 2 * (gl_w[:, None] * gl_w[None, :]
                                            * g).sum()
        return total

    def outer2(b2):
        def outer1(b1):
            return inner_box((ntail - np.array([b1, b2])) / n1)
        return integrate_1d(outer1, 0.0, 1.0, cfg).value

    r = integrate_1d(outer2, 0.0, 1.0, cfg)
    val = sign * c_d * r.value / (pi * n1)
    return QuadResult(val, c_d * 2 * r.abs_error / (pi * n1), r.evals)


def continuous_prob_hilbert(z, cfg=DEFAULT_CONFIG):
    """Continuous probabilistic Hilbert kernel K_H(z), discontinuous at |z|=1."""
    z = float(z)
    if z == 0.0:
        raise ZeroDivisionError("kernel has a pole at z = 0")
    if abs(z) < 1.0:
        return 1.0 / (pi * z)
    a = (pi * z) ** 2

    def f(y):
        return 2 * y ** 3 / ((y * y + a) * np.sinh(y) ** 2)

    r = integrate_semiinf(f, cfg)
    return (1.0 + r.value) / (pi * z)


def j_tail_l1_norm(cfg=DEFAULT_CONFIG):
    """L1 norm of the |z| >= 1 tail J of the continuous Hilbert kernel."""

    def inner(z):
        a = (pi * z) ** 2
        return integrate_semiinf(
            lambda y: 2 * y ** 3 / ((y * y + a) * np.sinh(y) ** 2), cfg).value

    def outer(s):
        z = 1.0 + s
        return inner(z) / (pi * z)

    r = integrate_semiinf(outer, cfg, decay="algebraic")
    return QuadResult(2 * r.value, 2 * r.abs_error, r.evals)


def fourier_bound_const(cfg=DEFAULT_CONFIG):
    """The constant 1 + (2/pi) int y ln(y^2/pi^2 + 1)/sinh^2 y dy ~ 1.09956."""
    r = integrate_semiinf(
        lambda y: y * np.log(y * y / pi ** 2 + 1.0) / np.sinh(y) ** 2, cfg)
    return 1.0 + (2 / pi) * r.value


def continuous_prob_riesz(z, k, d, cfg=DEFAULT_CONFIG, ev=None):
    """Continuous probabilistic Riesz kernel for d >= 2.

    Inside the unit ball it coincides with the continuous Riesz kernel
    c_d z_k/|z|^(d+1); outside, the correction is the half-space integral
    of U_z (1/h - 1), which decays and is evaluated by quadrature.
    """
    if d < 2:
        raise ValueError("use continuous_prob_hilbert for d = 1")
    z = np.asarray(z, dtype=float).reshape(d)
    r = np.sqrt(np.sum(z * z))
    if r == 0.0:
        raise ZeroDivisionError("kernel has a pole at z = 0")
    base = poisson_const(d) * z[k - 1] / r ** (d + 1)
    if r < 1.0:
        return QuadResult(base, 0.0, 0)
    stu = prob_integrands(z, k, d)
    h = _h_callable(d, ev)

    def f(x, y):
        return stu(x, y)[2] * (1.0 / h(x, y) - 1.0)

    q = integrate_halfspace(f, d, cfg)
    return QuadResult(base + q.value, q.abs_error, q.evals)
