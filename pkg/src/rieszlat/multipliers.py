"""Fourier multipliers of the d=1 transforms and the probability kernel.

All multipliers are odd and purely imaginary; they are stored in the
symmetrized real form g(xi) with the convention

    multiplier(xi) = -i * sign(xi) * g(xi),

so every function here returns reals.  M is the continuous probabilistic
multiplier, Mtilde its lattice periodization, 1 - 2|xi| the discrete
Hilbert multiplier on the fundamental cell, and (1 - 2|xi|)/Mtilde(xi) the
multiplier of the probability kernel P that factors the discrete Hilbert
transform through the probabilistic one.
"""

from __future__ import annotations

import numpy as np

from .quadrature import _scipy_digamma as _psi, _scipy_polygamma as _polyg


def _psi1(x):
    return _polyg(1, x)


def multiplier_M(xi):
    """Continuous probabilistic Hilbert multiplier (symmetrized form).

    1/|xi| for |xi| >= 1 and
    1 + (1-|xi|) [2(psi(1+|xi|) - psi(1)) + |xi| (psi'(1+|xi|) - psi'(1))]
    inside, continuous at |xi| = 1.
    """
    xi = np.abs(np.asarray(xi, dtype=float))
    out = np.empty(xi.shape)
    big = xi >= 1.0
    with np.errstate(divide="ignore"):
        out[big] = 1.0 / xi[big]
    s = xi[~big]
    corr = 2.0 * (_psi(1.0 + s) - _psi(1.0)) + s * (_psi1(1.0 + s) - _psi1(1.0))
    out[~big] = 1.0 + (1.0 - s) * corr
    return out if out.ndim else float(out)


def multiplier_Mtilde(xi):
    """Periodized probabilistic multiplier on [-1/2, 1/2] (symmetrized form)."""
    xi = np.asarray(xi, dtype=float)
    xi = np.abs(xi - np.round(xi))
    phi = _psi(1.0 + xi) + _psi(1.0 - xi) - 2.0 * _psi(np.ones_like(xi))
    dphi = _psi1(1.0 + xi) - _psi1(1.0 - xi)
    out = 1.0 + (1.0 - 2.0 * xi) * phi + xi * (1.0 - xi) * dphi
    # closed-form zero at the cell edge: psi'(3/2) - psi'(1/2) = -4
    out = np.where(xi == 0.5, 0.0, out)
    return out if out.ndim else float(out)


def hdis_multiplier(xi):
    """Discrete Hilbert multiplier 1 - 2|xi| on the fundamental cell."""
    xi = np.asarray(xi, dtype=float)
    xi = np.abs(xi - np.round(xi))
    out = 1.0 - 2.0 * xi
    return out if out.ndim else float(out)


def _pkernel_limit_half():
    """Limit of (1 - 2 xi)/Mtilde(xi) as xi -> 1/2, by Richardson extrapolation."""
    js = np.arange(18, 26)
    eps = 2.0 ** -js
    u = multiplier_Mtilde(0.5 - eps) / (2.0 * eps)
    # values behave like L + c*eps (+ O(eps^2)); eliminate the linear term
    r1 = u[1:] + (u[1:] - u[:-1])
    r2 = r1[1:] + (r1[1:] - r1[:-1]) / 3.0
    return 1.0 / float(r2[-1])


_LIMIT_HALF = None


def pkernel_multiplier(xi):
    """Multiplier (1 - 2|xi|)/Mtilde(xi) of the probability kernel P.

    The removable singularity at xi = 1/2 is filled by one-sided
    extrapolation.
    """
    global _LIMIT_HALF
    xi = np.asarray(xi, dtype=float)
    xi = np.abs(xi - np.round(xi))
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    out = np.empty(xi.shape)
    sing = np.abs(xi - 0.5) < 1e-9
    if sing.any():
        if _LIMIT_HALF is None:
            _LIMIT_HALF = _pkernel_limit_half()
        out[sing] = _LIMIT_HALF
    rest = ~sing
    out[rest] = (1.0 - 2.0 * xi[rest]) / multiplier_Mtilde(xi[rest])
    return float(out[0]) if scalar else out


def pkernel_coefficients(N=2 ** 16, imag_tol=1e-10):
    """Coefficients P(n), |n| <= N/2 - 1, of the probability kernel.

    Inverts the multiplier samples on an N-point grid by inverse DFT;
    raises if the imaginary residue of the inversion exceeds ``imag_tol``.
    Returns (n, P(n)) arrays ordered by n.
    """
    if N < 2 ** 12 or N & (N - 1):
        raise ValueError("N must be a power of two, at least 2**12")
    xi = np.fft.fftfreq(N)
    samples = pkernel_multiplier(xi)
    coef = np.fft.ifft(samples)
    resid = float(np.abs(coef.imag).max())
    if resid > imag_tol:
        raise ValueError(f"imaginary residue {resid:g} exceeds {imag_tol:g}")
    p = np.fft.fftshift(coef.real)
    n = np.arange(-N // 2, N // 2)
    return n, p


def th_multiplier_from_kernel(xi, n_terms=10 ** 4, kernel=None):
    """Partial Fourier sum of the probabilistic Hilbert kernel at ``xi``.

    Converges to sign-symmetrized Mtilde(xi); the closed form is the
    oracle.  ``kernel`` may supply precomputed values K(1..n_terms).
    """
    from .kernels import prob_hilbert_kernel_1d

    if n_terms < 10 ** 3:
        raise ValueError("need n_terms >= 1000")
    if kernel is None:
        kernel = np.array([prob_hilbert_kernel_1d(n)
                           for n in range(1, n_terms + 1)])
    ns = np.arange(1, n_terms + 1)
    xi = np.asarray(xi, dtype=float)
    # sum K(n) e^{-2 pi i n xi} over 0 < |n| <= N; odd kernel leaves
    # -i * 2 sum K(n) sin(2 pi n xi) = -i sign(xi) g(|xi|)
    g = 2.0 * np.sum(kernel * np.sin(2 * np.pi * ns * xi[..., None]), axis=-1)
    return g * np.sign(xi + (xi == 0))


def convolution_factorization_check(radius=500, nmax=10, cfg=None):
    """Deviation of (K_H * P)(n) from 1/(pi n) on |n| <= nmax.

    Truncates both factors at ``radius`` and returns a dict with the
    deviations and their maximum.
    """
    from .kernels import prob_hilbert_kernel_1d

    if radius < 50:
        raise ValueError("radius too small for a meaningful check")
    _, p = pkernel_coefficients()
    N = len(p)
    kh = np.zeros(2 * radius + 1)
    for j in range(1, radius + 1):
        kh[radius + j] = prob_hilbert_kernel_1d(j)
        kh[radius - j] = -kh[radius + j]
    pj = np.zeros(2 * radius + 1)
    ns = np.arange(-radius, radius + 1)
    pj[:] = p[ns + N // 2]
    conv = np.convolve(kh, pj)
    mid = len(conv) // 2
    devs = {}
    worst = 0.0
    for n in range(-nmax, nmax + 1):
        target = 0.0 if n == 0 else 1.0 / (np.pi * n)
        dev = float(conv[mid + n] - target)
        devs[n] = dev
        worst = max(worst, abs(dev))
    return {"radius": radius, "deviations": devs, "max_abs_deviation": worst}
