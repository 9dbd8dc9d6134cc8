"""Poisson kernel of the upper half-space and its lattice periodization.

The periodization h(x, y) = sum over integer shifts of the Poisson kernel is
evaluated with a regime switch: a tail-corrected lattice sum for small y, a
Fourier (Poisson-summation) series for moderate y, and the constant 1 for
large y.  In one dimension the closed form
sinh(2 pi y) / (cosh(2 pi y) - cos(2 pi x)) is exposed as well and serves as
the oracle for the other two strategies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np


def poisson_const(d):
    """Normalisation c_d = Gamma((d+1)/2) * pi^(-(d+1)/2)."""
    return gamma((d + 1) / 2) * pi ** (-(d + 1) / 2)


def _chunks(n, size):
    """Slices covering range(n) in blocks of at most ``size``."""
    return [slice(i, min(i + size, n)) for i in range(0, max(n, 1), size)]


def _points(x, d):
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise ValueError(f"expected last axis of length {d}")
    return x


def poisson_p(x, y, n=None, d=1):
    """Poisson kernel p(x - n, y) = c_d y / (|x-n|^2 + y^2)^((d+1)/2)."""
    x = _points(x, d)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    if n is not None:
        x = x - np.asarray(n, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    return poisson_const(d) * y / (r2 + y * y) ** ((d + 1) / 2)


def poisson_grad(x, y, n=None, d=1):
    """Gradient (d/dx_1, ..., d/dx_d, d/dy) of p(x - n, y)."""
    x = _points(x, d)
    y = np.asarray(y, dtype=float)
    if n is not None:
        x = x - np.asarray(n, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    q = r2 + y * y
    p = poisson_const(d) * y / q ** ((d + 1) / 2)
    gx = -(d + 1) * x * (p / q)[..., None]
    gy = (r2 - d * y * y) / (y * q) * p
    return np.concatenate([gx, gy[..., None]], axis=-1)


def periodic_h_closed_1d(x, y):
    """d=1 closed form sinh(2 pi y) / (cosh(2 pi y) - cos(2 pi x)).

    Evaluated via u = exp(-2 pi y) so large y cannot overflow.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.exp(-2 * pi * y)
    c = np.cos(2 * pi * x)
    return (1.0 - u * u) / (1.0 + u * u - 2 * c * u)


def periodic_h_grad_closed_1d(x, y):
    """Gradient (d/dx, d/dy) of the d=1 closed form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.exp(-2 * pi * y)
    c = np.cos(2 * pi * x)
    den = (1.0 + u * u - 2 * c * u) ** 2
    hx = -4 * pi * np.sin(2 * pi * x) * u * (1.0 - u * u) / den
    hy = 4 * pi * u * (2 * u - c - c * u * u) / den
    return np.stack([hx, hy], axis=-1)


def _box_integral(z, y, L, d):
    """Integral of p(z - u, y) over the cube |u|_inf <= L (d <= 2)."""
    if d == 1:
        a = (z[..., 0] + L) / y
        b = (z[..., 0] - L) / y
        return (np.arctan(a) - np.arctan(b)) / pi
    if d == 2:
        # solid-angle formula over the rectangle, corner by corner
        total = np.zeros(np.broadcast_shapes(z[..., 0].shape, np.shape(y)))
        for s1, e1 in ((1.0, L), (-1.0, -L)):
            for s2, e2 in ((1.0, L), (-1.0, -L)):
                a = z[..., 0] + e1
                b = z[..., 1] + e2
                s = np.sqrt(a * a + b * b + y * y)
                total = total + s1 * s2 * np.arctan(a * b / (y * s))
        return total / (2 * pi)
    raise ValueError("box integral only for d <= 2")


def _box_integral_dy(z, y, L):
    """d/dy of the d=2 box integral."""
    total = np.zeros(np.broadcast_shapes(z[..., 0].shape, np.shape(y)))
    for s1, e1 in ((1.0, L), (-1.0, -L)):
        for s2, e2 in ((1.0, L), (-1.0, -L)):
            a = z[..., 0] + e1
            b = z[..., 1] + e2
            s = np.sqrt(a * a + b * b + y * y)
            n = a * b
            total = total + s1 * s2 * (-n * (s + y * y / s) / (y * y * s * s + n * n))
    return total / (2 * pi)


def _edge_integral_2d(A, c0, c1, y):
    """Integral of p((A, v), y) dv for v in [c0, c1]."""
    c2 = poisson_const(2)
    s0 = np.sqrt(A * A + c0 * c0 + y * y)
    s1 = np.sqrt(A * A + c1 * c1 + y * y)
    return c2 * y * (c1 / s1 - c0 / s0) / (A * A + y * y)


def _ball_tail_3d(R, y):
    """Integral of p over |u| > R for d=3."""
    return 1.0 - (2 / pi) * (np.arctan(R / y) - R * y / (R * R + y * y))


@dataclass(frozen=True)
class PeriodicPoissonEvaluator:
    """Regime-switched evaluator for the periodic Poisson kernel.

    Strategy: tail-corrected lattice sum for y <= y_direct_max, Fourier
    series for y_direct_max < y < y_const_min, constant 1 beyond.  ``tol``
    drives the truncation radii; for d=3 the direct-sum tail correction is
    approximate and accuracy saturates around 1e-6.
    """

    d: int
    y_direct_max: float = 0.25
    y_const_min: float = 10.0
    tol: float = 1e-12
    max_radius: int = field(default=4000, repr=False)

    def __post_init__(self):
        if not 0 < self.y_direct_max < self.y_const_min:
            raise ValueError("need 0 < y_direct_max < y_const_min")

    # -- radii from the analytic tail bounds ------------------------------

    def _direct_radius(self, ymax):
        # midpoint correction error ~ y / (6 R^3)
        R = int(np.ceil((max(ymax, 1e-3) / (6 * self.tol)) ** (1 / 3))) + 2
        return min(max(R, 3), self.max_radius)

    def _fourier_radius(self, ymin):
        t = 2 * pi * ymin
        R = np.log(1.0 / self.tol) / t + 1
        for _ in range(3):
            count = (2 * R + 1) ** self.d
            R = (np.log(count / self.tol) + np.log(1 + 1 / t)) / t
        return min(max(int(np.ceil(R)), 2), self.max_radius)

    def _offsets(self, R):
        ax = np.arange(-R, R + 1)
        grids = np.meshgrid(*([ax] * self.d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1).astype(float)

    # -- strategies -------------------------------------------------------

    def h_direct(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        n0 = np.round(x)
        z = x - n0
        R = self._direct_radius(float(np.max(y)))
        off = self._offsets(R)
        zf = z.reshape(-1, self.d)
        yf = (np.broadcast_to(y, z.shape[:-1]).reshape(-1) if np.ndim(y)
              else np.full(len(zf), float(y)))
        s = np.empty(len(zf))
        cd = poisson_const(self.d)
        for sl in _chunks(len(zf), max(1, int(4e7 / len(off)))):
            diff = zf[sl, None, :] - off
            q = np.sum(diff * diff, axis=-1) + yf[sl, None] ** 2
            s[sl] = cd * yf[sl] * np.sum(q ** (-(self.d + 1) / 2), axis=-1)
        s = s.reshape(z.shape[:-1])
        L = R + 0.5
        if self.d <= 2:
            tail = 1.0 - _box_integral(z, y, L, self.d)
        else:
            tail = _ball_tail_3d(L, y)
        return s + tail

    def h_fourier(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        R = self._fourier_radius(float(np.min(y)))
        off = self._offsets(R)
        norms = np.sqrt(np.sum(off * off, axis=-1))
        xf = x.reshape(-1, self.d)
        yf = (np.broadcast_to(y, x.shape[:-1]).reshape(-1) if np.ndim(y)
              else np.full(len(xf), float(y)))
        s = np.empty(len(xf))
        for sl in _chunks(len(xf), max(1, int(4e7 / len(off)))):
            phase = 2 * pi * (xf[sl] @ off.T)
            damp = np.exp(-2 * pi * norms * yf[sl, None])
            s[sl] = np.sum(damp * np.cos(phase), axis=-1)
        return s.reshape(x.shape[:-1])

    def grad_direct(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        n0 = np.round(x)
        z = x - n0
        R = self._direct_radius(float(np.max(y)))
        off = self._offsets(R)
        zf = z.reshape(-1, self.d)
        yf = (np.broadcast_to(y, z.shape[:-1]).reshape(-1) if np.ndim(y)
              else np.full(len(zf), float(y)))
        gx = np.empty((len(zf), self.d))
        gy = np.empty(len(zf))
        cd = poisson_const(self.d)
        for sl in _chunks(len(zf), max(1, int(2e7 / len(off)))):
            diff = zf[sl, None, :] - off
            r2 = np.sum(diff * diff, axis=-1)
            yy = yf[sl, None]
            q = r2 + yy * yy
            p = cd * yy / q ** ((self.d + 1) / 2)
            gx[sl] = np.sum(-(self.d + 1) * diff * (p / q)[..., None], axis=-2)
            gy[sl] = np.sum((r2 - self.d * yy * yy) / (yy * q) * p, axis=-1)
        gx = gx.reshape(z.shape)
        gy = gy.reshape(z.shape[:-1])
        L = R + 0.5
        if self.d == 1:
            zp = z[..., 0] + L
            zm = z[..., 0] - L
            pm = y / (pi * (zm * zm + y * y))
            pp = y / (pi * (zp * zp + y * y))
            gx = gx + (pm - pp)[..., None]
            gy = gy + (zp / (zp * zp + y * y) - zm / (zm * zm + y * y)) / pi
        elif self.d == 2:
            for j in (0, 1):
                other = 1 - j
                c0 = z[..., other] - L
                c1 = z[..., other] + L
                hi = _edge_integral_2d(z[..., j] + L, c0, c1, y)
                lo = _edge_integral_2d(z[..., j] - L, c0, c1, y)
                gx[..., j] = gx[..., j] - (hi - lo)
            gy = gy - _box_integral_dy(z, y, L)
        return np.concatenate([gx, gy[..., None]], axis=-1)

    def grad_fourier(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        R = self._fourier_radius(float(np.min(y)))
        off = self._offsets(R)
        norms = np.sqrt(np.sum(off * off, axis=-1))
        xf = x.reshape(-1, self.d)
        yf = (np.broadcast_to(y, x.shape[:-1]).reshape(-1) if np.ndim(y)
              else np.full(len(xf), float(y)))
        gx = np.empty((len(xf), self.d))
        gy = np.empty(len(xf))
        for sl in _chunks(len(xf), max(1, int(2e7 / len(off)))):
            phase = 2 * pi * (xf[sl] @ off.T)
            damp = np.exp(-2 * pi * norms * yf[sl, None])
            for j in range(self.d):
                gx[sl, j] = np.sum(-2 * pi * off[:, j] * damp * np.sin(phase),
                                   axis=-1)
            gy[sl] = np.sum(-2 * pi * norms * damp * np.cos(phase), axis=-1)
        gx = gx.reshape(x.shape)
        gy = gy.reshape(x.shape[:-1])
        return np.concatenate([gx, gy[..., None]], axis=-1)

    # -- regime-switched entry points -------------------------------------

    def h(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y[..., None])
        y = y[..., 0]
        out = np.ones(y.shape)
        lo = y <= self.y_direct_max
        mid = (~lo) & (y < self.y_const_min)
        if lo.any():
            out[lo] = self.h_direct(x[lo], y[lo])
        if mid.any():
            out[mid] = self.h_fourier(x[mid], y[mid])
        return out if out.ndim else float(out)

    def grad(self, x, y):
        x = _points(x, self.d)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y[..., None])
        y = y[..., 0]
        out = np.zeros(y.shape + (self.d + 1,))
        lo = y <= self.y_direct_max
        mid = (~lo) & (y < self.y_const_min)
        if lo.any():
            out[lo] = self.grad_direct(x[lo], y[lo])
        if mid.any():
            out[mid] = self.grad_fourier(x[mid], y[mid])
        return out


class InterpolatedPeriodicH2:
    """Fast d=2 periodic Poisson kernel for quadrature-heavy callers.

    Splits h into an exact local lattice sum over the 5x5 window around
    the nearest lattice point plus y times a smooth remainder rho(z, y),
    which is tabulated once on a grid over the unit cell and evaluated with
    a cubic spline.  The remainder is even in y and smooth on the padded
    grid, so no seam crosses the interpolation domain.  Relative accuracy
    is a few times 1e-7; use PeriodicPoissonEvaluator when more is needed.
    """

    WINDOW = 2          # local window |m|_inf <= WINDOW summed exactly
    FAR = 48            # remainder lattice sum radius at small y
    DZ = 1.0 / 64       # grid step in each x coordinate
    DY = 1.0 / 32       # grid step in y
    PAD = 12            # spline guard cells on every side

    def __init__(self, cache_dir=None):
        from scipy import ndimage

        self._ndimage = ndimage
        ax = np.arange(-self.WINDOW, self.WINDOW + 1)
        g1, g2 = np.meshgrid(ax, ax, indexing="ij")
        self._local = np.stack([g1.ravel(), g2.ravel()], axis=-1).astype(float)
        grid = self._load(cache_dir)
        if grid is None:
            grid = self._build()
            self._store(cache_dir, grid)
        self._grid = ndimage.spline_filter(grid, order=3, mode="nearest")

    def _cache_path(self, cache_dir):
        import os
        if cache_dir is None:
            cache_dir = os.environ.get("DISCT_CACHE") or os.path.join(
                os.path.expanduser("~"), ".cache", "rieszlat")
        tag = f"h2grid_w{self.WINDOW}_f{self.FAR}_{int(1/self.DZ)}_{int(1/self.DY)}"
        return os.path.join(cache_dir, tag + ".npy")

    def _load(self, cache_dir):
        import os
        path = self._cache_path(cache_dir)
        if os.path.exists(path):
            return np.load(path)
        return None

    def _store(self, cache_dir, grid):
        import os
        path = self._cache_path(cache_dir)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = path[:-4] + f".tmp{os.getpid()}.npy"
        np.save(tmp, grid)
        os.replace(tmp, path)

    def _build(self):
        nz = int(round(1.0 / self.DZ)) + 1 + 2 * self.PAD
        z1 = -0.5 - self.PAD * self.DZ + self.DZ * np.arange(nz)
        ny_pos = int(round(10.0 / self.DY)) + 1 + self.PAD
        ys = self.DY * np.arange(ny_pos)
        Z1, Z2 = np.meshgrid(z1, z1, indexing="ij")
        zpts = np.stack([Z1.ravel(), Z2.ravel()], axis=-1)

        rows = np.empty((nz * nz, ny_pos))
        c2 = poisson_const(2)
        axf = np.arange(-self.FAR, self.FAR + 1)
        f1, f2 = np.meshgrid(axf, axf, indexing="ij")
        far = np.stack([f1.ravel(), f2.ravel()], axis=-1).astype(float)
        far = far[np.max(np.abs(far), axis=1) > self.WINDOW]
        L = self.FAR + 0.5
        direct = [j for j, y in enumerate(ys) if y <= 0.25]

        # small-y rows: remainder lattice sum + cube-complement correction,
        # accumulated over z-chunks to bound memory
        for sl in _chunks(len(zpts), 2048):
            dz = zpts[sl, None, :] - far
            r2 = np.sum(dz * dz, axis=-1)
            for j in direct:
                y = ys[j]
                q = r2 + y * y
                s = c2 * np.sum(1.0 / (q * np.sqrt(q)), axis=-1)
                if y == 0.0:
                    tail = c2 * _inv_cube_complement_2d(zpts[sl], L)
                else:
                    tail = (1.0 - _box_integral(zpts[sl], y, L, 2)) / y
                rows[sl, j] = s + tail

        ev = PeriodicPoissonEvaluator(2)
        dl = zpts[:, None, :] - self._local
        r2l = np.sum(dl * dl, axis=-1)
        for j, y in enumerate(ys):
            if y <= 0.25:
                continue
            h = ev.h_fourier(zpts, np.full(len(zpts), y))
            q = r2l + y * y
            loc = c2 * y * np.sum(1.0 / (q * np.sqrt(q)), axis=-1)
            rows[:, j] = (h - loc) / y

        grid = rows.reshape(nz, nz, ny_pos)
        # rho is even in y: mirror PAD rows below y = 0
        return np.concatenate([grid[:, :, self.PAD:0:-1], grid], axis=2)

    def h(self, x, y):
        """h(x, y) for x of shape (..., 2) and broadcastable y > 0."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, yb = np.broadcast_arrays(x, y[..., None])
        y = yb[..., 0]
        out = np.ones(y.shape)
        m = y < 10.0
        if m.any():
            xm = np.atleast_2d(x[m])
            ym = np.atleast_1d(y[m])
            vals = np.empty(len(ym))
            ax = np.arange(-self.WINDOW, self.WINDOW + 1, dtype=float)
            for sl in _chunks(len(ym), 200_000):
                z = xm[sl] - np.round(xm[sl])
                yc = ym[sl]
                a1 = (z[:, 0, None] - ax) ** 2
                a2 = (z[:, 1, None] - ax) ** 2
                q = a1[:, :, None] + a2[:, None, :]
                q += (yc * yc)[:, None, None]
                r = np.sqrt(q)
                q *= r
                np.reciprocal(q, out=q)
                loc = poisson_const(2) * yc * q.sum(axis=(1, 2))
                coords = np.stack([
                    (z[:, 0] + 0.5) / self.DZ + self.PAD,
                    (z[:, 1] + 0.5) / self.DZ + self.PAD,
                    yc / self.DY + self.PAD,
                ])
                rho = self._ndimage.map_coordinates(
                    self._grid, coords, order=3, mode="nearest", prefilter=False)
                vals[sl] = loc + yc * rho
            out[m] = vals
        return out if out.ndim else float(out)


_FAST_H2 = None


def fast_periodic_h2():
    """Shared :class:`InterpolatedPeriodicH2`, built on first use."""
    global _FAST_H2
    if _FAST_H2 is None:
        _FAST_H2 = InterpolatedPeriodicH2()
    return _FAST_H2


def periodic_h(x, y, ev):
    """Periodic Poisson kernel h(x, y) via the evaluator's regime switch."""
    return ev.h(x, y)


def periodic_h_grad(x, y, ev):
    """Gradient of h, same regime switch as :func:`periodic_h`."""
    return ev.grad(x, y)


def green_w(x, y, w, d=1):
    """Green's function of the upper half-space with pole (0, w)."""
    x = _points(x, d)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0) or w <= 0:
        raise ValueError("need y > 0 and w > 0")
    r2 = np.sum(x * x, axis=-1)
    rm2 = r2 + (y - w) ** 2
    rp2 = r2 + (y + w) ** 2
    if np.any(rm2 == 0):
        raise ZeroDivisionError("Green's function evaluated at its pole")
    if d == 1:
        return np.log(rp2 / rm2) / (2 * pi)
    coef = gamma((d - 1) / 2) / (2 * pi ** ((d + 1) / 2))
    e = (d - 1) / 2
    return coef * (rm2 ** -e - rp2 ** -e)


def g_bound(t, d=1):
    """Envelope g(t) controlling G_w / p_n(0, w) <= 2 y g(y / w)."""
    t = np.asarray(t, dtype=float)
    if np.any(t == 1):
        raise ZeroDivisionError("g has a pole at t = 1")
    if d == 1:
        if np.any(t <= 0):
            raise ValueError("d=1 branch needs t > 0")
        return np.log1p(4 * t / (t - 1) ** 2) / (2 * t)
    return 2 ** ((d + 1) / 2) * np.abs(t - 1.0) ** (-(d + 1))


def _inv_dist_sum(z, R, d):
    """Sum of |z - m|^-(d+1) over |m|_inf <= R (z reduced near 0)."""
    ax = np.arange(-R, R + 1)
    grids = np.meshgrid(*([ax] * d), indexing="ij")
    off = np.stack([g.ravel() for g in grids], axis=-1).astype(float)
    diff = z[..., None, :] - off
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    return np.sum(r ** (-(d + 1)), axis=-1)


def _inv_cube_complement_2d(z, L):
    """Integral of |z - u|^-3 over |u|_inf > L (d=2, |z| < L)."""
    def F(v, c):
        # antiderivative of (1/v^2)(1 - c/sqrt(v^2+c^2)) for c > 0
        return -1.0 / v + np.sqrt(v * v + c * c) / (c * v)
    # full strips in the first coordinate
    total = 2.0 / (L - z[..., 0]) + 2.0 / (L + z[..., 0])
    # middle strips: v1 in [z1-L, z1+L], |v2| beyond the box
    for c in (L - z[..., 1], L + z[..., 1]):
        total = total + (F(z[..., 0] + L, c) - F(z[..., 0] - L, c))
    return total


def psi_boundary(x, d=1, tol=1e-9):
    """Boundary interpolation profile, the y -> 0 limit of p_0 / h.

    Equals sin^2(pi x)/(pi x)^2 for d=1 and the ratio
    |x|^-(d+1) / sum_m |x-m|^-(d+1) in general; takes the delta values on
    the lattice itself.
    """
    x = _points(x, d)
    r = np.sqrt(np.sum(x * x, axis=-1))
    near = np.round(x)
    dist_near = np.sqrt(np.sum((x - near) ** 2, axis=-1))
    on_lattice = dist_near == 0.0
    if d == 1:
        t = pi * x[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t == 0.0, 1.0, np.sin(t) ** 2 / t ** 2)
        return out if out.ndim else float(out)

    z = x - near
    if d == 2:
        R = max(int(np.ceil((1.0 / (6 * tol)) ** (1 / 3))), 6)
        denom = _inv_dist_sum(z, R, d) + _inv_cube_complement_2d(z, R + 0.5)
    else:
        R = 60
        denom = _inv_dist_sum(z, R, d)
        denom = denom + 2 * pi ** (d / 2) / gamma(d / 2) / (R + 0.5)
    # on the lattice both numerator and denominator blow up; the limit is
    # the Kronecker delta at the origin
    with np.errstate(divide="ignore", invalid="ignore"):
        num = r ** (-(d + 1.0))
        out = np.where(on_lattice, np.where(r == 0.0, 1.0, 0.0), num / denom)
    return out if out.ndim else float(out)


def harmonic_extension(f, x, y, ev):
    """h-harmonic extension u_f(x, y) = sum_n f(n) p_n(x, y) / h(x, y).

    ``f`` maps lattice points (tuples of ints) to reals.
    """
    x = _points(x, ev.d)
    y = np.asarray(y, dtype=float)
    h = ev.h(x, y)
    acc = np.zeros(np.broadcast_shapes(x[..., 0].shape, y.shape))
    for n, fn in f.items():
        acc = acc + fn * poisson_p(x, y, n=np.asarray(n, dtype=float), d=ev.d)
    out = acc / h
    return out if np.ndim(out) else float(out)
