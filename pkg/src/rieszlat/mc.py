"""Monte Carlo simulation of the conditioned background-noise process.

Simulates the diffusion with generator (1/2)Delta + (grad h / h) . grad
started at (0, w), records the lattice exit site when the height hits the
floor, and estimates projection kernels by averaging stochastic integrals
A grad u . dB along the paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poisson import (PeriodicPoissonEvaluator, periodic_h_closed_1d,
                      periodic_h_grad_closed_1d, poisson_const)


@dataclass(frozen=True)
class SdeConfig:
    """Time stepping and termination parameters for the exit simulation."""

    dt_base: float = 0.05
    y_dt_factor: float = 0.1
    y_floor: float = 1e-3
    w_start: float = 10.0
    paths: int = 10000
    seed: int = 0
    max_steps: int = 100_000
    resolve_capped: bool = True


def drift_field(d=1, evaluator=None):
    """The drift grad h / h as a callable of (x, y) batches.

    The returned gradient has d + 1 columns (x components then y).  The
    drift magnitude is bounded by d / y, which controls the step size.
    """
    if d == 1:
        def b(x, y):
            h = periodic_h_closed_1d(x[:, 0], y)
            g = periodic_h_grad_closed_1d(x[:, 0], y)
            return g / h[:, None]
        return b
    ev = evaluator or PeriodicPoissonEvaluator(d=d, tol=1e-9)

    def b(x, y):
        h = ev.h(x, y)
        g = ev.grad(x, y)
        return g / h[:, None]
    return b


def simulate_exit(cfg, d=1, record=None):
    """Run ``cfg.paths`` paths of the h-process from (0, w) to the floor.

    All paths advance in lockstep with a shared counter-based stream from
    ``numpy.random.default_rng(cfg.seed)``.  The step is
    dt = min(dt_base, 0.1 y^2), so the drift bound d/y keeps the drift
    increment below 0.1 d y per step.  At y <= y_floor the horizontal
    position is snapped to the nearest lattice point, which is the exit
    site.  Paths exceeding ``max_steps`` are stopped and counted in
    ``capped``; exit times are heavy-tailed (the process is close to free
    Brownian motion at large heights), so with ``resolve_capped`` the exit
    site of a capped path is drawn from the exit law at its current
    position, which is unbiased by the strong Markov property.  Capped
    paths sit at large heights, where that law is the rounded Cauchy
    harmonic measure to high accuracy (d = 1 only; otherwise the site is
    the nearest lattice point).

    ``record``, if given, is called as record(alive_idx, x, y, dB, dt)
    each step before the state update, enabling path functionals.

    Returns a dict with ``exits`` (paths x d int array), ``steps``,
    ``capped`` and ``final_y``.
    """
    rng = np.random.default_rng(cfg.seed)
    m = cfg.paths
    x = np.zeros((m, d))
    y = np.full(m, float(cfg.w_start))
    alive = np.arange(m)
    exits = np.zeros((m, d), dtype=int)
    steps = np.zeros(m, dtype=np.int64)
    b = drift_field(d)
    capped = 0
    it = 0
    while alive.size:
        it += 1
        ya = y[alive]
        dt = np.minimum(cfg.dt_base, cfg.y_dt_factor * ya * ya)
        drift = b(x[alive], ya)
        dB = rng.standard_normal((alive.size, d + 1)) * np.sqrt(dt)[:, None]
        if record is not None:
            record(alive, x[alive], ya, dB, dt)
        x[alive] += drift[:, :d] * dt[:, None] + dB[:, :d]
        ynew = ya + drift[:, d] * dt + dB[:, d]
        # reflect accidental non-positive heights back above the floor
        ynew = np.where(ynew <= 0.0, cfg.y_floor * 0.5, ynew)
        y[alive] = ynew
        steps[alive] += 1
        done = ynew <= cfg.y_floor
        over = steps[alive] >= cfg.max_steps
        fin = done | over
        if fin.any():
            idx = alive[fin]
            exits[idx] = np.rint(x[idx]).astype(int)
            cap_now = over & ~done
            if cap_now.any():
                capped += int(np.count_nonzero(cap_now))
                if cfg.resolve_capped and d == 1:
                    ci = alive[cap_now]
                    u = rng.uniform(-0.5, 0.5, ci.size)
                    c = x[ci, 0] + y[ci] * np.tan(np.pi * u)
                    exits[ci, 0] = np.rint(c).astype(int)
            alive = alive[~fin]
    return {"exits": exits, "steps": steps, "capped": capped,
            "final_y": y}


def exit_distribution(cfg, d=1):
    """Empirical exit-site counts as a dict {site: count}."""
    res = simulate_exit(cfg, d)
    out = {}
    for row in res["exits"]:
        n = tuple(int(c) for c in row)
        out[n] = out.get(n, 0) + 1
    return out, res


def estimate_projection(kind, f, cfg=None, d=1, sites=None):
    """Monte Carlo estimate of the projection kernel applied to f.

    For each path the stochastic integral sum A grad u_f(Z) . dB is
    accumulated; conditioning on the exit site n gives the matrix element
    against delta_n.  ``f`` is a dict {site: value} or a transforms
    Sequence.  Sites with fewer than 100 hits raise ValueError.

    Returns {site: (estimate, stderr, hits)}.
    """
    if cfg is None:
        cfg = SdeConfig()
    if d != 1:
        raise NotImplementedError("Monte Carlo projection implemented for d=1")
    support = f.support if hasattr(f, "support") else {
        ((k,) if np.isscalar(k) else tuple(k)): v for k, v in f.items()}
    items = [(n[0], v) for n, v in support.items()]
    A = kind.A.entries if kind.A is not None else np.array([[0., -1.],
                                                           [1., 0.]])
    c1 = poisson_const(1)
    acc = np.zeros(cfg.paths)

    def grad_u(xv, yv):
        h = periodic_h_closed_1d(xv, yv)
        gh = periodic_h_grad_closed_1d(xv, yv)
        gx = np.zeros_like(yv)
        gy = np.zeros_like(yv)
        for n, fn in items:
            z = xv - n
            q = z * z + yv * yv
            pn = c1 * yv / q
            px = -2.0 * z * pn / q
            py = (z * z - yv * yv) / (yv * q) * pn
            gx += fn * (px * h - pn * gh[..., 0]) / (h * h)
            gy += fn * (py * h - pn * gh[..., 1]) / (h * h)
        return gx, gy

    def record(idx, xs, ys, dB, dt):
        gx, gy = grad_u(xs[:, 0], ys)
        vx = A[0, 0] * gx + A[0, 1] * gy
        vy = A[1, 0] * gx + A[1, 1] * gy
        acc[idx] += vx * dB[:, 0] + vy * dB[:, 1]

    res = simulate_exit(cfg, d=1, record=record)
    exits = res["exits"][:, 0]
    explicit = sites is not None
    if sites is None:
        uniq, cnt = np.unique(exits, return_counts=True)
        sites = [int(s) for s, c in zip(uniq, cnt) if c >= 100]
    out = {}
    for n in sites:
        sel = acc[exits == n]
        if sel.size < 100:
            if explicit:
                raise ValueError(f"only {sel.size} paths exited at {n}; "
                                 "increase paths or start lower")
            continue
        out[int(n)] = (float(sel.mean()),
                       float(sel.std(ddof=1) / np.sqrt(sel.size)),
                       int(sel.size))
    return out
