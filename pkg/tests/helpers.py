"""Shared generators for seeded random sweeps."""

import numpy as np
import scipy.integrate

from fpopt import Covariance, make_pair


def random_spd(rng, dim, shift=0.5):
    g = rng.normal(size=(dim, dim))
    return g @ g.T + shift * np.eye(dim)


def random_covariance(rng, dim, shift=0.5):
    return Covariance(random_spd(rng, dim, shift))


def random_admissible_pair(rng, cov):
    """Random member of the admissible set: PSD diffusion within the trace
    budget plus an antisymmetric skew part."""
    d = cov.dim
    g = rng.normal(size=(d, d))
    diffusion = g @ g.T
    diffusion *= rng.uniform(0.2, 1.0) * d / np.trace(diffusion)
    r = rng.normal(size=(d, d))
    skew = 0.5 * (r - r.T)
    return make_pair(cov, diffusion, skew)


def random_stable(rng, dim, margin=0.5):
    """Random matrix with spectrum shifted into the open right half-plane."""
    a = rng.normal(size=(dim, dim))
    gap = np.min(np.real(np.linalg.eigvals(a)))
    return a + (margin - min(gap, 0.0)) * np.eye(dim)


def integrate_flow(schedule, t, rtol=1e-12, atol=1e-14):
    """Independent oracle for T(t, 0): adaptive Runge-Kutta integration of
    dx/dt = -whitened_drift(t) x, columnwise, split at the breakpoints."""
    d = schedule.dim
    bounds = list(schedule.switch_times) + [np.inf]
    cols = []
    for j in range(d):
        x = np.eye(d)[:, j]
        start = 0.0
        for pair, end in zip(schedule.pairs, bounds):
            hi = min(t, end)
            if hi > start:
                sol = scipy.integrate.solve_ivp(
                    lambda s, y, m=pair.whitened_drift: -(m @ y),
                    (start, hi), x, method="DOP853", rtol=rtol, atol=atol)
                assert sol.success
                x = sol.y[:, -1]
            if end >= t:
                break
            start = end
        cols.append(x)
    return np.column_stack(cols)
