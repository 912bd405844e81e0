"""Bundled analytic media and potentials used by tests, demos and docs.

Every profile keeps its inhomogeneity inside ``[0, x_support]`` with the
support edge sitting exactly on a grid node, and carries enough tail nodes
beyond the support to exercise the free-propagation invariants.
"""

from __future__ import annotations

import numpy as np

from .medium import PotentialGrid, ShearProfile


def _grid(x_max: float, n: int) -> np.ndarray:
    return np.linspace(0.0, x_max, n)


def square_well(depth: float = 4.0, width: float = 1.0,
                n: int = 2001, x_max: float | None = None) -> PotentialGrid:
    """Constant well V = -depth on [0, width]; the classic closed-form case."""
    x_max = 1.25 * width if x_max is None else x_max
    x = _grid(x_max, n)
    v = np.where(x <= width + 1e-12, -float(depth), 0.0)
    return PotentialGrid(grid_x=x, v=v, v_prime=np.zeros_like(x), x_support=width)


def free_potential(n: int = 2001, x_max: float = 1.25, x_support: float = 1.0) -> PotentialGrid:
    """Identically zero potential (degenerate reference case)."""
    x = _grid(x_max, n)
    z = np.zeros_like(x)
    return PotentialGrid(grid_x=x, v=z, v_prime=z.copy(), x_support=x_support)


def bump_potential(amplitude: float = -6.0, width: float = 0.35,
                   x_support: float = 1.0, n: int = 2001,
                   x_max: float | None = None) -> PotentialGrid:
    """C^1 bump V = amplitude * (1 - t^2)^2 with t = (x - c)/width, c = x_support - width.

    The support touches x_support, as the admissible potential class requires.
    """
    x_max = 1.25 * x_support if x_max is None else x_max
    x = _grid(x_max, n)
    c = x_support - width
    t = (x - c) / width
    inside = np.abs(t) < 1.0
    v = np.where(inside, amplitude * (1.0 - t**2) ** 2, 0.0)
    vp = np.where(inside, -4.0 * amplitude * t * (1.0 - t**2) / width, 0.0)
    return PotentialGrid(grid_x=x, v=v, v_prime=vp, x_support=x_support)


def constant_profile(mu_hat_tail: float = 1.0, x_support: float = 1.0,
                     n: int = 2001, x_max: float | None = None) -> ShearProfile:
    """Homogeneous half-space; maps to V = 0, h = 0 at any frequency."""
    x_max = 1.25 * x_support if x_max is None else x_max
    x = _grid(x_max, n)
    return ShearProfile(grid_x=x, mu_hat=np.full_like(x, mu_hat_tail),
                        mu_hat_tail=mu_hat_tail, x_support=x_support)


def _bump_log(x, strength, width, x_support):
    """C^4 log-profile s(x) = -strength * (1 - t^2)^5, support ending at x_support."""
    c = x_support - width
    t = (x - c) / width
    inside = np.abs(t) < 1.0
    return np.where(inside, -strength * (1.0 - t**2) ** 5, 0.0)


def bump_profile(strength: float = 0.25, width: float = 0.4,
                 mu_hat_tail: float = 1.0, x_support: float = 1.0,
                 n: int = 2001, x_max: float | None = None) -> ShearProfile:
    """Low-velocity channel: mu = mu_tail * exp(2 s) with a smooth dip in s.

    The dip acts as a wave guide, so the transformed problem carries trapped
    modes (eigenvalues) at moderate frequencies.
    """
    x_max = 1.25 * x_support if x_max is None else x_max
    x = _grid(x_max, n)
    s = _bump_log(x, strength, width, x_support)
    return ShearProfile(grid_x=x, mu_hat=mu_hat_tail * np.exp(2.0 * s),
                        mu_hat_tail=mu_hat_tail, x_support=x_support)


def tilted_profile(slope: float = 0.3, mu_hat_tail: float = 1.0,
                   x_support: float = 1.0, n: int = 2001,
                   x_max: float | None = None) -> ShearProfile:
    """Profile with nonzero surface gradient: s = slope * x (1 - x/x_support)^3.

    mu'(0) = 2 * slope * mu(0) > 0 for positive slope, so the Robin
    coefficient of the transformed problem is -slope.
    """
    x_max = 1.25 * x_support if x_max is None else x_max
    x = _grid(x_max, n)
    xi = np.clip(x / x_support, 0.0, 1.0)
    s = slope * x_support * xi * (1.0 - xi) ** 3
    return ShearProfile(grid_x=x, mu_hat=mu_hat_tail * np.exp(2.0 * s),
                        mu_hat_tail=mu_hat_tail, x_support=x_support)
