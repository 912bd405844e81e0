"""Quadrature and finite-difference kernels used across the solvers.

Everything here operates on uniform grids.  The oscillatory pieces follow
the classical Filon construction for integrals of the form
``int f(k) cos(u k) dk`` whose accuracy does not degrade as ``u`` grows;
slowly decaying tails are finished analytically with sine/cosine integrals.
"""

from __future__ import annotations

import numpy as np
from scipy.special import sici

from .errors import ResolutionError

_SMALL = 1e-4
_trapz = getattr(np, "trapezoid", None) or np.trapz


def sinc_scaled(z):
    """sin(z)/z, stable near z = 0 (complex-safe, vectorized)."""
    z = np.asarray(z)
    small = np.abs(z) < _SMALL
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0 - z * z / 6.0 + z**4 / 120.0, np.sin(zs) / zs)


def kahan_sum(terms, axis=0):
    """Compensated (Kahan-Babuska/Neumaier) summation along `axis`.

    Used where large cancelling contributions (growing pole terms against
    oscillatory integrals) are combined into an O(1) result.
    """
    terms = np.moveaxis(np.asarray(terms, dtype=float), axis, 0)
    total = np.zeros(terms.shape[1:])
    comp = np.zeros_like(total)
    for t in terms:
        s = total + t
        comp += np.where(np.abs(total) >= np.abs(t),
                         (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def corrected_trapezoid(f, h):
    """Trapezoid rule with Euler-Maclaurin endpoint correction, O(h^4).

    `f` holds samples on a uniform grid of spacing `h`; integration is over
    the whole sample range.  Works along the last axis.
    """
    f = np.asarray(f)
    n = f.shape[-1] - 1
    if n < 1:
        return np.zeros(f.shape[:-1], dtype=f.dtype)
    base = _trapz(f, dx=h, axis=-1)
    if n < 4:
        return base
    da = (-3.0 * f[..., 0] + 4.0 * f[..., 1] - f[..., 2]) / (2.0 * h)
    db = (3.0 * f[..., -1] - 4.0 * f[..., -2] + f[..., -3]) / (2.0 * h)
    return base - h * h / 12.0 * (db - da)


def composite_simpson_weights(n_intervals):
    """Quadrature weights (unit spacing) for n_intervals+1 uniform nodes.

    Composite Simpson; an odd interval count is finished with a 3/8 block,
    keeping O(h^4) accuracy.  n_intervals == 1 falls back to trapezoid.
    """
    n = int(n_intervals)
    if n < 0:
        raise ResolutionError("negative interval count")
    w = np.zeros(n + 1)
    if n == 0:
        return w
    if n == 1:
        w[:] = [0.5, 0.5]
        return w
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / 3.0
        w[1:n:2] = 4.0 / 3.0
        w[2:n:2] += 2.0 / 3.0
    else:
        m = n - 3
        wm = composite_simpson_weights(m)
        w[: m + 1] += wm
        w[m:] += np.array([3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0])
    return w


def split_simpson_weights(i_break, n_intervals):
    """Weights for int_0^{x_n} split at node i_break (unit spacing).

    The integrand may have a kink (or jump support edge) at the breakpoint;
    each sub-range gets its own composite Simpson rule.
    """
    n = int(n_intervals)
    i = int(i_break)
    if not 0 <= i <= n:
        raise ResolutionError("breakpoint outside the grid")
    w = np.zeros(n + 1)
    w[: i + 1] += composite_simpson_weights(i)
    w[i:] += composite_simpson_weights(n - i)
    return w


def _filon_coefficients(theta):
    """Filon alpha/beta/gamma with series branch for small theta."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.05
    t = np.where(small, 1.0, theta)
    s, c = np.sin(t), np.cos(t)
    t2 = t * t
    it3 = 1.0 / (t2 * t)
    alpha = it3 * (t2 + t * s * c - 2.0 * s * s)
    beta = 2.0 * it3 * (t * (1.0 + c * c) - 2.0 * s * c)
    gamma = 4.0 * it3 * (s - t * c)
    th = np.where(small, theta, 0.0)
    th2 = th * th
    alpha_s = th * th2 * (2.0 / 45.0 - th2 / 157.5 + th2 * th2 / 2362.5)
    beta_s = 2.0 / 3.0 + th2 * (2.0 / 15.0 - th2 * (4.0 / 105.0 - th2 / 283.5))
    gamma_s = 4.0 / 3.0 - th2 * (2.0 / 15.0 - th2 * (1.0 / 210.0 - th2 / 11340.0))
    return (np.where(small, alpha_s, alpha),
            np.where(small, beta_s, beta),
            np.where(small, gamma_s, gamma))


def filon_cos(f, k0, dk, u):
    """int_{k0}^{k0+n*dk} f(k) cos(u k) dk by Filon's method.

    Parameters
    ----------
    f : array, shape (n+1,)
        Samples on the uniform grid k0, k0+dk, ...; n must be even.
    u : array_like
        Oscillation parameters; the quadrature error is uniform in u.

    Returns
    -------
    array of shape u.shape
    """
    f = np.asarray(f, dtype=float)
    n = f.size - 1
    if n < 2 or n % 2 != 0:
        raise ResolutionError("Filon rule needs an even, positive panel count")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    k = k0 + dk * np.arange(n + 1)
    theta = u * dk
    alpha, beta, gamma = _filon_coefficients(theta)

    uk = np.outer(u, k)
    cos_uk = np.cos(uk)
    sin_end = np.sin(uk[:, -1])
    sin_start = np.sin(uk[:, 0])

    even = cos_uk[:, 0::2] @ f[0::2] - 0.5 * (cos_uk[:, -1] * f[-1] + cos_uk[:, 0] * f[0])
    odd = cos_uk[:, 1::2] @ f[1::2]
    out = dk * (alpha * (f[-1] * sin_end - f[0] * sin_start) + beta * even + gamma * odd)
    return out


def cos_tail_over_k2(a, u):
    """int_a^infty cos(u k) / k^2 dk for a > 0, u >= 0 (vectorized in u)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    si, _ = sici(a * u)
    return np.cos(a * u) / a - u * (np.pi / 2.0 - si)


def cauchy_tail(lam, a):
    """int_a^infty dt / (lam - t^2) for complex lam off [0, infinity)."""
    beta = np.sqrt(-complex(lam))
    if beta.real < 0:
        beta = -beta
    return -(np.pi / 2.0 - np.arctan(a / beta)) / beta


def derivative_uniform(f, h, order=4):
    """First derivative on a uniform grid; 4th-order central stencils.

    Endpoints use one-sided stencils of the same order.  Works along the
    last axis; complex input allowed.
    """
    f = np.asarray(f)
    n = f.shape[-1]
    if n < 5:
        raise ResolutionError("need at least 5 samples for the 4th-order stencil")
    d = np.empty_like(f, dtype=np.result_type(f.dtype, np.float64))
    d[..., 2:-2] = (f[..., :-4] - 8 * f[..., 1:-3] + 8 * f[..., 3:-1] - f[..., 4:]) / (12 * h)
    d[..., 0] = (-25 * f[..., 0] + 48 * f[..., 1] - 36 * f[..., 2]
                 + 16 * f[..., 3] - 3 * f[..., 4]) / (12 * h)
    d[..., 1] = (-3 * f[..., 0] - 10 * f[..., 1] + 18 * f[..., 2]
                 - 6 * f[..., 3] + f[..., 4]) / (12 * h)
    d[..., -2] = (3 * f[..., -1] + 10 * f[..., -2] - 18 * f[..., -3]
                  + 6 * f[..., -4] - f[..., -5]) / (12 * h)
    d[..., -1] = (25 * f[..., -1] - 48 * f[..., -2] + 36 * f[..., -3]
                  - 16 * f[..., -4] + 3 * f[..., -5]) / (12 * h)
    return d


def second_derivative_uniform(f, h):
    """Second derivative: 4th-order central inside, 2nd-order one-sided at the ends."""
    f = np.asarray(f)
    n = f.shape[-1]
    if n < 5:
        raise ResolutionError("need at least 5 samples for the 4th-order stencil")
    d = np.empty_like(f, dtype=np.result_type(f.dtype, np.float64))
    h2 = h * h
    d[..., 2:-2] = (-f[..., :-4] + 16 * f[..., 1:-3] - 30 * f[..., 2:-2]
                    + 16 * f[..., 3:-1] - f[..., 4:]) / (12 * h2)
    d[..., 1] = (f[..., 0] - 2 * f[..., 1] + f[..., 2]) / h2
    d[..., -2] = (f[..., -3] - 2 * f[..., -2] + f[..., -1]) / h2
    d[..., 0] = (2 * f[..., 0] - 5 * f[..., 1] + 4 * f[..., 2] - f[..., 3]) / h2
    d[..., -1] = (2 * f[..., -1] - 5 * f[..., -2] + 4 * f[..., -3] - f[..., -4]) / h2
    return d
