"""Translation between the Love-wave medium and the Schrodinger/Robin problem.

A depth profile of the density-normalized shear modulus, together with an
angular frequency, determines a compactly supported potential on the
half-line and a Robin boundary coefficient.  Conversely, potentials obtained
at two distinct frequencies determine the shear modulus pointwise.

Depth is measured downward: profiles are stored on an increasing grid
``x >= 0`` (the surface sits at ``x = 0``), the flip from upward-pointing
physical coordinates is applied at ingestion.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, IngestionError, ResolutionError, SingularRecoveryError
from .quadrature import derivative_uniform, second_derivative_uniform, _trapz

_TAIL_TOL = 1e-9


def _check_uniform_grid(grid_x):
    grid_x = np.asarray(grid_x, dtype=float)
    if grid_x.ndim != 1 or grid_x.size < 2:
        raise ResolutionError("grid must be a 1-D array with at least two points")
    steps = np.diff(grid_x)
    if np.any(steps <= 0):
        raise ResolutionError("grid must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-8, atol=0.0):
        raise ResolutionError("grid must be uniform")
    return grid_x, float(steps[0])


@dataclass(frozen=True)
class ShearProfile:
    """Depth-sampled density-normalized shear modulus with homogeneous tail.

    Attributes
    ----------
    grid_x : ndarray
        Ascending uniform samples in [0, x_max].
    mu_hat : ndarray
        Positive values of the shear modulus at `grid_x` (velocity^2 units).
    mu_hat_tail : float
        Constant value taken below the support depth.
    x_support : float
        Depth below which the medium is homogeneous.
    """

    grid_x: np.ndarray
    mu_hat: np.ndarray
    mu_hat_tail: float
    x_support: float

    def __post_init__(self):
        grid, _ = _check_uniform_grid(self.grid_x)
        mu = np.asarray(self.mu_hat, dtype=float)
        if mu.shape != grid.shape:
            raise ResolutionError("mu_hat and grid_x must have matching shapes")
        object.__setattr__(self, "grid_x", grid)
        object.__setattr__(self, "mu_hat", mu)
        if np.any(mu <= 0.0):
            raise DomainError("shear modulus must be positive at every sample")
        if self.mu_hat_tail <= 0.0:
            raise DomainError("tail shear modulus must be positive")
        if self.x_support <= 0.0:
            raise DomainError("support depth must be positive")
        tail = grid > self.x_support + 1e-12
        if np.any(np.abs(mu[tail] - self.mu_hat_tail) > _TAIL_TOL * max(1.0, self.mu_hat_tail)):
            raise IngestionError("profile is not homogeneous below its support depth")

    @property
    def dx(self):
        return float(self.grid_x[1] - self.grid_x[0])


@dataclass(frozen=True)
class PotentialGrid:
    """Compactly supported potential (and its derivative) on a uniform grid."""

    grid_x: np.ndarray
    v: np.ndarray
    v_prime: np.ndarray
    x_support: float

    def __post_init__(self):
        grid, _ = _check_uniform_grid(self.grid_x)
        v = np.asarray(self.v, dtype=float)
        vp = np.asarray(self.v_prime, dtype=float)
        if v.shape != grid.shape or vp.shape != grid.shape:
            raise ResolutionError("v, v_prime and grid_x must have matching shapes")
        object.__setattr__(self, "grid_x", grid)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "v_prime", vp)
        if self.x_support <= 0.0:
            raise DomainError("support bound must be positive")
        tail = grid > self.x_support + 1e-12
        if np.any(v[tail] != 0.0) or np.any(vp[tail] != 0.0):
            raise IngestionError("potential must vanish beyond its support bound")

    @property
    def dx(self):
        return float(self.grid_x[1] - self.grid_x[0])

    def norm_l1(self):
        """Discrete L1 norm of the potential."""
        return float(_trapz(np.abs(self.v), x=self.grid_x))


@dataclass(frozen=True)
class MediumConfig:
    """Frequency / horizontal-wavenumber state of a Love-wave experiment."""

    omega: float
    xi_norm: float
    mu_hat_tail: float = 1.0


def quasi_momentum(cfg: MediumConfig) -> complex:
    """Spectral parameter k = sqrt(omega^2 / mu_tail - |xi|^2), principal branch.

    A negative radicand yields a positive-imaginary k.
    """
    radicand = cfg.omega**2 / cfg.mu_hat_tail - cfg.xi_norm**2
    return complex(np.sqrt(complex(radicand)))


def schrodinger_from_love(profile: ShearProfile, omega: float):
    """Convert a shear profile at frequency `omega` to (potential, Robin h).

    The potential is
        V = (sqrt(mu))'' / sqrt(mu) - omega^2 / mu + omega^2 / mu_tail
    and the boundary coefficient is h = -mu'(0) / (2 mu(0)).  Derivatives are
    taken by 4th-order finite differences on the profile grid (2nd-order
    one-sided at the two boundary points), so the map is purely local and its
    discretization error stays far below the inverse-solver tolerances.

    Returns
    -------
    (PotentialGrid, float)
    """
    if profile.grid_x.size < 5:
        raise ResolutionError("need at least 5 grid points for stable second differences")
    x = profile.grid_x
    dx = profile.dx
    root = np.sqrt(profile.mu_hat)
    root_dd = second_derivative_uniform(root, dx)
    v = root_dd / root - omega**2 / profile.mu_hat + omega**2 / profile.mu_hat_tail
    # the tail is exactly homogeneous, so clamp roundoff there to preserve support
    v[x > profile.x_support + 1e-12] = 0.0
    v_prime = derivative_uniform(v, dx)
    v_prime[x > profile.x_support + 1e-12] = 0.0
    mu_prime_0 = (-3.0 * profile.mu_hat[0] + 4.0 * profile.mu_hat[1] - profile.mu_hat[2]) / (2.0 * dx)
    h = -0.5 * mu_prime_0 / profile.mu_hat[0]
    return PotentialGrid(grid_x=x, v=v, v_prime=v_prime, x_support=profile.x_support), float(h)


def shear_from_two_potentials(v1: PotentialGrid, v2: PotentialGrid,
                              omega1: float, omega2: float,
                              mu_hat_tail: float,
                              singular_tol: float = 1e-10) -> ShearProfile:
    """Recover the shear modulus from potentials at two distinct frequencies.

        mu(x) = mu_tail (w1 - w2) / (w1 - w2 - mu_tail (V_w1(x) - V_w2(x))),
        w_i = omega_i^2.

    The derivative terms of the two potentials cancel exactly, so the
    recovery is algebraic once both potentials share a grid.
    """
    if omega1 == omega2:
        raise ConfigurationError("shear recovery requires two distinct frequencies")
    if v1.grid_x.shape != v2.grid_x.shape or not np.allclose(v1.grid_x, v2.grid_x):
        raise ResolutionError("potentials must share their grid")
    if abs(v1.x_support - v2.x_support) > 1e-12:
        raise ResolutionError("potentials must share their support bound")
    dw = omega1**2 - omega2**2
    denom = dw - mu_hat_tail * (v1.v - v2.v)
    bad = np.abs(denom) <= singular_tol * abs(dw)
    if np.any(bad):
        x_bad = float(v1.grid_x[np.argmax(bad)])
        raise SingularRecoveryError(
            f"shear recovery denominator vanished near x = {x_bad:.6g}", x=x_bad)
    mu = mu_hat_tail * dw / denom
    mu[v1.grid_x > v1.x_support + 1e-12] = mu_hat_tail
    return ShearProfile(grid_x=v1.grid_x, mu_hat=mu,
                        mu_hat_tail=mu_hat_tail, x_support=v1.x_support)


# ---------------------------------------------------------------------------
# file formats: CSV tables with a JSON sidecar holding the scalar metadata
# ---------------------------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def write_profile(profile: ShearProfile, csv_path, sidecar_path):
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "mu_hat"])
        for x, m in zip(profile.grid_x, profile.mu_hat):
            writer.writerow([_fmt(x), _fmt(m)])
    with open(sidecar_path, "w") as fh:
        json.dump({"mu_hat_tail": profile.mu_hat_tail, "x_support": profile.x_support},
                  fh, indent=2)
        fh.write("\n")


def read_profile(csv_path, sidecar_path) -> ShearProfile:
    try:
        with open(sidecar_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read profile sidecar: {exc}") from exc
    for key in ("mu_hat_tail", "x_support"):
        if key not in meta:
            raise IngestionError(f"profile sidecar missing field '{key}'")
    data = _read_csv(csv_path, ["x", "mu_hat"])
    return ShearProfile(grid_x=data["x"], mu_hat=data["mu_hat"],
                        mu_hat_tail=float(meta["mu_hat_tail"]),
                        x_support=float(meta["x_support"]))


def write_potential(pot: PotentialGrid, h: float, csv_path, sidecar_path):
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "v", "v_prime"])
        for x, v, vp in zip(pot.grid_x, pot.v, pot.v_prime):
            writer.writerow([_fmt(x), _fmt(v), _fmt(vp)])
    with open(sidecar_path, "w") as fh:
        json.dump({"h": h, "x_support": pot.x_support}, fh, indent=2)
        fh.write("\n")


def read_potential(csv_path, sidecar_path):
    try:
        with open(sidecar_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read potential sidecar: {exc}") from exc
    for key in ("h", "x_support"):
        if key not in meta:
            raise IngestionError(f"potential sidecar missing field '{key}'")
    data = _read_csv(csv_path, ["x", "v", "v_prime"])
    pot = PotentialGrid(grid_x=data["x"], v=data["v"], v_prime=data["v_prime"],
                        x_support=float(meta["x_support"]))
    return pot, float(meta["h"])


def _read_csv(path, expected_columns):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [row for row in reader if row]
    except (OSError, StopIteration) as exc:
        raise IngestionError(f"cannot read table {path}: {exc}") from exc
    if header != expected_columns:
        raise IngestionError(f"expected columns {expected_columns}, found {header}")
    cols = np.array(rows, dtype=float).T
    return {name: cols[i] for i, name in enumerate(expected_columns)}
