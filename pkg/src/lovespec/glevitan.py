"""Gelfand-Levitan reconstruction: from Weyl data to the potential.

The input kernel combines a Fourier-cosine transform of the reduced cut
data w(k) = k T(k^2) - 1/pi with hyperbolic-cosine pole terms,

    g(x,y) = C(|x-y|) + C(x+y) + sum_j alpha_j cosh(t_j x) cosh(t_j y),
    C(u)   = int_0^inf w(k) cos(k u) dk,

which is the half-line reduction of the full oscillatory kernel integral.
The linear integral equation

    K(x,y) - g(x,y) + int_0^x K(x,s) g(s,y) ds = 0,     0 <= y <= x,

is solved row by row with a Nystrom discretization; the potential and the
boundary coefficient follow from the diagonal: V = -2 dK(x,x)/dx,
h = K(0,0).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve
from scipy.interpolate import CubicSpline

from .errors import (
    ConfigurationError,
    ExtractionError,
    PoleError,
    QuadratureResolutionError,
    ResolutionError,
    SolvabilityError,
)
from .medium import PotentialGrid
from .quadrature import (
    _trapz,
    composite_simpson_weights,
    cos_tail_over_k2,
    corrected_trapezoid,
    derivative_uniform,
    filon_cos,
    kahan_sum,
    split_simpson_weights,
)
from .spectrum import JumpSource, WeylEvaluator


@dataclass(frozen=True)
class WeylData:
    """Everything the inverse solver consumes.

    jump : JumpSource
        Reduced cut data w(k) on [0, k_cutoff] plus fitted 1/k^2 tail.
    pole_k, pole_alpha : eigenvalues k_j = i tau_j and their norming constants.
    j_eval : optional evaluator of j(k) = M(lambda) - 1/(ik) away from the
        real axis (used by cross-checking code paths, not by build_g).
    """

    jump: JumpSource
    pole_k: np.ndarray
    pole_alpha: np.ndarray
    j_eval: object = None

    def __post_init__(self):
        object.__setattr__(self, "pole_k", np.asarray(self.pole_k, dtype=complex))
        object.__setattr__(self, "pole_alpha", np.asarray(self.pole_alpha, dtype=float))
        if self.pole_k.size != self.pole_alpha.size:
            raise ConfigurationError("one norming constant per pole required")
        if np.any(self.pole_alpha <= 0):
            raise ConfigurationError("norming constants must be positive")
        if self.pole_k.size and np.any(np.abs(self.pole_k.real) > 1e-8):
            raise ConfigurationError("poles must sit on the imaginary axis")

    @property
    def k_cutoff(self):
        return self.jump.k_cutoff

    @property
    def tail_coefficient(self):
        return self.jump.tail_coefficient


def j_function(m: WeylEvaluator, k) -> complex:
    """j(k) = M(k^2) - 1/(ik) on the physical branch (sign of real k selects
    the one-sided boundary value)."""
    k = complex(k)
    if k == 0:
        raise PoleError("j is undefined at k = 0")
    return m.at_k(k) - 1.0 / (1j * k)


@dataclass(frozen=True)
class Kernel2D:
    """Symmetric-in-construction kernel tabulated on the lower triangle y <= x.

    kind 'g' kernels built from cut data are even in each argument, so
    evaluation extends across the diagonal symmetrically.  A synthetic kernel
    may instead be flagged triangular=True, meaning g(s, y) = 0 for s < y
    (the value table is taken literally).
    """

    grid_x: np.ndarray
    values: np.ndarray
    kind: str
    triangular: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        n = self.grid_x.size
        if v.shape != (n, n):
            raise ResolutionError("kernel table must be square on its grid")

    @property
    def dx(self):
        return float(self.grid_x[1] - self.grid_x[0])

    def dense(self, upto: int | None = None):
        """Full table g(first_index, second_index) honoring the evaluation mode."""
        m = self.grid_x.size if upto is None else upto + 1
        block = self.values[:m, :m]
        lower = np.tril(block)
        if self.triangular:
            return lower
        return lower + np.triu(lower.T, 1)

    def diag(self):
        return np.diagonal(self.values).copy()

    def to_csv(self, path):
        """Dump the stored triangle as x,y,value rows (debugging aid)."""
        with open(path, "w") as fh:
            fh.write("x,y,value\n")
            for i, x in enumerate(self.grid_x):
                for j in range(i + 1):
                    fh.write(f"{x:.17g},{self.grid_x[j]:.17g},"
                             f"{self.values[i, j]:.17g}\n")


def _pole_terms(pole_k, pole_alpha, x):
    """Stack of alpha_j cosh(tau_j x) cosh(tau_j y) tables."""
    taus = np.abs(np.asarray(pole_k, dtype=complex).imag)
    cosh_tx = np.cosh(np.outer(taus, x))
    return pole_alpha[:, None, None] * cosh_tx[:, :, None] * cosh_tx[:, None, :]


def build_g(w: WeylData, grid, filon_refine: int = 2,
            tail_tol: float = 1e-6) -> Kernel2D:
    """Assemble the input kernel g on a uniform grid.

    The cosine transform C(u) is evaluated by Filon quadrature on the sampled
    cut data (spline-refined `filon_refine` times for panel accuracy) plus the
    analytic 1/k^2 tail; pole terms are added with compensated summation since
    they grow like cosh while g itself stays O(1) + poles.
    """
    grid = np.asarray(grid, dtype=float)
    steps = np.diff(grid)
    if grid.size < 2 or np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-8):
        raise ResolutionError("build_g needs a uniform, increasing grid")
    if abs(grid[0]) > 1e-12:
        raise ResolutionError("the kernel grid must start at x = 0")
    kc = w.k_cutoff
    c_t = w.tail_coefficient
    # gross resolution check: by the cutoff the cut data must have entered its
    # 1/k^2 regime (oscillatory remainders of that size are fine and cancel)
    w_end = float(w.jump.w(np.array([kc]))[0])
    if abs(w_end) * kc**2 > 10.0 * (1.0 + abs(c_t)) + tail_tol:
        raise QuadratureResolutionError(
            f"cut data not in its tail regime at k = {kc}: |w| k^2 = {abs(w_end) * kc**2:.2e}")

    if hasattr(w.jump, "sample_k"):
        k_nodes = w.jump.sample_k
        w_nodes = w.jump.sample_w
        if filon_refine > 1:
            spline = CubicSpline(k_nodes, w_nodes)
            n_fine = (k_nodes.size - 1) * filon_refine
            k_nodes = np.linspace(k_nodes[0], k_nodes[-1], n_fine + 1)
            w_nodes = spline(k_nodes)
    else:
        n_fine = int(round(kc / 0.0125))
        k_nodes = np.linspace(0.0, kc, n_fine + (n_fine % 2) + 1)
        w_nodes = w.jump.w(k_nodes)
    if (k_nodes.size - 1) % 2 != 0:
        k_nodes = k_nodes[:-1]
        w_nodes = w_nodes[:-1]

    u = np.arange(2 * grid.size - 1) * float(steps[0])
    c_of_u = filon_cos(w_nodes, float(k_nodes[0]), float(k_nodes[1] - k_nodes[0]), u)
    c_of_u += c_t * cos_tail_over_k2(kc, u)

    n = grid.size
    idx = np.arange(n)
    diff = np.abs(idx[:, None] - idx[None, :])
    summ = idx[:, None] + idx[None, :]
    terms = [c_of_u[diff], c_of_u[summ]]
    if w.pole_k.size:
        terms.extend(_pole_terms(w.pole_k, w.pole_alpha, grid))
    table = kahan_sum(np.stack(terms), axis=0)
    return Kernel2D(grid_x=grid, values=np.tril(table), kind="g")


def check_solvability(g: Kernel2D, x: float) -> float:
    """int_0^x sup_{0<=s<=t} |g(t,s)| dt, the unique-solvability functional."""
    i = _grid_index(g.grid_x, x)
    dense = g.dense(upto=i)
    sup_row = np.max(np.abs(np.tril(dense)), axis=1)
    return float(_trapz(sup_row, dx=g.dx))


def _grid_index(grid, x):
    i = int(round((x - grid[0]) / (grid[1] - grid[0])))
    if not (0 <= i < grid.size) or abs(grid[i] - x) > 1e-9 * max(1.0, abs(x)):
        raise ResolutionError(f"x = {x} is not a node of the kernel grid")
    return i


@dataclass(frozen=True)
class GLRow:
    """One solved row K(x, .) of the transformation kernel."""

    x: float
    grid_y: np.ndarray
    values: np.ndarray
    residual: float
    condition: float


def solve_gl(g: Kernel2D, x: float, cond_limit: float = 1e12) -> GLRow:
    """Solve K(x,y) - g(x,y) + int_0^x K(x,s) g(s,y) ds = 0 for one row.

    Nystrom discretization on the kernel grid restricted to [0, x]; the
    quadrature for the y-th collocation row is split at s = y, where either
    the kernel's derivative (symmetric mode) or its support (triangular mode)
    breaks.  Dense LU with a reciprocal-condition estimate.
    """
    i = _grid_index(g.grid_x, x)
    m = i + 1
    if m == 1:
        val = g.values[0, 0]
        return GLRow(x=x, grid_y=g.grid_x[:1], values=np.array([val]),
                     residual=0.0, condition=1.0)
    dense = g.dense(upto=i)
    h = g.dx
    # equation at y_r: u(y_r) + sum_j Q_rj u(s_j) = g(x, y_r)
    q_mat = np.zeros((m, m))
    if g.triangular:
        # the integrand vanishes identically on [0, y): quadrature lives on
        # [y, x] alone, so the breakpoint node carries no left weight
        for row in range(m):
            n_int = m - 1 - row
            if n_int == 0:
                continue
            if n_int == 1 and row >= 2:
                # single panel: interpolate the (smooth) unknown through the
                # breakpoint with Adams-Moulton weights, kernel linearized
                g_rr = dense[row, row]
                gamma = (dense[row + 1, row] - g_rr) / h
                mom0 = np.array([1.0, -5.0, 19.0, 9.0]) * (h / 24.0)
                mom1 = np.array([1.0 / 45.0, -13.0 / 120.0, 19.0 / 60.0,
                                 97.0 / 360.0]) * h * h
                q_mat[row, row - 2 : row + 2] += g_rr * mom0 + gamma * mom1
            else:
                w = composite_simpson_weights(n_int) * h
                q_mat[row, row:] = w * dense[row:, row]
    else:
        for row in range(m):
            w = split_simpson_weights(row, m - 1) * h
            q_mat[row] = w * dense[:, row]
    a_mat = np.eye(m) + q_mat
    rhs = dense[i, :].copy()
    try:
        lu, piv = lu_factor(a_mat)
    except np.linalg.LinAlgError as exc:
        raise SolvabilityError("Gelfand-Levitan system is singular", condition=np.inf) from exc
    sol = lu_solve((lu, piv), rhs)
    gecon = get_lapack_funcs("gecon", (a_mat,))
    rcond, _ = gecon(lu, np.linalg.norm(a_mat, 1))
    cond = 1.0 / max(rcond, 1e-300)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SolvabilityError(
            f"Gelfand-Levitan system ill-conditioned (cond ~ {cond:.2e})", condition=cond)
    residual = float(np.max(np.abs(a_mat @ sol - rhs)))
    return GLRow(x=x, grid_y=g.grid_x[:m], values=sol, residual=residual,
                 condition=float(cond))


def solve_gl_diagonal(g: Kernel2D, threads: int = 1, keep_rows: bool = False):
    """K(x,x) for every grid node; optionally the full row table.

    Rows are independent linear solves and may run in a thread pool; results
    are assembled by index so the output does not depend on scheduling.
    """
    n = g.grid_x.size
    diag = np.empty(n)
    rows: list[GLRow | None] = [None] * n

    def work(i):
        row = solve_gl(g, float(g.grid_x[i]))
        return i, row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, row in pool.map(work, range(n)):
                diag[i] = row.values[-1]
                if keep_rows:
                    rows[i] = row
    else:
        for i in range(n):
            _, row = work(i)
            diag[i] = row.values[-1]
            if keep_rows:
                rows[i] = row
    max_resid = 0.0
    if keep_rows:
        max_resid = max(r.residual for r in rows if r is not None)
        table = np.zeros((n, n))
        for i, r in enumerate(rows):
            table[i, : i + 1] = r.values
        kernel = Kernel2D(grid_x=g.grid_x, values=table, kind="K")
        return diag, kernel, max_resid
    return diag


def kernel_direct(w: WeylData, phi, x: float, y: float) -> float:
    """Transformation kernel from its direct integral formula (oracle path).

    K(x,y) = 2 int_0^inf w(k) phi(x,k) cos(ky) dk + sum_j alpha_j phi(x,k_j)
    cosh(tau_j y), the half-line reduction of the defining integral.  `phi`
    maps (x, k-array) to regular-solution values and requires the potential,
    so this route cross-checks solve_gl rather than replacing it.
    """
    if not hasattr(w.jump, "sample_k"):
        raise ConfigurationError("kernel_direct needs sampled cut data")
    k_nodes = w.jump.sample_k
    w_nodes = w.jump.sample_w
    if (k_nodes.size - 1) % 2 != 0:
        k_nodes, w_nodes = k_nodes[:-1], w_nodes[:-1]
    dk = float(k_nodes[1] - k_nodes[0])
    phi_k = np.asarray(phi(x, k_nodes.astype(complex)))
    if np.max(np.abs(phi_k.imag)) > 1e-6 * np.max(np.abs(phi_k) + 1.0):
        raise ConfigurationError("regular solution must be real on the real k-axis")
    phi_k = phi_k.real
    # split phi = cos(kx) + rho: the cos part pairs into Filon integrals with
    # u = |x -+ y|; the remainder decays like 1/k and is integrated directly
    cos_part = filon_cos(w_nodes, 0.0, dk, np.array([abs(x - y), x + y]))
    cos_part_val = float(cos_part.sum())
    rho = phi_k - np.cos(k_nodes * x)
    integrand = 2.0 * w_nodes * rho * np.cos(k_nodes * y)
    rho_part = float(corrected_trapezoid(integrand, dk))
    tail = float(w.tail_coefficient
                 * (cos_tail_over_k2(w.k_cutoff, np.array([abs(x - y)]))[0]
                    + cos_tail_over_k2(w.k_cutoff, np.array([x + y]))[0]))
    pole_part = 0.0
    if w.pole_k.size:
        taus = np.abs(w.pole_k.imag)
        phi_j = np.array([phi(x, np.array([kj], dtype=complex))[0].real
                          for kj in w.pole_k])
        pole_part = float(np.sum(w.pole_alpha * phi_j * np.cosh(taus * y)))
    return cos_part_val + tail + rho_part + pole_part


def extract_potential(k_diag, grid, x_support,
                      consistency_tol=5e-3, clamp_tail=True):
    """Potential and boundary coefficient from the kernel diagonal.

    V = -2 d/dx K(x,x) by 4th-order differences, h = K(0,0).  The integrated
    identity int_0^x V dt - 2h + 2 K(x,x) = 0 is re-checked with the
    trapezoid rule as a discretization-error monitor.
    """
    k_diag = np.asarray(k_diag, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if k_diag.shape != grid.shape:
        raise ResolutionError("diagonal and grid must share their shape")
    dx = grid[1] - grid[0]
    v = -2.0 * derivative_uniform(k_diag, dx)
    h = float(k_diag[0])
    running = np.concatenate([[0.0], np.cumsum(0.5 * dx * (v[1:] + v[:-1]))])
    defect = np.max(np.abs(running - 2.0 * h + 2.0 * k_diag))
    scale = max(1.0, float(np.max(np.abs(v))))
    if defect > consistency_tol * scale:
        raise ExtractionError(
            f"differentiated and integrated forms disagree by {defect:.2e}")
    v_out = v.copy()
    if clamp_tail:
        v_out[grid > x_support + 1e-12] = 0.0
    v_prime = derivative_uniform(v_out, dx)
    if clamp_tail:
        v_prime[grid > x_support + 1e-12] = 0.0
    pot = PotentialGrid(grid_x=grid, v=v_out, v_prime=v_prime, x_support=x_support)
    return pot, h


def regular_solution_from_kernel(kernel: Kernel2D, k: complex, x: float) -> complex:
    """phi(x,k) = cos(kx) - int_0^x K(x,t) cos(kt) dt from a solved kernel."""
    i = _grid_index(kernel.grid_x, x)
    t = kernel.grid_x[: i + 1]
    row = kernel.values[i, : i + 1]
    if i == 0:
        return complex(np.cos(k * x))
    integrand = row * np.cos(np.asarray(k, dtype=complex) * t)
    return complex(np.cos(k * x) - corrected_trapezoid(integrand, kernel.dx))
