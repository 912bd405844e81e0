import numpy as np
import pytest
from scipy.integrate import quad

from lovespec import (
    Kernel2D,
    WeylData,
    build_g,
    check_solvability,
    direct_jost_evaluator,
    extract_potential,
    find_eigenvalues,
    forward_weyl_evaluator,
    j_function,
    jost_function_derivative,
    kernel_direct,
    norming_constants,
    regular_solution_from_kernel,
    solve_gl,
    solve_gl_diagonal,
)
from lovespec.errors import ConfigurationError, ExtractionError
from lovespec.forward import regular_solution_at
from lovespec.spectrum import JumpSource


def t_free(mu):
    return 1.0 / (np.pi * np.sqrt(mu))


def t_free_h1(mu):
    return np.sqrt(mu) / (np.pi * (mu + 1.0))


def free_h1_weyl_data(k_cutoff=200.0):
    src = JumpSource(t_callable=t_free_h1, k_cutoff=k_cutoff)
    return WeylData(jump=src, pole_k=np.array([1j]), pole_alpha=np.array([2.0]))


def g_exact_h1(x, y):
    """Closed form of the h=1 input kernel on x >= y: e^x cosh y.

    Residue calculus gives C(u) = -e^{-u}/2 for the continuous part, and the
    pole adds 2 cosh x cosh y; the combination collapses to e^max cosh(min).
    """
    return np.exp(np.maximum(x, y)) * np.cosh(np.minimum(x, y))


class TestJFunction:
    def test_free_neumann_j_vanishes(self, free_problem):
        m = forward_weyl_evaluator(free_problem)
        assert abs(j_function(m, 0.7 + 0.9j)) < 1e-10

    def test_free_h1_value(self, free_h1_problem):
        m = forward_weyl_evaluator(free_h1_problem)
        assert j_function(m, 2j) == pytest.approx(-0.5, abs=1e-10)

    def test_k2_j_tends_to_h(self, square_well_h1_problem):
        m = forward_weyl_evaluator(square_well_h1_problem)
        ks = np.array([24.0, 48.0, 96.0])
        vals = np.array([(k**2 * j_function(m, k)).real for k in ks])
        # k^2 j -> h - V_hat(k): oscillates around h with O(1/k) decay
        assert abs(np.mean(vals) - 1.0) < 0.25


class TestBuildG:
    def test_free_data_gives_zero_kernel(self):
        src = JumpSource(t_callable=t_free, k_cutoff=100.0)
        data = WeylData(jump=src, pole_k=np.array([]), pole_alpha=np.array([]))
        g = build_g(data, np.linspace(0.0, 1.0, 41))
        assert np.max(np.abs(g.values)) < 1e-8

    def test_oracle_self_check(self):
        # verify the frozen closed form by oscillatory-weight quadrature:
        # w(k) = -1/(pi (1+k^2)) here, and 2 w cos(kx)cos(ky) folds into
        # cosine transforms at u = x -+ y
        for x, y in ((0.7, 0.3), (1.0, 0.5)):
            cont = 0.0
            for u in (x - y, x + y):
                cont += quad(lambda k: k * t_free_h1(k * k) - 1.0 / np.pi,
                             0.0, 400.0, weight="cos", wvar=u, limit=400)[0]
            val = cont + 2.0 * np.cosh(x) * np.cosh(y)
            assert abs(val - g_exact_h1(x, y)) < 1e-5

    def test_h1_kernel_matches_closed_form(self):
        data = free_h1_weyl_data()
        grid = np.linspace(0.0, 1.2, 101)
        g = build_g(data, grid)
        xg, yg = np.meshgrid(grid, grid, indexing="ij")
        exact = np.tril(g_exact_h1(xg, yg))
        assert np.max(np.abs(g.values - exact)) < 5e-6

    def test_pole_term_is_cosh_product(self):
        src = JumpSource(t_callable=t_free, k_cutoff=100.0)
        data = WeylData(jump=src, pole_k=np.array([1.5j]), pole_alpha=np.array([0.7]))
        grid = np.linspace(0.0, 1.0, 21)
        g = build_g(data, grid)
        x, y = grid[15], grid[4]
        assert g.values[15, 4] == pytest.approx(
            0.7 * np.cosh(1.5 * x) * np.cosh(1.5 * y), abs=1e-8)


class TestSolvability:
    def test_zero_kernel(self):
        grid = np.linspace(0.0, 1.0, 11)
        g = Kernel2D(grid_x=grid, values=np.zeros((11, 11)), kind="g")
        assert check_solvability(g, 1.0) == 0.0

    def test_rank_one_constant(self):
        grid = np.linspace(0.0, 1.0, 101)
        c = 0.8
        g = Kernel2D(grid_x=grid, values=np.tril(np.full((101, 101), c)),
                     kind="g", triangular=True)
        assert check_solvability(g, 1.0) == pytest.approx(c * 1.0, rel=1e-12)

    def test_h1_bound_linear_in_x(self):
        data = free_h1_weyl_data(k_cutoff=60.0)
        grid = np.linspace(0.0, 1.0, 101)
        g = build_g(data, grid)
        xs = np.linspace(0.1, 1.0, 7)
        ratios = [check_solvability(g, round(x, 10)) / x for x in
                  grid[np.searchsorted(grid, xs)]]
        assert max(ratios) < 4.0 * g_exact_h1(1.0, 1.0)


class TestSolveGL:
    def test_zero_kernel_gives_zero(self):
        grid = np.linspace(0.0, 1.0, 51)
        g = Kernel2D(grid_x=grid, values=np.zeros((51, 51)), kind="g")
        row = solve_gl(g, 1.0)
        assert np.max(np.abs(row.values)) == 0.0

    @pytest.mark.parametrize("c", [1.0, -0.6])
    def test_rank_one_closed_form(self, c):
        n = 400
        grid = np.linspace(0.0, 1.0, n + 1)
        g = Kernel2D(grid_x=grid, values=np.tril(np.full((n + 1, n + 1), c)),
                     kind="g", triangular=True)
        row = solve_gl(g, 1.0)
        exact = c * np.exp(c * (row.grid_y - 1.0))
        assert np.max(np.abs(row.values - exact)) < 1e-10
        assert row.residual < 1e-9

    def test_h1_kernel_diagonal_is_one(self):
        data = free_h1_weyl_data()
        grid = np.linspace(0.0, 1.0, 81)
        g = build_g(data, grid)
        diag = solve_gl_diagonal(g)
        assert np.max(np.abs(diag - 1.0)) < 1e-5

    def test_gl_residuals_small(self):
        data = free_h1_weyl_data()
        grid = np.linspace(0.0, 1.0, 81)
        g = build_g(data, grid)
        _, _, max_resid = solve_gl_diagonal(g, keep_rows=True)
        assert max_resid < 1e-9

    def test_threaded_solve_matches_serial(self):
        data = free_h1_weyl_data(k_cutoff=60.0)
        grid = np.linspace(0.0, 1.0, 41)
        g = build_g(data, grid)
        assert np.array_equal(solve_gl_diagonal(g), solve_gl_diagonal(g, threads=4))


class TestKernelDirect:
    def test_free_data_gives_zero(self, free_problem):
        src = JumpSource(jost=direct_jost_evaluator(free_problem), k_cutoff=60.0)
        data = WeylData(jump=src, pole_k=np.array([]), pole_alpha=np.array([]))
        phi = lambda x, ks: regular_solution_at(free_problem, ks, x)
        assert abs(kernel_direct(data, phi, 0.6, 0.3)) < 1e-6

    def test_h1_cross_method_agreement(self, free_h1_problem):
        src = JumpSource(jost=direct_jost_evaluator(free_h1_problem), k_cutoff=60.0)
        data = WeylData(jump=src, pole_k=np.array([1j]), pole_alpha=np.array([2.0]))
        grid = np.linspace(0.0, 1.0, 41)
        g = build_g(data, grid)
        phi = lambda x, ks: regular_solution_at(free_h1_problem, ks, x)
        for ix in (8, 20, 40):
            row = solve_gl(g, grid[ix])
            for iy in range(0, ix + 1, max(1, ix // 4)):
                direct = kernel_direct(data, phi, grid[ix], grid[iy])
                assert abs(direct - row.values[iy]) < 1e-4

    def test_square_well_cross_method(self, square_well_problem):
        ev = direct_jost_evaluator(square_well_problem)
        eig = find_eigenvalues(ev, tau_max=3.0)
        alphas = norming_constants(
            ev, lambda k: jost_function_derivative(square_well_problem, k), eig)
        src = JumpSource(jost=ev, k_cutoff=120.0, sample_dk=0.05)
        data = WeylData(jump=src, pole_k=eig, pole_alpha=alphas)
        grid = np.linspace(0.0, 1.0, 41)
        g = build_g(data, grid)
        phi = lambda x, ks: regular_solution_at(square_well_problem, ks, x)
        row = solve_gl(g, grid[32])
        for iy in (0, 8, 16, 32):
            direct = kernel_direct(data, phi, grid[32], grid[iy])
            scale = max(1.0, abs(direct))
            assert abs(direct - row.values[iy]) < 1e-3 * scale


class TestExtractPotential:
    def test_constant_diagonal(self):
        grid = np.linspace(0.0, 1.25, 101)
        pot, h = extract_potential(np.full(101, 0.35), grid, x_support=1.0)
        assert np.max(np.abs(pot.v)) < 1e-12
        assert h == 0.35

    def test_quadratic_diagonal(self):
        grid = np.linspace(0.0, 1.0, 201)
        pot, h = extract_potential(grid**2, grid, x_support=1.0,
                                   consistency_tol=1e-6, clamp_tail=False)
        assert np.max(np.abs(pot.v - (-4.0 * grid))) < 1e-9
        assert h == 0.0

    def test_h1_round_trip(self):
        data = free_h1_weyl_data()
        grid = np.linspace(0.0, 1.0, 81)
        g = build_g(data, grid)
        diag = solve_gl_diagonal(g)
        pot, h = extract_potential(diag, grid, x_support=1.0, clamp_tail=False)
        assert np.max(np.abs(pot.v)) <= 2e-2
        assert abs(h - 1.0) <= 2e-2

    def test_inconsistent_diagonal_raises(self):
        grid = np.linspace(0.0, 1.0, 101)
        diag = np.sin(40.0 * grid)  # FD and trapezoid disagree badly here
        with pytest.raises(ExtractionError):
            extract_potential(diag, grid, x_support=1.0, consistency_tol=1e-8)


class TestRegularSolutionFromKernel:
    def test_zero_kernel_gives_cosine(self):
        grid = np.linspace(0.0, 1.0, 51)
        kern = Kernel2D(grid_x=grid, values=np.zeros((51, 51)), kind="K")
        val = regular_solution_from_kernel(kern, 1.3, 1.0)
        assert val == pytest.approx(np.cos(1.3), abs=1e-12)

    def test_h1_matches_closed_form(self):
        data = free_h1_weyl_data()
        grid = np.linspace(0.0, 1.0, 81)
        g = build_g(data, grid)
        _, kern, _ = solve_gl_diagonal(g, keep_rows=True)
        for k in (0.9, 2.4):
            for x in (0.5, 1.0):
                val = regular_solution_from_kernel(kern, k, x)
                exact = np.cos(k * x) - np.sin(k * x) / k
                assert abs(val - exact) < 1e-4

    def test_square_well_matches_forward(self, square_well_problem):
        ev = direct_jost_evaluator(square_well_problem)
        eig = find_eigenvalues(ev, tau_max=3.0)
        alphas = norming_constants(
            ev, lambda k: jost_function_derivative(square_well_problem, k), eig)
        src = JumpSource(jost=ev, k_cutoff=120.0, sample_dk=0.05)
        data = WeylData(jump=src, pole_k=eig, pole_alpha=alphas)
        grid = np.linspace(0.0, 1.0, 41)
        g = build_g(data, grid)
        _, kern, _ = solve_gl_diagonal(g, keep_rows=True)
        x = 0.75
        val = regular_solution_from_kernel(kern, 2.0, x)
        fwd = regular_solution_at(square_well_problem, np.array([2.0 + 0j]), x)[0]
        assert abs(val - fwd) < 1e-3


class TestKernelCSV:
    def test_dump_triples(self, tmp_path):
        grid = np.linspace(0.0, 0.2, 3)
        vals = np.tril(np.arange(9.0).reshape(3, 3))
        kern = Kernel2D(grid_x=grid, values=vals, kind="g")
        kern.to_csv(tmp_path / "k.csv")
        lines = (tmp_path / "k.csv").read_text().strip().splitlines()
        assert lines[0] == "x,y,value"
        assert len(lines) == 1 + 6  # lower triangle of a 3x3 table


class TestWeylDataValidation:
    def test_negative_alpha_rejected(self):
        src = JumpSource(t_callable=t_free, k_cutoff=50.0)
        with pytest.raises(ConfigurationError):
            WeylData(jump=src, pole_k=np.array([1j]), pole_alpha=np.array([-1.0]))

    def test_off_axis_pole_rejected(self):
        src = JumpSource(t_callable=t_free, k_cutoff=50.0)
        with pytest.raises(ConfigurationError):
            WeylData(jump=src, pole_k=np.array([0.5 + 1j]), pole_alpha=np.array([1.0]))
