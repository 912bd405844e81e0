import numpy as np
import pytest

from lovespec import (
    ConvergenceError,
    PoleError,
    RobinProblem,
    jost_function,
    jost_function_derivative,
    jost_solution,
    profiles,
    psi_function,
    regular_solution,
    theta_solution,
    weyl_function_forward,
    weyl_solution,
)
from lovespec.forward import jost_boundary, volterra_residual, wronskian

from conftest import square_well_fourier, square_well_jost_exact


def bound_lattice():
    """|k| in [0.5, 50] x arg in [0, pi]: 40 points in the closed upper half-plane."""
    mags = np.array([0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0])
    args = np.linspace(0.0, np.pi, 5)
    return (mags[:, None] * np.exp(1j * args[None, :])).ravel()


class TestFreeCase:
    @pytest.mark.parametrize("k", [1.0, 2.5, 1j, 0.7 + 0.3j, -1.2 + 0.8j])
    def test_jost_is_plane_wave(self, free_problem, k):
        sol = jost_solution(free_problem, k)
        assert np.max(np.abs(sol.f - np.exp(1j * k * sol.grid_x))) < 1e-10
        assert np.max(np.abs(sol.f_prime - 1j * k * np.exp(1j * k * sol.grid_x))) < 1e-10

    def test_jost_function_values(self, free_problem, free_h1_problem):
        assert jost_function(free_problem, 2.0) == pytest.approx(2j, abs=1e-12)
        assert jost_function(free_h1_problem, 1j) == pytest.approx(0.0, abs=1e-12)

    def test_regular_solutions(self, free_problem, free_h1_problem):
        k = 1.3
        sol = regular_solution(free_problem, k)
        assert np.max(np.abs(sol.f - np.cos(k * sol.grid_x))) < 1e-10
        sol1 = regular_solution(free_h1_problem, k)
        expected = np.cos(k * sol1.grid_x) - np.sin(k * sol1.grid_x) / k
        assert np.max(np.abs(sol1.f - expected)) < 1e-10

    def test_theta_solution(self, free_problem):
        k = 2.2
        sol = theta_solution(free_problem, k)
        assert np.max(np.abs(sol.f - np.sin(k * sol.grid_x) / k)) < 1e-10

    def test_theta_at_k_zero_is_linear(self, free_problem):
        sol = theta_solution(free_problem, 0.0)
        assert np.max(np.abs(sol.f - sol.grid_x)) < 1e-12

    def test_derivative_of_free_jost_function(self, free_h1_problem):
        assert jost_function_derivative(free_h1_problem, 0.8 + 0.1j) == pytest.approx(1j, abs=1e-9)

    def test_weyl_free_values(self, free_problem, free_h1_problem):
        assert weyl_function_forward(free_problem, 1j) == pytest.approx(-1.0, abs=1e-11)
        assert weyl_function_forward(free_h1_problem, 2j) == pytest.approx(-1.0, abs=1e-11)
        x = 0.5
        assert weyl_solution(free_problem, 1.5, x) == pytest.approx(
            np.exp(1.5j * x) / 1.5j, abs=1e-11)

    @pytest.mark.parametrize("k", [0.4 + 0.6j, -0.4 + 0.6j, 1.0 - 0.5j])
    def test_psi_is_one(self, free_problem, k):
        assert psi_function(free_problem, k, 0.625) == pytest.approx(1.0, abs=1e-9)


class TestSquareWellOracle:
    def test_boundary_values_match_closed_form(self, square_well_problem):
        ks = np.array([0.5, 3.0, 17.0, 1.7j, 2 + 1j, 0.2 - 0.4j, 1e-7, 40.0])
        f0, fp0 = jost_boundary(square_well_problem, ks)
        f0_e, fp0_e, _ = square_well_jost_exact(ks)
        assert np.max(np.abs(f0 - f0_e)) < 1e-9
        assert np.max(np.abs(fp0 - fp0_e)) < 1e-8

    def test_interior_profile_matches_closed_form(self, square_well_problem):
        k = 2.0 + 0.5j
        sol = jost_solution(square_well_problem, k)
        x = sol.grid_x
        q = np.sqrt(k * k + 4)
        inside = x <= 1.0
        exact = np.exp(1j * k) * (np.cos(q * (x[inside] - 1)) + (1j * k / q) * np.sin(q * (x[inside] - 1)))
        assert np.max(np.abs(sol.f[inside] - exact)) < 1e-10
        beyond = x > 1.0
        assert np.max(np.abs(sol.f[beyond] - np.exp(1j * k * x[beyond]))) < 1e-12

    def test_k_to_zero_continuity(self, square_well_problem):
        near, at = jost_function(square_well_problem, 1e-6), jost_function(square_well_problem, 0.0)
        assert abs(near - at) < 1e-5

    def test_discrete_residual_small(self, square_well_problem):
        sol = jost_solution(square_well_problem, 2.0)
        assert volterra_residual(square_well_problem, sol) < 1e-11


class TestPaperBounds:
    """Growth estimates for the Jost data, checked on the upper-half lattice."""

    def test_all_four_bounds_on_lattice(self, square_well_problem):
        ks = bound_lattice()
        f0, fp0 = jost_boundary(square_well_problem, ks)
        fh = fp0  # h = 0
        norm_v, x_sup = 4.0, 1.0
        a = norm_v / np.maximum(1.0, np.abs(ks))
        env = np.exp((np.abs(ks.imag) - ks.imag) * x_sup)
        vh_k = square_well_fourier(ks)
        vh_0 = -4.0
        assert np.all(np.abs(f0 - 1.0) <= env * a * np.exp(a) + 1e-12)
        assert np.all(np.abs(f0 - 1.0 + (vh_0 - vh_k) / (2j * ks)) <= 0.5 * a**2 * env * np.exp(a) + 1e-12)
        assert np.all(np.abs(fh - 1j * ks) <= norm_v * env * np.exp(a) + 1e-12)
        assert np.all(np.abs(fh - 1j * ks + 0.5 * (vh_0 + vh_k)) <=
                      0.5 * norm_v * a * env * np.exp(a) + 1e-12)

    def test_single_point_examples(self, square_well_problem):
        a = 4.0 / 3.0
        f0, _ = jost_boundary(square_well_problem, 3.0)
        assert abs(f0 - 1.0) <= a * np.exp(a)
        fh = jost_function(square_well_problem, 5.0)
        assert abs(fh - 5j) <= 4.0 * np.exp(4.0 / 5.0)


class TestSymmetries:
    @pytest.mark.parametrize("k", [0.8, 2.0, 11.0])
    def test_conjugation_on_real_axis(self, square_well_problem, k):
        sol_p = jost_solution(square_well_problem, k)
        sol_m = jost_solution(square_well_problem, -k)
        assert np.max(np.abs(sol_m.f - np.conj(sol_p.f))) < 1e-10
        fh_p = jost_function(square_well_problem, k)
        fh_m = jost_function(square_well_problem, -k)
        assert abs(fh_m - np.conj(fh_p)) < 1e-10

    @pytest.mark.parametrize("k", [1.5, 2.0 + 1.0j, 0.3j])
    def test_wronskian_of_jost_pair(self, square_well_problem, k):
        sol_p = jost_solution(square_well_problem, k)
        sol_m = jost_solution(square_well_problem, -k)
        w = wronskian(sol_p, sol_m)
        assert np.max(np.abs(w - (-2j * k))) < 1e-8

    @pytest.mark.parametrize("k", [1.1, 0.7 + 0.4j])
    def test_regular_solution_is_even_in_k(self, square_well_h1_problem, k):
        a = regular_solution(square_well_h1_problem, k)
        b = regular_solution(square_well_h1_problem, -k)
        assert np.max(np.abs(a.f - b.f)) < 1e-10

    def test_regular_solution_conjugate_identity(self, square_well_h1_problem):
        # phi = -[conj(f_h) f - f_h conj(f)] / (2ik) on the real axis
        k = 2.0
        phi = regular_solution(square_well_h1_problem, k)
        f = jost_solution(square_well_h1_problem, k)
        fh = jost_function(square_well_h1_problem, k)
        n = phi.f.size
        rhs = -(np.conj(fh) * f.f[:n] - fh * np.conj(f.f[:n])) / (2j * k)
        assert np.max(np.abs(phi.f - rhs)) < 1e-9

    def test_wronskian_phi_theta_is_one(self, square_well_problem):
        k = 1.7 + 0.2j
        phi = regular_solution(square_well_problem, k)
        theta = theta_solution(square_well_problem, k)
        w = wronskian(phi, theta)
        samples = w[:: w.size // 5]
        assert np.max(np.abs(samples - 1.0)) < 1e-8


class TestRegularSolutionBound:
    def test_uniform_growth_bound(self, square_well_problem):
        # |phi^{(nu)}(x,k)| <= C |k|^nu exp(|Im k| x), calibrated C once
        k = 2.0
        sol = regular_solution(square_well_problem, k)
        C = 4.0
        assert np.all(np.abs(sol.f) <= C)
        assert np.all(np.abs(sol.f_prime) <= C * k)


class TestWeyl:
    def test_boundary_identity(self, square_well_problem):
        k = 1.0 + 1.0j
        h = square_well_problem.h
        fh = jost_function(square_well_problem, k)
        sol = jost_solution(square_well_problem, k)
        phi_w = sol.f / fh
        phi_w_prime = sol.f_prime / fh
        assert abs(phi_w_prime[0] + h * phi_w[0] - 1.0) < 1e-9

    def test_large_k_weyl_solution(self, square_well_problem):
        k, x = 50.0, 0.5
        val = weyl_solution(square_well_problem, k, x)
        assert abs(val / (np.exp(1j * k * x) / (1j * k)) - 1.0) < 0.05

    def test_large_k_weyl_function(self, square_well_problem):
        m = weyl_function_forward(square_well_problem, 40.0)
        assert abs(1j * 40.0 * m - 1.0) <= 0.05

    def test_second_order_expansion_decay(self, square_well_h1_problem):
        # remainder of M - (1/ik)(1 - h/ik + V_hat/ik) decays faster than k^-2
        ks = 10.0 * 2.0 ** np.arange(5)
        ms = weyl_function_forward(square_well_h1_problem, ks)
        vh = square_well_fourier(ks)
        model = (1.0 / (1j * ks)) * (1.0 - 1.0 / (1j * ks) + vh / (1j * ks))
        resid = np.abs(ms - model)
        slope = np.polyfit(np.log(ks), np.log(resid), 1)[0]
        assert slope < -2.2

    def test_pole_detection(self, free_h1_problem):
        with pytest.raises(PoleError):
            weyl_function_forward(free_h1_problem, 1j)


class TestPsi:
    def test_two_sided_boundary_identity(self, square_well_problem):
        # 2 phi(x,k) = e^{ikx} psi_+(x,-k) + e^{-ikx} psi_-(x,k) for real k
        k, x, eps = 1.0, 0.5, 0.002
        phi = regular_solution(square_well_problem, k, upto_x=x).f[-1]
        psi_plus = psi_function(square_well_problem, -k + 1j * eps, x)
        psi_minus = psi_function(square_well_problem, k - 1j * eps, x)
        lhs = 2.0 * phi
        rhs = np.exp(1j * k * x) * psi_plus + np.exp(-1j * k * x) * psi_minus
        assert abs(lhs - rhs) < 1e-3 * max(1.0, abs(lhs))

    def test_rejects_real_k(self, square_well_problem):
        with pytest.raises(PoleError):
            psi_function(square_well_problem, 1.0, 0.5)


class TestDerivative:
    def test_richardson_self_consistency(self, square_well_problem):
        k = 2.0 + 0.3j
        d1 = jost_function_derivative(square_well_problem, k, step=1e-4)
        d2 = jost_function_derivative(square_well_problem, k, step=5e-5)
        assert abs(d1 - d2) < 1e-7 * max(1.0, abs(d1))


class TestGridRefinement:
    def test_halving_changes_little(self):
        vals = []
        for n in (1001, 2001):
            prob = RobinProblem(potential=profiles.square_well(n=n), h=0.0)
            vals.append(jost_function(prob, 2.0))
        assert abs(vals[0] - vals[1]) < 1e-6


class TestFailureModes:
    def test_overflow_raises_convergence_error(self, square_well_problem):
        with pytest.raises(ConvergenceError):
            jost_function(square_well_problem, -700j)
