import numpy as np
import pytest

from lovespec import RobinProblem, profiles


@pytest.fixture(scope="session")
def square_well_problem():
    """V = -4 on [0,1], Neumann-type boundary (h = 0)."""
    return RobinProblem(potential=profiles.square_well(), h=0.0)


@pytest.fixture(scope="session")
def square_well_h1_problem():
    return RobinProblem(potential=profiles.square_well(), h=1.0)


@pytest.fixture(scope="session")
def free_problem():
    return RobinProblem(potential=profiles.free_potential(), h=0.0)


@pytest.fixture(scope="session")
def free_h1_problem():
    return RobinProblem(potential=profiles.free_potential(), h=1.0)


@pytest.fixture(scope="session")
def bump_problem():
    return RobinProblem(potential=profiles.bump_potential(), h=0.0)


def square_well_jost_exact(k, depth=4.0, h=0.0):
    """Closed-form square-well Jost data: (f(0,k), f'(0,k), f_h(k)).

    Inside the well f(x) = e^{ik}[cos(q(x-1)) + (ik/q) sin(q(x-1))] with
    q = sqrt(k^2 + depth); matching at x = 1 to e^{ikx}.
    """
    k = np.asarray(k, dtype=complex)
    q = np.sqrt(k * k + depth)
    f0 = np.exp(1j * k) * (np.cos(q) - (1j * k / q) * np.sin(q))
    fp0 = np.exp(1j * k) * (q * np.sin(q) + 1j * k * np.cos(q))
    return f0, fp0, h * f0 + fp0


def square_well_fourier(k, depth=4.0):
    """V_hat(k) = int_0^1 e^{2ikt} V dt for the square well (series-safe at 0)."""
    k = np.asarray(k, dtype=complex)
    out = np.empty(k.shape, dtype=complex)
    small = np.abs(k) < 1e-6
    out[~small] = -depth * (np.exp(2j * k[~small]) - 1.0) / (2j * k[~small])
    out[small] = -depth * (1.0 + 1j * k[small])
    return out if out.ndim else complex(out)
