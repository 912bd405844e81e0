import json

import numpy as np
import pytest

from lovespec import (
    ConfigurationError,
    DomainError,
    IngestionError,
    MediumConfig,
    PotentialGrid,
    ResolutionError,
    ShearProfile,
    SingularRecoveryError,
    profiles,
    quasi_momentum,
    read_potential,
    read_profile,
    schrodinger_from_love,
    shear_from_two_potentials,
    write_potential,
    write_profile,
)


class TestQuasiMomentum:
    def test_unit_radicand(self):
        k = quasi_momentum(MediumConfig(omega=np.sqrt(2.0), xi_norm=1.0, mu_hat_tail=1.0))
        assert k == pytest.approx(1.0 + 0j, abs=1e-15)

    def test_negative_radicand_gives_upper_half_k(self):
        k = quasi_momentum(MediumConfig(omega=0.0, xi_norm=2.0, mu_hat_tail=1.0))
        assert k == pytest.approx(2j)

    def test_scaled_tail(self):
        cfg = MediumConfig(omega=np.sqrt(3.0 * (4.0 + 1.0)), xi_norm=2.0, mu_hat_tail=3.0)
        assert quasi_momentum(cfg) == pytest.approx(1.0 + 0j)


class TestLoveToSchrodinger:
    def test_constant_profile_maps_to_free(self):
        pot, h = schrodinger_from_love(profiles.constant_profile(n=501), omega=1.3)
        assert np.max(np.abs(pot.v)) < 1e-12
        assert h == pytest.approx(0.0, abs=1e-12)

    def test_against_symbolic_oracle(self):
        # mu = exp(2 s) with s a smooth bump: V = s'' + (s')^2 - w^2 e^{-2s} + w^2
        import sympy as sp

        xs = sp.symbols("x", real=True)
        b, w, c = sp.Rational(1, 4), sp.Rational(2, 5), sp.Rational(3, 5)
        t = (xs - c) / w
        s_expr = -b * (1 - t**2) ** 5
        omega = 1.7
        v_expr = sp.diff(s_expr, xs, 2) + sp.diff(s_expr, xs) ** 2 \
            - omega**2 * sp.exp(-2 * s_expr) + omega**2
        v_exact = sp.lambdify(xs, v_expr, "numpy")

        prof = profiles.bump_profile(strength=0.25, width=0.4, x_support=1.0, n=4001)
        pot, h = schrodinger_from_love(prof, omega=omega)
        x = pot.grid_x
        inside = (x > 0.2) & (x < 1.0)  # the bump support, where s_expr applies
        assert np.max(np.abs(pot.v[inside] - v_exact(x[inside]))) < 1e-6
        outside = (x <= 0.2 - 0.01) | (x >= 1.0)
        assert np.max(np.abs(pot.v[outside])) < 1e-6
        assert h == pytest.approx(0.0, abs=1e-8)

    def test_two_frequencies_differ_by_closed_form(self):
        prof = profiles.bump_profile()
        p1, _ = schrodinger_from_love(prof, omega=1.0)
        p2, _ = schrodinger_from_love(prof, omega=2.0)
        expected = (1.0 - 4.0) * (1.0 / prof.mu_hat_tail - 1.0 / prof.mu_hat)
        assert np.max(np.abs((p1.v - p2.v) - expected)) < 1e-11

    def test_bundled_potentials_touch_their_support_edge(self):
        # |V| must have positive mass in every left neighborhood of x_support
        trapz = getattr(np, "trapezoid", None) or np.trapz
        for pot in (profiles.bump_potential(),
                    schrodinger_from_love(profiles.bump_profile(), omega=2.0)[0]):
            window = (pot.grid_x > pot.x_support - 0.1) & (pot.grid_x <= pot.x_support)
            assert trapz(np.abs(pot.v[window]), pot.grid_x[window]) > 1e-6

    def test_support_is_preserved(self):
        pot, _ = schrodinger_from_love(profiles.bump_profile(), omega=2.0)
        tail = pot.grid_x > pot.x_support
        assert np.all(pot.v[tail] == 0.0)
        assert np.all(pot.v_prime[tail] == 0.0)

    def test_h_sign_convention(self):
        # mu increasing at the surface => h < 0
        _, h = schrodinger_from_love(profiles.tilted_profile(slope=0.3), omega=1.0)
        assert h == pytest.approx(-0.3, rel=1e-6)
        assert h < 0

    def test_rejects_coarse_grid(self):
        x = np.linspace(0.0, 1.25, 4)
        prof = ShearProfile(grid_x=x, mu_hat=np.ones(4), mu_hat_tail=1.0, x_support=1.0)
        with pytest.raises(ResolutionError):
            schrodinger_from_love(prof, omega=1.0)

    def test_rejects_nonpositive_modulus(self):
        x = np.linspace(0.0, 1.25, 6)
        mu = np.array([1.0, -0.5, 1.0, 1.0, 1.0, 1.0])
        with pytest.raises(DomainError):
            ShearProfile(grid_x=x, mu_hat=mu, mu_hat_tail=1.0, x_support=1.0)


class TestShearRecovery:
    def test_zero_potentials_recover_tail(self):
        pot = profiles.free_potential(n=101)
        prof = shear_from_two_potentials(pot, pot, 1.0, 2.0, mu_hat_tail=2.5)
        assert np.allclose(prof.mu_hat, 2.5, rtol=0, atol=0)

    def test_round_trip_is_algebraic(self):
        prof = profiles.bump_profile()
        p1, _ = schrodinger_from_love(prof, omega=1.0)
        p2, _ = schrodinger_from_love(prof, omega=2.0)
        rec = shear_from_two_potentials(p1, p2, 1.0, 2.0, mu_hat_tail=prof.mu_hat_tail)
        rel = np.abs(rec.mu_hat - prof.mu_hat) / prof.mu_hat
        assert np.max(rel) < 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_round_trip_on_random_smooth_profiles(self, seed):
        # seeded random log-profiles windowed into (0, x_support)
        rng = np.random.default_rng(seed)
        x = np.linspace(0.0, 1.25, 1001)
        window = np.where((x > 0.0) & (x < 1.0), np.exp(2.0 - 1.0 / np.maximum(
            x * (1.0 - x) * 4.0, 1e-12)), 0.0)
        s = np.zeros_like(x)
        for m in range(1, 5):
            s += rng.normal(scale=0.2 / m) * np.sin(m * np.pi * x)
        mu_tail = rng.uniform(0.5, 2.0)
        prof = ShearProfile(grid_x=x, mu_hat=mu_tail * np.exp(2.0 * s * window),
                            mu_hat_tail=mu_tail, x_support=1.0)
        w1, w2 = sorted(rng.uniform(0.5, 3.0, size=2))
        p1, _ = schrodinger_from_love(prof, omega=w1)
        p2, _ = schrodinger_from_love(prof, omega=w2 + 0.5)
        rec = shear_from_two_potentials(p1, p2, w1, w2 + 0.5,
                                        mu_hat_tail=prof.mu_hat_tail)
        rel = np.abs(rec.mu_hat - prof.mu_hat) / prof.mu_hat
        assert np.max(rel) < 1e-10

    def test_equal_frequencies_rejected(self):
        pot = profiles.free_potential(n=101)
        with pytest.raises(ConfigurationError):
            shear_from_two_potentials(pot, pot, 1.5, 1.5, mu_hat_tail=1.0)

    def test_singular_denominator_reports_depth(self):
        pot = profiles.free_potential(n=101)
        x = pot.grid_x
        v = np.where(x <= 1.0, -3.0 * np.ones_like(x), 0.0)  # makes denominator 0. at dw=-3
        bad = PotentialGrid(grid_x=x, v=v, v_prime=np.zeros_like(x), x_support=1.0)
        with pytest.raises(SingularRecoveryError) as exc:
            shear_from_two_potentials(bad, pot, 1.0, 2.0, mu_hat_tail=1.0)
        assert exc.value.x is not None


class TestFileFormats:
    def test_profile_round_trip(self, tmp_path):
        prof = profiles.bump_profile(n=101)
        write_profile(prof, tmp_path / "p.csv", tmp_path / "p.json")
        back = read_profile(tmp_path / "p.csv", tmp_path / "p.json")
        assert np.array_equal(back.grid_x, prof.grid_x)
        assert np.array_equal(back.mu_hat, prof.mu_hat)
        assert back.mu_hat_tail == prof.mu_hat_tail
        assert back.x_support == prof.x_support

    def test_potential_round_trip(self, tmp_path):
        pot = profiles.bump_potential(n=101)
        write_potential(pot, -0.25, tmp_path / "v.csv", tmp_path / "v.json")
        back, h = read_potential(tmp_path / "v.csv", tmp_path / "v.json")
        assert np.array_equal(back.v, pot.v)
        assert h == -0.25

    def test_missing_sidecar_field_is_named(self, tmp_path):
        prof = profiles.bump_profile(n=101)
        write_profile(prof, tmp_path / "p.csv", tmp_path / "p.json")
        meta = json.loads((tmp_path / "p.json").read_text())
        del meta["mu_hat_tail"]
        (tmp_path / "p.json").write_text(json.dumps(meta))
        with pytest.raises(IngestionError, match="mu_hat_tail"):
            read_profile(tmp_path / "p.csv", tmp_path / "p.json")

    def test_inhomogeneous_tail_rejected(self):
        x = np.linspace(0.0, 1.25, 101)
        mu = np.ones_like(x)
        mu[-1] = 1.5
        with pytest.raises(IngestionError):
            ShearProfile(grid_x=x, mu_hat=mu, mu_hat_tail=1.0, x_support=1.0)
