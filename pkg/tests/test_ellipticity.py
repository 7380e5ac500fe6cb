"""
test_ellipticity.py - Symbol evaluation, ray audits and perturbation budgets.
"""

import math

import numpy as np
import pytest  # type: ignore

from spectral.coefficients import make_preset, polar_decompose
from spectral.ellipticity import (
    Budget,
    Ray,
    admissible_ray_window,
    budget_from_matrix,
    check_ray,
    corner_half_width,
    embedding_exponent,
    invertibility_budget,
    lemma_lower_bound,
    normalize_angle,
    optimal_ray,
    scan_rays,
    symbol_eval,
)
from utils.error_handler import EmptySamples, OscillationTooLarge, RhoOutOfRange


class TestSymbol:
    @pytest.mark.unit
    def test_principal_part(self):
        coeffs = make_preset("constant", count=5)
        assert symbol_eval(coeffs, np.zeros(2), [1.0, 0.0], 0.0) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_zero_covector_gives_a02(self):
        coeffs = make_preset("constant", count=5, value=0.3 - 2j)
        assert symbol_eval(coeffs, np.zeros(2), [0.0, 0.0], 1.0) == pytest.approx(0.3 - 2j)

    @pytest.mark.unit
    def test_vanishes_on_imaginary_axis(self):
        coeffs = make_preset("constant", count=5)
        assert abs(symbol_eval(coeffs, np.zeros(2), [1.0, 0.0], 1j)) < 1e-15

    @pytest.mark.unit
    def test_first_order_terms(self):
        coeffs = make_preset("constant", count=5)
        value = symbol_eval(coeffs, np.zeros(2), [1.0, 2.0], 2.0, a1=[1.0, lambda x: 0.5])
        assert value == pytest.approx(5.0 + 2.0 * 2.0 + 4.0)


class TestRayAudit:
    @pytest.mark.unit
    def test_constant_phase_on_real_ray(self):
        report = check_ray(polar_decompose(np.ones(20)), Ray(0.0))
        assert report.theta1 == pytest.approx(1.0)
        assert report.eta == 0.0
        assert report.ok_strong

    @pytest.mark.unit
    def test_quarter_ray_fails(self):
        report = check_ray(polar_decompose(np.full(10, 1j)), Ray(math.pi / 4))
        assert report.theta1 == pytest.approx(-1.0)
        assert report.eta == pytest.approx(1.0)
        assert not report.ok_strong

    @pytest.mark.unit
    def test_monomial_weight_is_elliptic_almost_everywhere(self):
        coeffs = make_preset("monomial", count=1000, d=0.5)
        report = check_ray(polar_decompose(coeffs.a02_samples()), Ray(0.0))
        assert report.theta1 == pytest.approx(1.0)
        assert not report.ok_strong
        assert report.ok_ae
        assert report.undefined_fraction == pytest.approx(1e-3)

    @pytest.mark.unit
    def test_empty_decomposition_raises(self):
        decomp = polar_decompose([1.0])
        empty = type(decomp)(
            modulus=np.zeros(0), phi0=np.zeros(0), theta0=0.0, Phi1=0.0, Phi2=0.0, Phi=0.0,
            undefined=np.zeros(0, dtype=bool),
        )
        with pytest.raises(EmptySamples):
            check_ray(empty, Ray(0.0))

    @pytest.mark.unit
    def test_ray_angle_is_normalised(self):
        assert Ray(3 * math.pi).phi_gamma == pytest.approx(math.pi)
        assert normalize_angle(-math.pi) == pytest.approx(math.pi)
        assert Ray(math.pi / 2).point(2.0) == pytest.approx(2j)


class TestOptimalRay:
    @pytest.mark.unit
    def test_constant_phase(self):
        decomp = polar_decompose(np.full(10, np.exp(0.6j)))
        ray = optimal_ray(decomp)
        assert ray.phi_gamma == pytest.approx(-0.3)
        assert check_ray(decomp, ray).theta1 == pytest.approx(1.0)

    @pytest.mark.unit
    def test_quarter_range(self):
        decomp = polar_decompose(np.exp(1j * np.linspace(0.0, math.pi / 2, 30)))
        ray = optimal_ray(decomp)
        assert ray.phi_gamma == pytest.approx(-math.pi / 8)
        assert check_ray(decomp, ray).theta1 >= math.cos(math.pi / 4) - 1e-12

    @pytest.mark.unit
    def test_guarantee_on_random_phase_fields(self, rng):
        """100 seeded phase fields: the cosine guarantee holds and a coarse grid search does no better."""
        grid = np.linspace(-math.pi / 2, math.pi / 2, 2001)
        for _ in range(100):
            start = rng.uniform(-math.pi, math.pi)
            width = rng.uniform(0.0, 3.0)
            phases = start + width * rng.random(50)
            decomp = polar_decompose(rng.uniform(0.5, 2.0, 50) * np.exp(1j * phases))
            report = check_ray(decomp, optimal_ray(decomp))
            assert report.theta1 >= math.cos(decomp.Phi / 2.0) - 1e-12
            best = max(np.min(np.cos(decomp.phi0 + 2.0 * phi)) for phi in grid[::50])
            assert report.theta1 >= best - 1e-9

    @pytest.mark.unit
    def test_full_oscillation_raises(self):
        decomp = polar_decompose(np.exp(1j * np.linspace(0.0, 2.5 * math.pi, 100)))
        with pytest.raises(OscillationTooLarge):
            optimal_ray(decomp)

    @pytest.mark.unit
    def test_scan_covers_half_turn(self):
        rows = scan_rays(polar_decompose(np.ones(5)), 8)
        assert len(rows) == 8
        assert rows[-1][0] == pytest.approx(math.pi / 2)
        assert all(-math.pi / 2 < phi <= math.pi / 2 + 1e-12 for phi, _, _ in rows)


class TestBudgets:
    @pytest.mark.unit
    def test_unperturbed_constant_phase(self):
        for rho in (0.0, 0.5):
            for n in (1, 2, 3):
                verdict = invertibility_budget(Budget(delta_s_norm=0.0, rho=rho, n=n, Phi=0.0))
                assert verdict.ok_inv and verdict.ok_complete

    @pytest.mark.unit
    def test_half_turn_oscillation(self):
        verdict = invertibility_budget(Budget(delta_s_norm=0.0, rho=0.0, n=2, Phi=math.pi))
        assert verdict.ok_inv
        assert not verdict.ok_complete
        assert verdict.corner_width == pytest.approx(math.pi / 4)

    @pytest.mark.unit
    def test_large_perturbation_still_invertible(self):
        verdict = invertibility_budget(Budget(delta_s_norm=0.9, rho=0.0, n=2, Phi=2.0))
        assert verdict.inv_value == pytest.approx(0.81, abs=1e-12)
        assert verdict.ok_inv
        assert verdict.norm_label == "discrete"

    @pytest.mark.unit
    def test_obtuse_oscillation_uses_negative_cosine(self):
        verdict = invertibility_budget(Budget(delta_s_norm=0.9, rho=0.0, n=2, Phi=5.0))
        assert verdict.inv_value == pytest.approx(0.81 + math.cos(2.5) ** 2)
        assert not verdict.ok_inv

    @pytest.mark.unit
    def test_budget_from_matrix(self):
        budget = budget_from_matrix(np.diag([0.2, -0.5]), Phi=0.1, rho=0.0, n=2)
        assert budget.delta_s_norm == pytest.approx(0.5)

    @pytest.mark.unit
    def test_rho_out_of_range(self):
        with pytest.raises(RhoOutOfRange):
            Budget(delta_s_norm=0.0, rho=0.7, n=2, Phi=0.0)

    @pytest.mark.unit
    def test_lemma_lower_bound(self):
        assert lemma_lower_bound(0.0, 0.5) == pytest.approx(0.5)
        assert lemma_lower_bound(0.6, 0.0) == pytest.approx(0.8)
        with pytest.raises(ValueError):
            lemma_lower_bound(1.5, 0.0)

    @pytest.mark.unit
    def test_admissible_window(self):
        decomp = polar_decompose(np.exp(1j * np.linspace(0.0, 0.2, 10)))
        lo, hi = admissible_ray_window(decomp, rho=0.0, n=2)
        assert lo < optimal_ray(decomp).phi_gamma < hi
        eps = (corner_half_width(0.0, 2) - decomp.Phi) / 2.0
        assert hi == pytest.approx((math.pi - 0.2 - 0.5 * eps) / 2.0)

    @pytest.mark.unit
    def test_admissible_window_needs_small_oscillation(self):
        decomp = polar_decompose(np.exp(1j * np.linspace(0.0, 1.0, 10)))
        with pytest.raises(OscillationTooLarge):
            admissible_ray_window(decomp, rho=0.0, n=2)


class TestEmbedding:
    @pytest.mark.unit
    def test_smooth_boundary(self):
        s = embedding_exponent(0.0, "C2")
        assert s.value == 0.5 and not s.minus_epsilon

    @pytest.mark.unit
    def test_lipschitz_boundary_loses_epsilon(self):
        s = embedding_exponent(0.0, "Lipschitz")
        assert s.value == 0.5 and s.minus_epsilon
        assert str(s) == "0.5 - eps"

    @pytest.mark.unit
    @pytest.mark.parametrize("rho, expected", [(0.5, 1.0), (0.25, 0.75)])
    def test_positive_rho(self, rho, expected):
        assert embedding_exponent(rho, "Lipschitz").value == pytest.approx(expected)

    @pytest.mark.unit
    def test_invalid_inputs(self):
        with pytest.raises(RhoOutOfRange):
            embedding_exponent(0.6, "C2")
        with pytest.raises(ValueError):
            embedding_exponent(0.1, "C1")
