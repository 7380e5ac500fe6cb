"""
test_coefficients.py - Factorisation, phase decomposition, complexification
and coefficient sources.
"""

import math

import numpy as np
import pytest  # type: ignore

from spectral.coefficients import (
    TABULATED_COLUMNS,
    EllipticCoefficients,
    LameModel,
    boundary_stress_coeffs,
    coefficients_from_spec,
    complexify_field,
    complexify_lame,
    decomplexify,
    hermitian_sqrt,
    load_tabulated,
    make_preset,
    modulus_factor,
    polar_decompose,
    sample_disk,
)
from utils.error_handler import (
    ConfigInvalid,
    EmptySamples,
    IoError,
    NonHermitian,
    NotPSD,
    NotUnitNormal,
    ZeroPhaseUndefined,
)


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return g @ g.conj().T


class TestHermitianSqrt:
    @pytest.mark.unit
    def test_identity(self):
        result = hermitian_sqrt(np.eye(2))
        np.testing.assert_allclose(result.D, np.eye(2), atol=1e-15)

    @pytest.mark.unit
    def test_diagonal(self):
        result = hermitian_sqrt(np.diag([4.0, 1.0]))
        np.testing.assert_allclose(result.D, np.diag([2.0, 1.0]), atol=1e-14)
        assert np.isrealobj(result.D)

    @pytest.mark.unit
    def test_random_psd_reconstruction(self, rng):
        """100 seeded PSD matrices of sizes 2..8."""
        for trial in range(100):
            n = 2 + trial % 7
            a = random_psd(rng, n)
            result = hermitian_sqrt(a)
            assert result.relative_error() < 1e-12
            np.testing.assert_allclose(result.D, result.D.conj().T, atol=1e-12 * np.abs(a).max())

    @pytest.mark.unit
    def test_rank_deficient_matrix_is_clamped(self, rng):
        a = random_psd(rng, 5, rank=2)
        result = hermitian_sqrt(a)
        assert result.relative_error() < 1e-12

    @pytest.mark.unit
    def test_non_hermitian_raises(self):
        with pytest.raises(NonHermitian):
            hermitian_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))

    @pytest.mark.unit
    def test_indefinite_raises(self):
        with pytest.raises(NotPSD):
            hermitian_sqrt(np.diag([1.0, -1.0]))

    @pytest.mark.unit
    def test_negativity_is_measured_against_the_norm(self):
        # -1e-10 is roundoff next to 1e3 but not next to 1
        result = hermitian_sqrt(np.diag([1e3, -1e-10]))
        np.testing.assert_allclose(result.D, np.diag([math.sqrt(1e3), 0.0]), atol=1e-12)
        with pytest.raises(NotPSD):
            hermitian_sqrt(np.diag([1.0, -1e-10]))


class TestPolarDecompose:
    @pytest.mark.unit
    def test_constant_positive(self):
        decomp = polar_decompose(np.ones(10))
        np.testing.assert_allclose(decomp.modulus, 1.0)
        np.testing.assert_allclose(decomp.phi0, 0.0)
        assert decomp.Phi == 0.0
        assert decomp.theta0 == 1.0

    @pytest.mark.unit
    def test_two_phases(self):
        decomp = polar_decompose([np.exp(0.1j), np.exp(0.3j)])
        assert decomp.Phi == pytest.approx(0.2, abs=1e-12)
        assert decomp.theta0 == pytest.approx(1.0)

    @pytest.mark.unit
    def test_branch_crossing_pi_has_no_jump(self):
        phases = np.linspace(3.0, 3.5, 51)
        decomp = polar_decompose(np.exp(1j * phases))
        assert decomp.Phi == pytest.approx(0.5, abs=1e-12)
        assert np.max(np.abs(np.diff(decomp.phi0))) < 0.02

    @pytest.mark.unit
    def test_recompose_reproduces_samples(self, rng):
        z = (0.5 + rng.random(200)) * np.exp(1j * rng.uniform(-1.0, 1.0, 200))
        decomp = polar_decompose(z)
        assert np.max(np.abs(decomp.recompose() - z) / np.abs(z)) < 1e-12

    @pytest.mark.unit
    def test_zero_sample_marked_undefined(self):
        decomp = polar_decompose([0.0, 1.0, 1j])
        assert decomp.undefined.tolist() == [True, False, False]
        assert math.isnan(decomp.phi0[0])
        assert decomp.theta0 == 0.0
        assert decomp.Phi == pytest.approx(math.pi / 2)

    @pytest.mark.unit
    def test_zero_sample_strict_raises(self):
        with pytest.raises(ZeroPhaseUndefined):
            polar_decompose([0.0, 1.0], strict=True)

    @pytest.mark.unit
    def test_all_zero_raises(self):
        with pytest.raises(ZeroPhaseUndefined):
            polar_decompose(np.zeros(4))

    @pytest.mark.unit
    def test_empty_raises(self):
        with pytest.raises(EmptySamples):
            polar_decompose([])


class TestComplexification:
    @pytest.mark.unit
    def test_identity_rotation(self):
        model = LameModel(vartheta=1.0, alpha=lambda x: 1.0, U=lambda x: np.eye(2))
        vartheta, a02 = complexify_lame(model)
        assert vartheta == 1.0
        assert a02(np.zeros(2)) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_quarter_rotation(self):
        rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
        model = LameModel(vartheta=2.0, alpha=lambda x: 2.0, U=lambda x: rotation)
        model.validate(sample_disk(20))
        _, a02 = complexify_lame(model)
        assert a02(np.array([0.3, 0.1])) == pytest.approx(2j)

    @pytest.mark.unit
    def test_invalid_rotation_rejected(self):
        model = LameModel(vartheta=1.0, alpha=lambda x: 1.0, U=lambda x: 2 * np.eye(2))
        with pytest.raises(ConfigInvalid):
            model.validate(sample_disk(5))

    @pytest.mark.unit
    def test_decomplexify(self):
        re, im = decomplexify(1j)
        assert float(re) == 0.0 and float(im) == 1.0
        v1, v2 = decomplexify(np.full(3, 3 - 4j))
        np.testing.assert_array_equal(v1, 3.0)
        np.testing.assert_array_equal(v2, -4.0)
        np.testing.assert_array_equal(complexify_field(v1, v2), np.full(3, 3 - 4j))


class TestBoundaryStress:
    @pytest.mark.unit
    def test_tangential_part_is_antisymmetric(self, rng):
        for _ in range(10):
            angle = rng.uniform(0.0, 2.0 * math.pi)
            nu = np.array([math.cos(angle), math.sin(angle)])
            coeffs = boundary_stress_coeffs(nu, 1.7)
            remainder = coeffs.sigma.copy()
            for i in range(2):
                remainder[i, i] -= 1.7 * nu
            symmetric = remainder + remainder.transpose(1, 0, 2)
            assert np.max(np.abs(symmetric)) < 1e-14

    @pytest.mark.unit
    def test_split_recombines(self):
        nu = np.array([0.6, 0.8])
        coeffs = boundary_stress_coeffs(nu, 2.0)
        np.testing.assert_allclose(coeffs.sigma, 2.0 * (coeffs.tilde + 2.0 * coeffs.tangential))

    @pytest.mark.unit
    def test_non_unit_normal_raises(self):
        with pytest.raises(NotUnitNormal):
            boundary_stress_coeffs([1.0, 1.0], 1.0)


class TestCoefficientSources:
    @pytest.mark.unit
    def test_sample_disk_is_inside_and_starts_at_origin(self):
        points = sample_disk(500, seed=3)
        assert points.shape == (500, 2)
        np.testing.assert_array_equal(points[0], [0.0, 0.0])
        assert np.all(np.hypot(points[:, 0], points[:, 1]) <= 1.0)

    @pytest.mark.unit
    def test_sample_disk_is_seeded(self):
        np.testing.assert_array_equal(sample_disk(50, seed=9), sample_disk(50, seed=9))

    @pytest.mark.unit
    def test_monomial_preset_vanishes_at_origin(self):
        coeffs = make_preset("monomial", count=100, d=0.5)
        coeffs.audit()
        samples = coeffs.a02_samples()
        assert samples[0] == 0
        assert np.all(samples.real >= 0)

    @pytest.mark.unit
    def test_phase_ramp_is_ordered(self):
        coeffs = make_preset("phase_ramp", count=200, phase_lo=0.0, phase_hi=1.0)
        decomp = polar_decompose(coeffs.a02_samples())
        assert np.all(np.diff(decomp.phi0) >= -1e-12)
        assert decomp.Phi <= 1.0 + 1e-12

    @pytest.mark.unit
    def test_unknown_preset_raises(self):
        with pytest.raises(ConfigInvalid):
            make_preset("spiral")

    @pytest.mark.unit
    def test_audit_rejects_indefinite_a(self):
        coeffs = EllipticCoefficients(
            n=2,
            A=lambda x: np.diag([1.0, -1.0]),
            a02=lambda x: 1.0,
            sample_set=sample_disk(5),
        )
        with pytest.raises(NotPSD):
            coeffs.audit()

    @pytest.mark.unit
    def test_audit_tolerance_is_relative(self):
        def audited(matrix):
            return EllipticCoefficients(n=2, A=lambda x: matrix, a02=lambda x: 1.0, sample_set=sample_disk(3))

        audited(np.diag([1e6, -1e-7])).audit()
        with pytest.raises(NotPSD):
            audited(np.diag([1.0, -1e-9])).audit()

    @pytest.mark.unit
    def test_modulus_factor(self):
        coeffs = make_preset("constant", count=10, value=-2j)
        assert np.allclose(modulus_factor(coeffs).a02_samples(), 2.0)

    @pytest.mark.unit
    def test_spec_mapping(self):
        coeffs = coefficients_from_spec({"preset": "constant", "value": [0.0, 1.0], "samples": 20})
        assert len(coeffs.sample_set) == 20
        assert coeffs.a02(np.zeros(2)) == 1j
        with pytest.raises(ConfigInvalid):
            coefficients_from_spec({})

    @pytest.mark.unit
    def test_load_tabulated(self, tmp_path):
        path = tmp_path / "coeffs.csv"
        rows = [
            [0.0, 0.0, 1, 0, 0, 0, 0, 0, 1, 0, 1.0, 0.0],
            [0.5, 0.0, 2, 0, 0, 0, 0, 0, 1, 0, 0.0, 1.0],
        ]
        lines = ["# generated", ",".join(TABULATED_COLUMNS)]
        lines += [",".join(str(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")

        coeffs = load_tabulated(str(path))
        coeffs.audit()
        assert coeffs.a02(np.array([0.45, 0.05])) == 1j
        np.testing.assert_allclose(coeffs.A(np.array([0.6, 0.0])), np.diag([2.0, 1.0]))

    @pytest.mark.unit
    def test_load_tabulated_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(ConfigInvalid):
            load_tabulated(str(path))

    @pytest.mark.unit
    def test_load_tabulated_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_tabulated(str(tmp_path / "missing.csv"))
