"""Flow-model tests: spectra, orbit data, cutoff periods, diagnostics."""

import cmath
import math

import numpy as np
import pytest

from equizeta import (
    CircleModel,
    CutoffProfile,
    DomainError,
    EuclideanElement,
    EuclideanLatticeModel,
    IntegerLatticeModel,
    LineModel,
    QuadratureSpec,
    Sphere2Model,
    Sphere3Model,
    chi_primitive_period_numeric,
    length_spectrum,
    orbit_contributions,
    validate_model,
)

TWO_PI = 2.0 * math.pi


def euclid_model(alpha_v0=0j, a=1.0):
    return EuclideanLatticeModel.from_angle(3, a, TWO_PI / 3.0, 3, alpha_v0)


class TestLengthSpectrum:
    def test_line(self):
        m = LineModel()
        assert length_spectrum(m, 2.0, 10.0) == [2.0]
        assert length_spectrum(m, 0.0, 10.0) == []
        assert length_spectrum(m, -3.0, 10.0) == [-3.0]
        assert length_spectrum(m, 12.0, 10.0) == []

    def test_lattice_requires_integer(self):
        m = IntegerLatticeModel()
        assert length_spectrum(m, 3, 10.0) == [3.0]
        with pytest.raises(DomainError):
            length_spectrum(m, 0.5, 10.0)

    def test_circle_class(self):
        m = CircleModel()
        assert length_spectrum(m, 0.25, 2.5) == [-1.75, -0.75, 0.25, 1.25, 2.25]

    def test_circle_identity(self):
        m = CircleModel()
        assert length_spectrum(m, 0.0, 3.0) == [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]

    def test_sphere2(self):
        got = length_spectrum(Sphere2Model(), 1.0, 8.0)
        want = sorted(
            [1.0, 1.0 - TWO_PI, 1.0 + TWO_PI, -1.0, -1.0 + TWO_PI, -1.0 - TWO_PI]
        )
        assert np.allclose(got, want, atol=1e-12)

    def test_sphere3_merges_families(self):
        got = length_spectrum(Sphere3Model(), (1.0, math.sqrt(2.0)), 8.0)
        fam = []
        for theta in (1.0, math.sqrt(2.0)):
            for base in (theta, -theta):
                for n in (-2, -1, 0, 1, 2):
                    val = base + TWO_PI * n
                    if 0 < abs(val) <= 8.0:
                        fam.append(val)
        assert np.allclose(got, sorted(fam), atol=1e-12)

    def test_sphere3_collision_does_not_crash(self):
        spec = length_spectrum(Sphere3Model(), (1.0, 1.0), 8.0)
        assert all(b - a > 1e-10 for a, b in zip(spec, spec[1:]))

    def test_euclid(self):
        m = euclid_model()
        assert length_spectrum(m, EuclideanElement(l0=1), 10.0) == [-1.0, 1.0]
        assert length_spectrum(m, EuclideanElement(l0=-2), 10.0) == [-2.0, 2.0]
        with pytest.raises(DomainError):
            length_spectrum(m, EuclideanElement(l0=0), 10.0)

    def test_symmetry_identity_and_spheres(self):
        for model, g in (
            (CircleModel(), 0.0),
            (Sphere2Model(), 1.0),
            (Sphere3Model(), (1.0, math.sqrt(2.0))),
        ):
            spec = length_spectrum(model, g, 20.0)
            for v in spec:
                assert any(abs(v + u) < 1e-10 for u in spec)


class TestOrbitContributions:
    def test_line(self):
        m = LineModel(alpha=1j)
        (c,) = orbit_contributions(m, 2.0, 2.0)
        assert c.sign == 1
        assert abs(c.holonomy - cmath.exp(2j)) < 1e-15
        assert c.period == 1.0

    def test_euclid(self):
        m = euclid_model(alpha_v0=0j)
        (c,) = orbit_contributions(m, EuclideanElement(l0=1), 1.0)
        assert (c.sign, c.holonomy, c.period) == (1, 1.0 + 0j, pytest.approx(1.0 / 3.0))
        m2 = euclid_model(alpha_v0=1j)
        (c2,) = orbit_contributions(m2, EuclideanElement(l0=1), -1.0)
        assert abs(c2.holonomy - cmath.exp(1j)) < 1e-15  # independent of the sign

    def test_sphere2_weight_reproduces_pi_coefficient(self):
        # log R(sigma) = (1/2) sum weight e^{-|l|s}/|l| must carry the overall
        # factor pi: weight = 2*pi per spectrum value.
        m = Sphere2Model()
        (c,) = orbit_contributions(m, 1.0, 1.0)
        assert c.weight == TWO_PI

    def test_sphere3_collision_gives_two_orbits(self):
        cs = orbit_contributions(Sphere3Model(), (1.0, 1.0), 1.0)
        assert len(cs) == 2

    def test_not_in_spectrum(self):
        with pytest.raises(DomainError):
            orbit_contributions(LineModel(), 2.0, 1.0)

    def test_identity_class_atom_symmetry(self):
        m = CircleModel(alpha=1j)
        for n in (1, 2, 5):
            up = orbit_contributions(m, 0.0, float(n))[0].weight
            down = orbit_contributions(m, 0.0, float(-n))[0].weight
            assert abs(down - up.conjugate()) < 1e-15

    def test_all_signs_positive(self):
        cases = [
            (LineModel(alpha=1j), 2.0),
            (CircleModel(alpha=1j), 0.25),
            (euclid_model(), EuclideanElement(l0=1)),
            (Sphere2Model(), 1.0),
            (Sphere3Model(), (1.0, math.sqrt(2.0))),
        ]
        for model, g in cases:
            for l in length_spectrum(model, g, 9.0):
                assert all(c.sign == 1 for c in orbit_contributions(model, g, l))


class TestChiPeriods:
    def test_line_gaussian(self):
        val = chi_primitive_period_numeric(
            LineModel(), 2.0, chi_profile=CutoffProfile(kind="gaussian", width=0.5)
        )
        assert abs(val - 1.0) < 1e-8

    def test_circle_constant(self):
        val = chi_primitive_period_numeric(
            CircleModel(), 0.25, chi_profile=CutoffProfile(kind="constant")
        )
        assert abs(val - 1.0) < 1e-12

    def test_lattice(self):
        val = chi_primitive_period_numeric(
            IntegerLatticeModel(), 2, chi_profile=CutoffProfile(kind="gaussian", width=0.4)
        )
        assert abs(val - 1.0) < 1e-8

    def test_euclid_two_profiles(self):
        m = euclid_model()
        g = EuclideanElement(l0=1)
        for profile in (
            CutoffProfile(kind="smoothed_indicator", width=0.5, radius=1.4),
            CutoffProfile(kind="raised_cosine", radius=1.3),
        ):
            val = chi_primitive_period_numeric(m, g, chi_profile=profile)
            assert abs(val - 1.0 / 3.0) < 1e-6

    def test_euclid_gaussian_and_offset_element(self):
        m = euclid_model()
        g = EuclideanElement(l0=1, w_prime=m.lattice_basis()[0])
        val = chi_primitive_period_numeric(
            m, g, chi_profile=CutoffProfile(kind="gaussian", width=0.35)
        )
        assert abs(val - 1.0 / 3.0) < 1e-6

    def test_truncation_certificate(self):
        m = euclid_model()
        with pytest.raises(Exception) as err:
            chi_primitive_period_numeric(
                m,
                EuclideanElement(l0=1),
                chi_profile=CutoffProfile(kind="gaussian", width=0.5),
                quad=QuadratureSpec(radius=1.0),
            )
        assert "certify" in str(err.value)

    def test_sphere_primitive_period(self):
        val = chi_primitive_period_numeric(Sphere2Model(), 1.0)
        assert abs(val - TWO_PI) < 1e-12


class TestValidate:
    def test_euclid_nondegenerate(self):
        d = validate_model(euclid_model(), EuclideanElement(l0=1))
        assert d.nondegenerate
        assert "dim ker" in d.witness

    def test_euclid_degenerate_identity_rotation(self):
        m = EuclideanLatticeModel.from_angle(3, 1.0, 0.0, 1, 0j)
        d = validate_model(m, EuclideanElement(l0=1))
        assert not d.nondegenerate
        assert "= 3" in d.witness

    def test_circle_alpha_lattice_flags(self):
        d = validate_model(CircleModel(alpha=0j), 0.5)
        assert not d.continuation_available
        assert d.laplacian_kernel_nonzero
        d2 = validate_model(CircleModel(alpha=1j), 0.5)
        assert d2.continuation_available
        assert not d2.laplacian_kernel_nonzero
        d3 = validate_model(CircleModel(alpha=TWO_PI * 1j), 0.5)
        assert not d3.continuation_available

    def test_sphere_flags(self):
        d = validate_model(Sphere2Model(), 1.0)
        assert d.nondegenerate
        assert d.laplacian_kernel_nonzero
        assert not d.continuation_available
        assert d.dense_powers_ok

    def test_sphere_dense_powers_proxy(self):
        d = validate_model(Sphere2Model(), TWO_PI / 3.0)
        assert not d.dense_powers_ok  # 1/3 is a tiny-denominator rational
        d2 = validate_model(Sphere3Model(), (1.0, 1.0))
        assert not d2.dense_powers_ok  # theta1 - theta2 = 0

    def test_sphere3_nondegenerate(self):
        d = validate_model(Sphere3Model(), (1.0, math.sqrt(2.0)))
        assert d.nondegenerate

    def test_sphere_rejects_nontrivial_connection(self):
        with pytest.raises(DomainError):
            Sphere2Model(alpha=1j)
        with pytest.raises(DomainError):
            Sphere3Model(alpha=1j)

    def test_crystallographic_restriction(self):
        m = EuclideanLatticeModel.from_angle(3, 1.0, TWO_PI / 5.0, 5, 0j)
        with pytest.raises(DomainError):
            m.lattice_basis()

    def test_angle_quantization(self):
        # decimal flag angles snap to the exact finite-order multiple
        m = EuclideanLatticeModel.from_angle(3, 1.0, 2.0943951, 3, 0j)
        assert m.rotation.matrix[0, 0] == pytest.approx(math.cos(TWO_PI / 3.0), abs=1e-15)
        with pytest.raises(DomainError):
            EuclideanLatticeModel.from_angle(3, 1.0, 1.0, 6, 0j)


class TestModelFromParams:
    def test_line(self):
        from equizeta import model_from_params

        model, g = model_from_params("line", {"g": "2", "alpha": "0+1i"})
        assert isinstance(model, LineModel)
        assert model.alpha == 1j
        assert g == 2.0

    def test_euclid(self):
        from equizeta import model_from_params

        model, g = model_from_params(
            "euclid",
            {"n": "3", "a": "1", "theta": "2.0943951023931953", "order": "3", "l0": "1"},
        )
        assert isinstance(model, EuclideanLatticeModel)
        assert g.l0 == 1

    def test_unknown_model(self):
        from equizeta import model_from_params

        with pytest.raises(DomainError):
            model_from_params("torus", {})

    def test_missing_parameter(self):
        from equizeta import model_from_params

        with pytest.raises(DomainError):
            model_from_params("sphere3", {"theta1": "1"})


class TestConjugationInvariance:
    def test_spectrum_invariant(self):
        rng = np.random.default_rng(41)
        m = euclid_model()
        g = EuclideanElement(l0=2, m=1, w_prime=m.lattice_basis()[1])
        base = length_spectrum(m, g, 12.0)
        for _ in range(20):
            conj = m.conjugate_element(
                g,
                lam=int(rng.integers(-4, 5)),
                gamma_coeffs=rng.integers(-3, 4, size=2).astype(float),
                j=int(rng.integers(0, 3)),
            )
            assert np.allclose(length_spectrum(m, conj, 12.0), base, atol=1e-12)
            # Holonomy and period survive conjugation as well.
            for l in base:
                c0 = orbit_contributions(m, g, l)[0]
                c1 = orbit_contributions(m, conj, l)[0]
                assert abs(c0.holonomy - c1.holonomy) < 1e-14
                assert c0.period == c1.period
