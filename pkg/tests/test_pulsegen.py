"""
Tests for pulse sampling, synthesis, propagation, preprocessing and dataset generation
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from pulseforge.core.exceptions import DegeneratePulseError, InvalidSpecError, UsageError
from pulseforge.data.models import (
    PICOSECOND, DispersionUnit, EnvelopeFamily, FiberProxyParams, FrequencyGrid, ProfileTag,
    PulseSpec, TimeGrid
)
from pulseforge.data.repositories import DatasetRepository
from pulseforge.pulsegen import (
    IntensityProfile, canonical_profiles, derive_seed, dispersion_std, envelope_profile, envelope_shape,
    generate_dataset, measure_fwhm, measure_support, preprocess, propagate_splitstep,
    pulse_energy, sample_pulse_spec, spectral_energy, spectral_phase, synthesize_field,
    temporal_energy, temporal_field, to_intensity
)
from pulseforge.transport import normalize_to_density, w2_1d

FINE_GRID = FrequencyGrid(n_points=8192, delta_omega=4 * 1.041e9)


def _gvd_factor(phi: float, tau0: float) -> float:
    return math.sqrt(1.0 + (4.0 * math.log(2.0) * phi / tau0 ** 2) ** 2)


@pytest.fixture
def gaussian_spec():
    """Transform-limited Gaussian, 10 ps FWHM"""
    return PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, order=1, sigma_t=10.0)


class TestSampling:
    """Test seeded parameter sampling"""

    def test_deterministic(self):
        """Test that (seed, index) fixes the spec"""
        assert sample_pulse_spec(7, 0) == sample_pulse_spec(7, 0)

    def test_indices_differ(self):
        """Test that different indices give different draws"""
        assert sample_pulse_spec(7, 0) != sample_pulse_spec(7, 1)

    def test_attempts_use_distinct_seeds(self):
        """Test that resampling attempts get their own sub-seeds"""
        assert derive_seed(7, 3, 0) != derive_seed(7, 3, 1)

    def test_ranges(self):
        """Test sigma_t and order ranges over many draws"""
        for index in range(200):
            spec = sample_pulse_spec(11, index)
            assert 2.0 <= spec.sigma_t <= 40.0
            assert spec.order in spec.envelope.orders

    def test_dispersion_std_picoseconds(self):
        """Test the variance formulas with sigma_t in picoseconds"""
        std2, std3, std4 = dispersion_std(10.0)
        assert std2 == pytest.approx(math.sqrt(100.0 / 3.0 / 10.0 ** 2) * 1e-24, rel=1e-12)
        assert std3 == pytest.approx(math.sqrt(100.0 / 3.0 / 10.0 ** 3) * 1e-36, rel=1e-12)
        assert std4 == pytest.approx(math.sqrt(400.0 / 3.0 / 10.0 ** 4) * 1e-48, rel=1e-12)

    def test_dispersion_std_seconds(self):
        """Test the literal reading with sigma_t in seconds"""
        std2, _, _ = dispersion_std(10.0, DispersionUnit.SECONDS)
        assert std2 == pytest.approx(math.sqrt(100.0 / (3.0 * (10.0 * PICOSECOND) ** 2)), rel=1e-12)

    @pytest.mark.slow
    def test_envelope_frequencies(self):
        """Test that families are drawn uniformly"""
        n = 100_000
        counts = {family: 0 for family in EnvelopeFamily}
        for index in range(n):
            counts[sample_pulse_spec(5, index).envelope] += 1
        sigma = math.sqrt(0.2 * 0.8 / n)
        for count in counts.values():
            assert abs(count / n - 0.2) < 3 * sigma


class TestEnvelopes:
    """Test the family shapes"""

    def test_gaussian_half_maximum(self):
        """Test that a Gaussian reaches one half at +-sigma_t / 2"""
        values = envelope_shape(EnvelopeFamily.GAUSSIAN, 1, 10e-12, np.array([-5e-12, 0.0, 5e-12]))
        np.testing.assert_allclose(values, [0.5, 1.0, 0.5], rtol=1e-12)

    def test_triangular_ramp(self):
        """Test the linear ramp of the first-order triangle"""
        values = envelope_shape(EnvelopeFamily.TRIANGULAR, 1, 10e-12, np.array([-2.5e-12, 2.5e-12, 6e-12]))
        np.testing.assert_allclose(values, [0.5, 0.5, 0.0], atol=1e-12)

    @pytest.mark.parametrize("family", list(EnvelopeFamily))
    def test_peak_and_symmetry(self, family):
        """Test unit peak, nonnegativity and symmetry for every family"""
        times = np.linspace(-30e-12, 30e-12, 601)
        values = envelope_shape(family, family.orders[-1], 12e-12, times)
        assert values.max() == pytest.approx(1.0)
        assert np.all(values >= 0)
        np.testing.assert_allclose(values, values[::-1], atol=1e-12)

    def test_flattop_is_flat_inside(self):
        """Test that the flattop plateau covers the inner 90 percent"""
        values = envelope_shape(EnvelopeFamily.FLATTOP, 1, 10e-12, np.linspace(-4.4e-12, 4.4e-12, 50))
        np.testing.assert_array_equal(values, np.ones(50))

    def test_profile_on_a_grid(self):
        """Test that the profile is the family shape sampled on the grid times"""
        spec = PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, order=4, sigma_t=5.0)
        grid = TimeGrid.output()
        expected = envelope_shape(EnvelopeFamily.GAUSSIAN, 4, spec.sigma_t_seconds, grid.times())
        np.testing.assert_array_equal(envelope_profile(spec, grid), expected)

    def test_profile_needs_a_wide_grid(self):
        """Test that the grid must span four widths"""
        spec = PulseSpec(envelope=EnvelopeFamily.PARABOLIC, sigma_t=40.0)
        with pytest.raises(InvalidSpecError):
            envelope_profile(spec, TimeGrid.output())

    def test_unknown_family(self):
        """Test that unknown families are rejected"""
        with pytest.raises(InvalidSpecError):
            envelope_shape("hexagonal", 1, 10e-12, np.zeros(3))

    def test_invalid_order(self):
        """Test that orders outside the family set fail validation"""
        with pytest.raises(ValidationError):
            PulseSpec(envelope=EnvelopeFamily.TRIANGULAR, order=3, sigma_t=10.0)

    def test_super_gaussian_approaches_flattop(self):
        """Test that higher Gaussian orders move toward the flattop in W2"""
        grid = TimeGrid.output()
        shapes = canonical_profiles()
        flattop = normalize_to_density(shapes["F"].values, grid)
        distances = [
            w2_1d(normalize_to_density(shapes[f"G{order}"].values, grid), flattop)
            for order in EnvelopeFamily.GAUSSIAN.orders
        ]
        assert all(b <= a + 1e-9 for a, b in zip(distances, distances[1:]))


class TestSpectral:
    """Test spectral synthesis"""

    def test_phase_polynomial(self):
        """Test direct evaluation of the dispersion polynomial"""
        spec = PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, sigma_t=10.0, phi2=2.0)
        grid = FrequencyGrid(n_points=8, delta_omega=1.0, omega0=spec.omega0)
        phase = spectral_phase(spec, grid)
        assert phase[7] == pytest.approx(9.0)
        assert phase[4] == 0.0

        spec4 = PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, sigma_t=10.0, phi4=24.0)
        assert spectral_phase(spec4, grid)[5] == pytest.approx(1.0)

    def test_zero_dispersion_has_zero_phase(self, gaussian_spec):
        """Test that all-zero coefficients give a flat phase"""
        np.testing.assert_array_equal(spectral_phase(gaussian_spec, FrequencyGrid()), 0.0)

    def test_transform_limited_field_is_real_and_even(self, gaussian_spec):
        """Test Fourier symmetry of a symmetric, unchirped pulse"""
        e = temporal_field(synthesize_field(gaussian_spec, FrequencyGrid()))
        scale = np.abs(e).max()
        assert np.abs(e.imag).max() < 1e-9 * scale
        center = len(e) // 2
        np.testing.assert_allclose(e[center + 1:center + 200], e[center - 1:center - 200:-1], atol=1e-9 * scale)

    def test_transform_limited_width(self, gaussian_spec):
        """Test that the intensity FWHM equals sigma_t"""
        grid = FrequencyGrid()
        intensity = to_intensity(synthesize_field(gaussian_spec, grid))
        fwhm = measure_fwhm(intensity, grid.synthesis_grid().times())
        assert fwhm == pytest.approx(10e-12, rel=1e-2)

    def test_chirp_broadening(self):
        """Test FWHM broadening of a chirped Gaussian"""
        phi2 = 5e-23
        spec = PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, sigma_t=10.0, phi2=phi2)
        grid = FrequencyGrid()
        fwhm = measure_fwhm(to_intensity(synthesize_field(spec, grid)), grid.synthesis_grid().times())
        assert fwhm == pytest.approx(10e-12 * _gvd_factor(phi2, 10e-12), rel=2e-2)

    def test_phase_preserves_energy(self, gaussian_spec):
        """Test that the unimodular phase leaves the spectral energy unchanged"""
        chirped = gaussian_spec.model_copy(update={"phi2": 3e-23, "phi3": 1e-36, "phi4": 2e-48})
        grid = FrequencyGrid()
        assert spectral_energy(synthesize_field(chirped, grid)) == pytest.approx(
            spectral_energy(synthesize_field(gaussian_spec, grid)), rel=1e-9
        )

    def test_parseval(self, gaussian_spec):
        """Test temporal against spectral energy"""
        grid = FrequencyGrid()
        field = synthesize_field(gaussian_spec.model_copy(update={"phi2": 2e-23}), grid)
        energy = temporal_energy(to_intensity(field), grid.synthesis_grid().delta_t)
        assert energy == pytest.approx(spectral_energy(field), rel=1e-6)


class TestPropagation:
    """Test the split-step fiber proxy"""

    def test_identity_without_dispersion_or_nonlinearity(self, gaussian_spec):
        """Test that a lossless, linear, dispersionless fiber is the identity"""
        field = synthesize_field(gaussian_spec, FrequencyGrid())
        out = propagate_splitstep(field, FiberProxyParams(beta2=0.0, gamma_nl=0.0))
        scale = np.abs(field.values).max()
        np.testing.assert_allclose(out.values, field.values, rtol=0, atol=1e-12 * scale)

    def test_energy_conserved(self, gaussian_spec):
        """Test that the default fiber conserves energy"""
        field = synthesize_field(gaussian_spec, FrequencyGrid())
        out = propagate_splitstep(field, FiberProxyParams())
        assert spectral_energy(out) == pytest.approx(spectral_energy(field), rel=1e-6)

    def test_group_velocity_dispersion(self, gaussian_spec):
        """Test FWHM growth against the analytic GVD law"""
        params = FiberProxyParams(beta2=20e-27, gamma_nl=0.0, length=2500.0)
        grid = FrequencyGrid()
        out = propagate_splitstep(synthesize_field(gaussian_spec, grid), params)
        fwhm = measure_fwhm(to_intensity(out), grid.synthesis_grid().times())
        expected = 10e-12 * _gvd_factor(params.beta2 * params.length, 10e-12)
        assert fwhm == pytest.approx(expected, rel=2e-2)


class TestPreprocessing:
    """Test standardization of raw intensities"""

    def _standardize(self, spec: PulseSpec) -> IntensityProfile:
        raw = to_intensity(synthesize_field(spec, FINE_GRID))
        return preprocess(raw, FINE_GRID.synthesis_grid(), TimeGrid.output())

    def test_peak_and_centroid(self):
        """Test unit peak and centered mass"""
        profile = self._standardize(PulseSpec(envelope=EnvelopeFamily.SECANT, sigma_t=12.0, phi2=1e-24))
        assert profile.values.max() == pytest.approx(1.0, abs=1e-6)
        assert abs(profile.centroid() - profile.grid.center) <= 0.5 * profile.grid.delta_t

    def test_shape_only_representation(self):
        """Test that Gaussians of different widths standardize to the same profile"""
        narrow = self._standardize(PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, sigma_t=5.0))
        wide = self._standardize(PulseSpec(envelope=EnvelopeFamily.GAUSSIAN, sigma_t=20.0))
        np.testing.assert_allclose(narrow.values, wide.values, atol=1e-3)

    def test_flattop_support(self):
        """Test that the support spans the standardized 30 ps"""
        profile = self._standardize(PulseSpec(envelope=EnvelopeFamily.FLATTOP, sigma_t=8.0))
        assert profile.values.shape == (512,)
        lo, hi = measure_support(profile.values, profile.times())
        assert hi - lo == pytest.approx(30e-12, rel=1e-3)

    def test_idempotent(self):
        """Test that a second pass changes nothing"""
        grid = TimeGrid.output()
        first = self._standardize(PulseSpec(envelope=EnvelopeFamily.PARABOLIC, sigma_t=15.0, phi2=5e-24))
        second = preprocess(first.values, grid, grid)
        np.testing.assert_allclose(second.values, first.values, atol=1e-3)

    def test_all_zero_input(self):
        """Test that an all-zero intensity is degenerate"""
        grid = TimeGrid.output()
        with pytest.raises(DegeneratePulseError):
            preprocess(np.zeros(512), grid, grid)

    def test_too_short_support(self):
        """Test that a single-sample spike is degenerate"""
        grid = TimeGrid.output()
        raw = np.zeros(512)
        raw[200] = 1.0
        with pytest.raises(DegeneratePulseError):
            preprocess(raw, grid, grid)


class TestEnergy:
    """Test pulse energies"""

    def test_flattop_rectangle(self):
        """Test the rectangle integral of a 30 ps plateau"""
        grid = TimeGrid.output()
        values = (np.abs(grid.times()) <= 15e-12).astype(float)
        assert pulse_energy(IntensityProfile(grid, values)) == pytest.approx(30e-12, rel=1e-9)

    def test_triangle_is_half_the_rectangle(self):
        """Test the triangle area"""
        grid = TimeGrid.output()
        values = np.maximum(0.0, 1.0 - np.abs(grid.times()) / 15e-12)
        assert pulse_energy(IntensityProfile(grid, values)) == pytest.approx(15e-12, rel=1e-3)

    def test_shift_invariant(self):
        """Test that moving the pulse leaves its energy unchanged"""
        grid = TimeGrid.output()
        values = np.exp(-0.5 * (grid.times() / 3e-12) ** 2)
        shifted = np.roll(values, 17)
        assert pulse_energy(IntensityProfile(grid, shifted)) == pytest.approx(
            pulse_energy(IntensityProfile(grid, values)), rel=1e-9
        )


class TestDataset:
    """Test dataset generation"""

    def test_writes_both_profiles_per_pair(self, tmp_path, fiber, small_options):
        """Test record count, tags and invariants of the stored profiles"""
        manifest = generate_dataset(2, 9, fiber, tmp_path / "data", small_options)
        assert manifest.count == 4
        assert [r.tag for r in manifest.records] == [
            ProfileTag.INPUT, ProfileTag.PROPAGATED, ProfileTag.INPUT, ProfileTag.PROPAGATED
        ]
        _, profiles = DatasetRepository().load(tmp_path / "data")
        assert profiles.shape == (4, 64)
        np.testing.assert_allclose(profiles.max(axis=1), 1.0, atol=1e-6)
        assert max(r.energy_normalized for r in manifest.records) == pytest.approx(1.0)

    def test_byte_identical_reruns(self, tmp_path, fiber, small_options):
        """Test determinism of the written files"""
        for name in ("a", "b"):
            generate_dataset(1, 42, fiber, tmp_path / name, small_options)
        for filename in ("manifest.json", "profiles.f32le"):
            assert (tmp_path / "a" / filename).read_bytes() == (tmp_path / "b" / filename).read_bytes()

    def test_threads_do_not_change_output(self, tmp_path, fiber, small_options):
        """Test that parallel generation writes the same bytes"""
        generate_dataset(3, 5, fiber, tmp_path / "one", small_options, threads=1)
        generate_dataset(3, 5, fiber, tmp_path / "two", small_options, threads=3)
        assert (tmp_path / "one" / "profiles.f32le").read_bytes() == (tmp_path / "two" / "profiles.f32le").read_bytes()

    def test_zero_pairs(self, tmp_path, fiber):
        """Test that at least one pair is required"""
        with pytest.raises(UsageError):
            generate_dataset(0, 1, fiber, tmp_path / "data")

    def test_canonical_labels(self):
        """Test that every family and order has a reference shape"""
        shapes = canonical_profiles()
        assert set(shapes) == {"S", "P", "F", "T1", "T2", "T4", "G1", "G2", "G3", "G4", "G5", "G10"}
