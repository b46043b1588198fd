"""
Tests for the Gaussian-sum state representation and its channels.
"""

import math

import numpy as np
import pytest

from cvwitness.base import ConfigError, InvalidParameterError, PreconditionError, RealityCheckError
from cvwitness.phase_space import (
    ComplexGaussianComponent,
    GaussianSumState,
    apply_loss,
    apply_symplectic,
    center_state,
    check_centered_standard_form,
    compensated_sum,
    dumps_state,
    first_moments,
    loads_state,
    partial_trace,
    project_vacuum,
    real_part,
    reduce_to_standard_form,
    rotate,
    state_covariance,
    state_overlap,
    tensor_product,
    vacuum_log_probability,
    wigner_eval,
    wigner_values,
)
from cvwitness.states import make_coherent, make_lossy, make_tmsv, make_vacuum


class TestConstruction:
    def test_empty_state_rejected(self):
        with pytest.raises(InvalidParameterError):
            GaussianSumState((), 1)

    def test_mode_count_mismatch_rejected(self):
        component = ComplexGaussianComponent(1.0, np.zeros(2), 0.5 * np.eye(2))
        with pytest.raises(InvalidParameterError, match="modes"):
            GaussianSumState((component,), 2)

    def test_asymmetric_covariance_rejected(self):
        with pytest.raises(InvalidParameterError, match="symmetric"):
            ComplexGaussianComponent(1.0, np.zeros(2), np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_complex_covariance_rejected(self):
        with pytest.raises(InvalidParameterError):
            ComplexGaussianComponent(1.0, np.zeros(2), np.array([[0.5, 0.1j], [0.1j, 0.5]]))

    def test_normalized_rescales_weights(self):
        state = make_vacuum(1).scaled(2.5)
        assert not state.is_normalized()
        assert state.normalized().total_weight == pytest.approx(1.0)


class TestNumerics:
    def test_compensated_sum_survives_cancellation(self):
        assert compensated_sum([1e16, 1.0, -1e16]) == 1.0

    def test_real_part_rejects_imaginary_residue(self):
        with pytest.raises(RealityCheckError):
            real_part([1.0 + 1e-3j], "Test quantity")

    def test_real_part_accepts_conjugate_pairs(self):
        assert real_part([0.5 + 2j, 0.5 - 2j], "Test quantity") == pytest.approx(1.0)


class TestWigner:
    def test_vacuum_peak(self):
        assert wigner_eval(make_vacuum(1), [0.0, 0.0]) == pytest.approx(1 / math.pi)
        assert wigner_eval(make_vacuum(2), np.zeros(4)) == pytest.approx(1 / math.pi**2)

    def test_coherent_peak_sits_at_mean(self):
        alpha = 0.4 - 0.9j
        state = make_coherent(alpha)
        peak = [math.sqrt(2) * alpha.real, math.sqrt(2) * alpha.imag]
        assert wigner_eval(state, peak) == pytest.approx(1 / math.pi)
        np.testing.assert_allclose(first_moments(state).real, peak)

    def test_batch_matches_single_points(self, split_phssv):
        rng = np.random.default_rng(3)
        points = rng.normal(size=(8, 4))
        batch = wigner_values(split_phssv, points)
        single = [wigner_eval(split_phssv, p) for p in points]
        np.testing.assert_allclose(batch, single, rtol=1e-12, atol=1e-15)


class TestChannels:
    def test_partial_trace_of_tmsv_is_thermal(self):
        r = 0.6
        reduced = partial_trace(make_tmsv(r), 1)
        np.testing.assert_allclose(state_covariance(reduced), 0.5 * math.cosh(2 * r) * np.eye(2))

    def test_vacuum_projection_of_coherent_state(self):
        alpha = 0.7
        joint = tensor_product(make_coherent(alpha), make_vacuum(1))
        remainder, probability = project_vacuum(joint, 0)
        assert probability == pytest.approx(math.exp(-(alpha**2)))
        assert remainder.n_modes == 1
        assert vacuum_log_probability(joint, 0) == pytest.approx(-(alpha**2))

    def test_loss_shrinks_coherent_mean(self):
        eta = 0.36
        state = apply_loss(make_coherent(1.0 + 0.5j), 0, eta)
        expected = math.sqrt(eta) * math.sqrt(2) * np.array([1.0, 0.5])
        np.testing.assert_allclose(first_moments(state).real, expected)
        np.testing.assert_allclose(state_covariance(state), 0.5 * np.eye(2), atol=1e-14)

    def test_loss_rejects_bad_efficiency(self):
        with pytest.raises(InvalidParameterError):
            apply_loss(make_vacuum(1), 0, 1.5)

    def test_tensor_product_multiplies_components(self, split_phssv):
        joint = tensor_product(split_phssv, make_vacuum(1))
        assert joint.n_modes == 3
        assert len(joint) == len(split_phssv)

    def test_purity(self):
        assert state_overlap(make_tmsv(0.5), make_tmsv(0.5)) == pytest.approx(1.0)
        lossy = make_lossy(make_tmsv(0.5), 0.6)
        assert state_overlap(lossy, lossy) < 1.0
        thermal = partial_trace(make_tmsv(0.5), 0)
        assert state_overlap(thermal, thermal) == pytest.approx(1 / math.cosh(1.0))


class TestStandardForm:
    def test_center_state_removes_displacement(self):
        state = center_state(tensor_product(make_coherent(0.3 + 0.2j), make_vacuum(1)))
        np.testing.assert_allclose(first_moments(state), 0.0, atol=1e-15)

    def test_uncentered_state_fails_precondition(self):
        state = tensor_product(make_coherent(0.3), make_vacuum(1))
        with pytest.raises(PreconditionError, match="center_state"):
            check_centered_standard_form(state)

    def test_rotated_state_is_reduced(self, split_sqv):
        rotated = apply_symplectic(split_sqv, rotate(0.4, 0, 2))
        with pytest.raises(PreconditionError, match="reduce_to_standard_form"):
            check_centered_standard_form(rotated)
        check_centered_standard_form(reduce_to_standard_form(rotated))

    def test_reduce_requires_centering(self):
        state = tensor_product(make_coherent(0.5), make_vacuum(1))
        with pytest.raises(PreconditionError):
            reduce_to_standard_form(state)


class TestSerialization:
    def test_round_trip_is_exact(self, split_phssv):
        restored = loads_state(dumps_state(split_phssv))
        assert len(restored) == len(split_phssv)
        np.testing.assert_array_equal(restored.weights, split_phssv.weights)
        np.testing.assert_array_equal(restored.means, split_phssv.means)
        np.testing.assert_array_equal(restored.covs, split_phssv.covs)

    def test_bad_header_reports_column(self):
        with pytest.raises(ConfigError) as info:
            loads_state("modes=1 parts=1\n1 0 0 0 0 0 0.5 0 0 0.5\n")
        assert info.value.line == 1
        assert info.value.column == 9

    def test_bad_number_reports_line(self):
        with pytest.raises(ConfigError) as info:
            loads_state("modes=1 components=1\n1 0 0 0 0 x 0.5 0 0 0.5\n")
        assert info.value.line == 2
        assert info.value.column == 11

    def test_component_count_mismatch(self):
        with pytest.raises(ConfigError, match="declares 2"):
            loads_state("modes=1 components=2\n1 0 0 0 0 0 0.5 0 0 0.5\n")
