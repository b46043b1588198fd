"""
Tests for the reference-state constructors, coherent rings and state descriptors.
"""

import math

import numpy as np
import pytest

from cvwitness.base import (
    ConfigError,
    HeraldingError,
    IllConditionedError,
    InvalidParameterError,
    PoorApproximationError,
)
from cvwitness.phase_space import first_moments, state_covariance, state_overlap, wigner_eval
from cvwitness.states import (
    STATE_PARAMETERS,
    TAP_THETA,
    build_state,
    calibrate_epsilon,
    fock_target,
    make_fock_ring,
    make_phssv,
    make_split_fock,
    make_split_fock_for_fidelity,
    make_split_squeezed_vacuum,
    make_squeezed_vacuum,
    parse_descriptor,
    required_param,
    ring_fock_amplitudes,
    ring_infidelity,
    split_on_vacuum,
    state_family,
)


class TestCoherentRing:
    def test_single_photon_infidelity(self):
        _, approx = make_fock_ring(fock_target(1), 0.21)
        assert approx.infidelity == pytest.approx(0.21**4 / 6, rel=2e-3)
        assert approx.infidelity == pytest.approx(3.24e-4, rel=1e-2)
        assert approx.fidelity + approx.infidelity == pytest.approx(1.0)

    @pytest.mark.parametrize(
        ("fidelity", "expected"), [(1 - 1e-3, 0.278), (1 - 1e-10, 4.95e-3)]
    )
    def test_calibration(self, fidelity, expected):
        epsilon = calibrate_epsilon(fock_target(1), fidelity)
        assert epsilon == pytest.approx(expected, rel=5e-3)
        assert ring_infidelity(fock_target(1), epsilon) == pytest.approx(1 - fidelity, rel=1e-6)

    def test_component_count(self):
        state, approx = make_fock_ring(fock_target(2), 0.3)
        assert len(state) == 9
        assert approx.stellar_rank == 2
        assert state.is_normalized()

    def test_superposition_amplitudes(self):
        target = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
        _, approx = make_fock_ring(target, 0.05)
        amplitudes = ring_fock_amplitudes(approx, 12)
        np.testing.assert_allclose(amplitudes[:3], target, atol=1e-4)
        assert np.linalg.norm(amplitudes) == pytest.approx(1.0)

    def test_vacuum_target_is_exact(self):
        state, approx = make_fock_ring(fock_target(0), 0.5)
        assert approx.infidelity == 0.0
        assert wigner_eval(state, [0.0, 0.0]) == pytest.approx(1 / math.pi)

    def test_photon_wigner_is_negative_at_origin(self):
        state, _ = make_fock_ring(fock_target(1), 0.02)
        assert wigner_eval(state, [0.0, 0.0]) == pytest.approx(-1 / math.pi, rel=1e-3)

    def test_ill_conditioned_ring(self):
        with pytest.raises(IllConditionedError) as info:
            make_fock_ring(fock_target(6), 1e-3)
        assert info.value.condition_number > 1e12

    def test_poor_approximation(self):
        with pytest.raises(PoorApproximationError) as info:
            make_fock_ring(fock_target(1), 1.0)
        assert info.value.tail_norm > 0.1

    def test_unnormalized_target_rejected(self):
        with pytest.raises(InvalidParameterError, match="normalized"):
            make_fock_ring([1.0, 1.0], 0.1)

    def test_stellar_rank_limit(self):
        with pytest.raises(InvalidParameterError, match="Stellar rank"):
            make_fock_ring(fock_target(7), 0.5)


class TestFactory:
    def test_split_squeezed_vacuum_matches_beamsplitter(self):
        r = 0.45
        direct = make_split_squeezed_vacuum(r)
        split = split_on_vacuum(make_squeezed_vacuum(r))
        np.testing.assert_allclose(state_covariance(direct), state_covariance(split), atol=1e-14)

    def test_split_fock_component_count(self):
        assert len(make_split_fock(2, 0.3)) == 9
        assert len(make_split_fock(0, 0.3)) == 1

    def test_split_fock_photon_limit(self):
        with pytest.raises(InvalidParameterError):
            make_split_fock(5, 0.3)

    def test_fidelity_calibrated_split_fock(self):
        state = make_split_fock_for_fidelity(1, 1 - 1e-3)
        reference = make_split_fock(1, calibrate_epsilon(fock_target(1), 1 - 1e-3))
        assert state_overlap(state, reference) == pytest.approx(1.0, rel=1e-9)

    def test_phssv_is_normalized_and_centered(self):
        state, p_click = make_phssv(1.0)
        assert 0 < p_click < 0.1
        assert state.is_normalized()
        np.testing.assert_allclose(first_moments(state), 0.0, atol=1e-14)
        assert state_overlap(state, state) == pytest.approx(1.0, abs=0.1)

    def test_phssv_without_squeezing_cannot_herald(self):
        with pytest.raises(HeraldingError):
            make_phssv(0.0)

    def test_weak_phssv_approaches_single_photon(self):
        state, p_click = make_phssv(1e-3)
        assert p_click < 1e-7
        # The two-photon click branch leaves vacuum with relative weight R/(2T).
        reflectivity = math.sin(TAP_THETA) ** 2
        vacuum_weight = reflectivity / (2 * (1 - reflectivity))
        expected = -(1 - vacuum_weight) / (1 + vacuum_weight) / math.pi
        assert wigner_eval(state, [0.0, 0.0]) == pytest.approx(expected, rel=1e-4)

    def test_negative_squeezing_rejected(self):
        with pytest.raises(InvalidParameterError):
            make_squeezed_vacuum(-0.1)


class TestDescriptors:
    def test_parse_and_format(self):
        descriptor = parse_descriptor("split-fock:n=1,fid=0.9999999999,eta=0.5")
        assert descriptor.name == "split-fock"
        assert descriptor.params == {"n": 1.0, "fid": 0.9999999999, "eta": 0.5}
        assert str(descriptor) == "split-fock:n=1,fid=0.9999999999,eta=0.5"

    def test_bare_name(self):
        assert str(parse_descriptor("vacuum")) == "vacuum"

    def test_unknown_state(self):
        with pytest.raises(ConfigError, match="Unknown state") as info:
            parse_descriptor("cat:alpha=1")
        assert info.value.column == 1

    def test_unknown_parameter(self):
        with pytest.raises(ConfigError, match="no parameter 'q'") as info:
            parse_descriptor("tmsv:r=0.5,q=1")
        assert info.value.column == 12

    def test_bad_number_column(self):
        with pytest.raises(ConfigError) as info:
            parse_descriptor("tmsv:r=abc")
        assert info.value.column == 8

    def test_missing_required_parameter(self):
        with pytest.raises(ConfigError, match="needs parameter 'r'"):
            build_state("tmsv")

    def test_split_fock_needs_radius_or_fidelity(self):
        with pytest.raises(ConfigError, match="'eps' or 'fid'"):
            build_state("split-fock:n=1")

    def test_fractional_photon_number(self):
        with pytest.raises(ConfigError, match="integer"):
            build_state("split-fock:n=1.5,eps=0.1")

    def test_defaults(self):
        assert required_param(parse_descriptor("tmsv:r=0.2"), "eta") == 1.0
        assert set(STATE_PARAMETERS) == {"vacuum", "tmsv", "split-sqv", "split-fock", "split-phssv"}

    def test_family_overrides_one_parameter(self):
        family = state_family("tmsv:r=0.1,eta=0.5", "r")
        np.testing.assert_allclose(
            state_covariance(family(0.6)), state_covariance(build_state("tmsv:r=0.6,eta=0.5"))
        )

    def test_family_rejects_unknown_variable(self):
        with pytest.raises(ConfigError, match="to sweep"):
            state_family("vacuum", "r")
