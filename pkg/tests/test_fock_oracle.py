"""
Tests for the truncated Fock-space oracle.
"""

import math

import numpy as np
import pytest

from cvwitness.base import ConfigError, CutoffLeakageError, HeraldingError, InvalidParameterError
from cvwitness.fock_oracle import (
    FockState,
    apply_gate,
    beamsplitter_generator,
    build_fock,
    crop,
    fock_cumulant_set,
    fock_number_state,
    fock_ring_state,
    fock_squeezed_vacuum,
    fock_tmsv,
    fock_vacuum,
    herald_click,
    loss_kraus,
    quadratures,
    split_from_vacuum,
    squeeze_generator,
    tensor_fock,
    two_mode_squeeze_generator,
    uncertainty_residual,
    verify_commutator_identity,
    weyl_ordered_expectation,
    weyl_symmetrized,
    wigner_value,
)
from cvwitness.fock_oracle.oracle import compress
from cvwitness.states import build_state, fock_target, make_phssv
from cvwitness.witness import CumulantSet, compute_cumulant_set


@pytest.mark.parametrize("k", [1, 2, 3])
def test_commutator_identity(k):
    assert verify_commutator_identity(k, 30) < 1e-9


def test_commutator_order_limit():
    with pytest.raises(InvalidParameterError):
        verify_commutator_identity(4)


def test_weyl_symmetrization_of_xp():
    x, p = quadratures(12)
    np.testing.assert_allclose(weyl_symmetrized(x, p, 1, 1), 0.5 * (x @ p + p @ x))
    with pytest.raises(InvalidParameterError):
        weyl_symmetrized(x, p, 3, 2)


class TestSinglePhoton:
    def test_weyl_moments(self):
        photon = fock_number_state(1, 20)
        assert weyl_ordered_expectation(photon, {0: (2, 0)}) == pytest.approx(1.5)
        assert weyl_ordered_expectation(photon, {0: (0, 2)}) == pytest.approx(1.5)
        assert weyl_ordered_expectation(photon, {0: (2, 2)}) == pytest.approx(1.25)

    def test_wigner_at_origin(self):
        assert wigner_value(fock_number_state(1, 10), (0.0, 0.0)) == pytest.approx(-1 / math.pi)
        assert wigner_value(fock_vacuum(1, 10), (0.0, 0.0)) == pytest.approx(1 / math.pi)

    def test_ring_state_is_close_to_number_state(self):
        ring = fock_ring_state(fock_target(1), 0.05, 20)
        assert abs(ring.vectors[0, 1]) ** 2 == pytest.approx(1.0, abs=1e-5)

    def test_number_state_must_fit(self):
        with pytest.raises(InvalidParameterError):
            fock_number_state(10, 10)


class TestChannels:
    @pytest.mark.parametrize("eta", [0.0, 0.3, 1.0])
    def test_loss_kraus_is_trace_preserving(self, eta):
        total = sum(k.T @ k for k in loss_kraus(eta, 15))
        np.testing.assert_allclose(total, np.eye(15), atol=1e-12)

    def test_loss_on_number_state(self):
        state = build_fock("ring:n=1", cutoff=10)
        lossy = build_fock("split-fock:n=1,eta=0.4", cutoff=10)
        assert state.mean_photon_number(0) == pytest.approx(1.0)
        total = lossy.mean_photon_number(0) + lossy.mean_photon_number(1)
        assert total == pytest.approx(0.4)

    def test_herald_on_vacuum_fails(self):
        with pytest.raises(HeraldingError):
            herald_click(fock_vacuum(2, 10), 0)

    def test_squeezing_gate(self):
        r = 0.4
        state = apply_gate(fock_vacuum(1, 40), squeeze_generator(r, 0, 1, 40))
        expected = 0.5 * math.exp(2 * r)
        assert weyl_ordered_expectation(state, {0: (2, 0)}) == pytest.approx(expected, rel=1e-8)


class TestExactPreparation:
    def test_squeezed_vacuum_matches_gate(self):
        gate = apply_gate(fock_vacuum(1, 60), squeeze_generator(0.4, 0, 1, 60))
        np.testing.assert_allclose(fock_squeezed_vacuum(0.4, 60).vectors, gate.vectors, atol=1e-9)

    def test_tmsv_matches_gate(self):
        gate = apply_gate(fock_vacuum(2, 30), two_mode_squeeze_generator(0.3, 0, 1, 2, 30))
        np.testing.assert_allclose(fock_tmsv(0.3, 30).vectors, gate.vectors, atol=1e-9)

    @pytest.mark.parametrize("theta", [0.1, math.pi / 4, 1.2])
    def test_split_matches_gate(self, theta):
        single = fock_ring_state(fock_target(2), 0.3, 12)
        joint = tensor_fock(fock_vacuum(1, 12), single)
        gate = apply_gate(joint, beamsplitter_generator(theta, 0, 1, 2, 12))
        split = split_from_vacuum(single, theta, 12)
        np.testing.assert_allclose(split.vectors, gate.vectors, atol=1e-10)

    def test_squeezed_leakage_is_the_dropped_tail(self):
        r = 1.0
        t = math.tanh(r)
        kept = sum(math.comb(2 * m, m) / 4**m * t ** (2 * m) for m in range(10)) / math.cosh(r)
        assert fock_squeezed_vacuum(r, 20).leakage == pytest.approx(1 - kept, rel=1e-9)

    def test_tmsv_leakage_is_the_dropped_tail(self):
        assert fock_tmsv(0.8, 15).leakage == pytest.approx(math.tanh(0.8) ** 30, rel=1e-8)

    def test_ring_leakage_matches_larger_space(self):
        wide = fock_ring_state(fock_target(1), 0.3, 40)
        narrow = fock_ring_state(fock_target(1), 0.3, 4)
        expected = 1 - np.sum(np.abs(wide.vectors[0, :4]) ** 2)
        assert narrow.leakage == pytest.approx(expected, rel=1e-8)
        assert wide.leakage < 1e-14

    def test_crop_accumulates_leakage(self):
        cropped = crop(fock_squeezed_vacuum(0.8, 40), 10, limit=1.0)
        assert cropped.leakage == pytest.approx(fock_squeezed_vacuum(0.8, 10).leakage, rel=1e-6)

    def test_split_output_leakage(self):
        single = fock_number_state(3, 8)
        split = split_from_vacuum(single, math.pi / 4, 3)
        # |3⟩ leaves |3,0⟩ and |0,3⟩ outside, each with weight 1/8.
        assert split.leakage == pytest.approx(0.25)

    def test_compress_keeps_density_matrix(self):
        rng = np.random.default_rng(7)
        vectors = rng.normal(size=(12, 5)) + 1j * rng.normal(size=(12, 5))
        vectors /= np.linalg.norm(vectors, axis=1)[:, None]
        state = FockState(np.full(12, 1 / 12), vectors, 1, 5)
        compact = compress(state)
        assert len(compact.probabilities) <= 5
        np.testing.assert_allclose(compact.density_matrix, state.density_matrix, atol=1e-12)


class TestBuild:
    def test_tmsv_photon_number(self):
        state = build_fock("tmsv:r=0.5", cutoff=30)
        assert state.mean_photon_number(0) == pytest.approx(math.sinh(0.5) ** 2, rel=1e-6)
        assert state.leakage < 1e-6

    def test_leakage_limit(self):
        with pytest.raises(CutoffLeakageError) as info:
            build_fock("squeezed:r=2", cutoff=30)
        assert info.value.cutoff == 30

    def test_strong_split_squeezing_is_rejected_or_exact(self):
        descriptor = "split-sqv:r=1.0"
        try:
            fock = build_fock(descriptor, cutoff=30)
        except CutoffLeakageError as error:
            assert error.cutoff == 30
            return
        oracle = fock_cumulant_set(fock).values()
        phase_space = compute_cumulant_set(build_state(descriptor)).values()
        tolerance = max(1e-6, 10 * fock.leakage)
        for name in CumulantSet.FIELDS:
            assert phase_space[name] == pytest.approx(oracle[name], abs=tolerance), name

    def test_split_squeezing_beyond_cutoff_is_rejected(self):
        with pytest.raises(CutoffLeakageError):
            build_fock("split-sqv:r=1.5", cutoff=60)

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            build_fock("cat:alpha=1")

    def test_click_probability_matches_phase_space(self):
        state = build_fock("phssv:r=0.5", cutoff=30)
        _, p_click = make_phssv(0.5)
        assert state.extras["p_click"] == pytest.approx(p_click, rel=1e-6)

    @pytest.mark.parametrize("descriptor", ["fock:n=1", "squeezed:r=0.5", "phssv:r=0.5,eta=0.6"])
    def test_uncertainty_residual_is_nonnegative(self, descriptor):
        assert uncertainty_residual(build_fock(descriptor, cutoff=30)) >= -1e-9

    def test_lossy_state_is_positive(self):
        state = build_fock("split-phssv:r=0.5,eta=0.7", cutoff=20)
        assert state.min_eigenvalue() >= -1e-12

    def test_single_photon_split_cumulants(self):
        c = fock_cumulant_set(build_fock("split-fock:n=1", cutoff=12))
        assert c.k22_m1 == pytest.approx(-0.25)
        assert c.k2_u == pytest.approx(1.0)
        assert c.k2_v == pytest.approx(3.0)

    def test_cumulant_set_needs_two_modes(self):
        with pytest.raises(InvalidParameterError):
            fock_cumulant_set(build_fock("fock:n=1", cutoff=10))
