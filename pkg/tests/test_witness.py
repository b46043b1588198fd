"""
Tests for the fourth-order witness, the Duan criterion and threshold search.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvwitness.base import InvalidParameterError, NoCrossingError, PreconditionError
from cvwitness.fock_oracle import (
    apply_gate,
    build_fock,
    fock_cumulant_set,
    fock_ring_state,
    split_from_vacuum,
    squeeze_generator,
)
from cvwitness.phase_space import (
    apply_symplectic,
    beamsplitter,
    reduce_to_standard_form,
    rotate,
    squeeze,
    tensor_product,
    two_mode_squeeze,
)
from cvwitness.states import (
    build_state,
    fock_target,
    make_coherent,
    make_fock_ring,
    make_lossy,
    make_split_squeezed_vacuum,
    make_squeezed_vacuum,
    make_tmsv,
    make_vacuum,
    split_on_vacuum,
    state_family,
)
from cvwitness.witness import (
    Criterion,
    CumulantSet,
    EprOperatorPair,
    compute_cumulant_set,
    duan_witness,
    evaluate_state,
    find_margin_root,
    find_threshold,
    fourth_moment_uncertainty_margin,
    fourth_order_witness,
    loss_scaled_cumulants,
    witness_margin_family,
)
from cvwitness.witness.closed_form import (
    duan_tmsv_lhs,
    split_single_photon_lhs,
    split_squeezed_photon_lhs,
    split_squeezed_vacuum_lhs,
    tmsv_lhs,
    vacuum_lhs,
)

SQUEEZING_GRID = np.linspace(0.0, 1.5, 31)


def _squeezed_product(r1: float, r2: float):
    return tensor_product(make_squeezed_vacuum(r1), make_squeezed_vacuum(r2))


class TestOperatorPair:
    def test_zero_coefficient_rejected(self):
        with pytest.raises(InvalidParameterError, match="g2"):
            EprOperatorPair(1.0, 0.0, 1.0, 1.0)

    def test_duan_family(self):
        pair = EprOperatorPair.duan(2.0)
        assert pair.as_tuple() == (2.0, -0.5, 2.0, 0.5)
        assert EprOperatorPair.duan(1.0).matches(EprOperatorPair())

    def test_cumulant_fields_are_ordered(self, tmsv):
        values = compute_cumulant_set(tmsv).values()
        assert tuple(values) == CumulantSet.FIELDS


class TestReferenceStates:
    def test_vacuum_saturates_the_bound(self, vacuum):
        _, fourth, duan = evaluate_state(vacuum)
        assert fourth.lhs == pytest.approx(vacuum_lhs(), abs=1e-12)
        assert fourth.rhs == 1.0
        assert fourth.verdict == "inconclusive"
        assert duan.margin == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("r", SQUEEZING_GRID)
    def test_tmsv_closed_form(self, r):
        report = fourth_order_witness(compute_cumulant_set(make_tmsv(r)))
        assert report.lhs == pytest.approx(tmsv_lhs(r), rel=1e-10, abs=1e-9)

    @pytest.mark.parametrize("r", SQUEEZING_GRID)
    def test_split_squeezed_vacuum_closed_form(self, r):
        report = fourth_order_witness(compute_cumulant_set(make_split_squeezed_vacuum(r)))
        assert report.lhs == pytest.approx(split_squeezed_vacuum_lhs(r), rel=1e-10, abs=1e-9)

    @pytest.mark.parametrize("r", [0.25, 0.5, 1.0, 1.5])
    def test_tmsv_violates_more_than_split_squeezed_vacuum(self, r):
        tmsv = fourth_order_witness(compute_cumulant_set(make_tmsv(r)))
        split = fourth_order_witness(compute_cumulant_set(make_split_squeezed_vacuum(r)))
        assert tmsv.violated
        assert tmsv.margin < split.margin

    @pytest.mark.parametrize("r", [0.0, 0.3, 0.9])
    def test_duan_tmsv(self, r):
        report = duan_witness(compute_cumulant_set(make_tmsv(r)), 1.0)
        assert report.lhs == pytest.approx(duan_tmsv_lhs(r))
        assert report.rhs == 2.0
        assert report.criterion is Criterion.DUAN

    @pytest.mark.parametrize("eta", [0.1, 0.4, 0.75, 1.0])
    def test_split_photon_margin(self, eta):
        # The ring's |3⟩ admixture moves the LHS by about 20ε² at η=1.
        epsilon = 0.01
        state = build_state(f"split-fock:n=1,eps={epsilon},eta={eta}")
        report = fourth_order_witness(compute_cumulant_set(state))
        assert report.lhs == pytest.approx(split_single_photon_lhs(eta), abs=25 * epsilon**2)
        assert report.margin == pytest.approx(6 * eta - 4 * eta**2, abs=25 * epsilon**2)
        assert not report.violated

    @pytest.mark.parametrize("eta", [0.4, 1.0])
    def test_split_photon_matches_oracle_on_same_ring(self, eta):
        descriptor = f"split-fock:n=1,eps=0.01,eta={eta}"
        phase_space = fourth_order_witness(compute_cumulant_set(build_state(descriptor)))
        oracle = fourth_order_witness(fock_cumulant_set(build_fock(descriptor, cutoff=12)))
        assert phase_space.lhs == pytest.approx(oracle.lhs, abs=1e-8)

    @pytest.mark.parametrize("r", [0.0, 0.2, 0.5])
    def test_split_squeezed_photon_closed_form(self, r):
        photon, _ = make_fock_ring(fock_target(1), 1e-3)
        state = split_on_vacuum(apply_symplectic(photon, squeeze(r, 0, 1)))
        report = fourth_order_witness(compute_cumulant_set(state))
        assert report.lhs == pytest.approx(split_squeezed_photon_lhs(r), abs=1e-4)

    @pytest.mark.parametrize("r", [0.2, 0.5])
    def test_split_squeezed_photon_matches_oracle_on_same_ring(self, r):
        photon, _ = make_fock_ring(fock_target(1), 0.01)
        state = split_on_vacuum(apply_symplectic(photon, squeeze(r, 0, 1)))
        ring = fock_ring_state(fock_target(1), 0.01, 60)
        squeezed = apply_gate(ring, squeeze_generator(r, 0, 1, 60))
        oracle = fock_cumulant_set(split_from_vacuum(squeezed, math.pi / 4, 30))
        lhs = fourth_order_witness(compute_cumulant_set(state)).lhs
        assert lhs == pytest.approx(fourth_order_witness(oracle).lhs, rel=1e-8, abs=1e-8)

    def test_split_squeezed_photon_is_three_without_squeezing(self):
        assert split_squeezed_photon_lhs(0.0) == pytest.approx(3.0)


class TestGaussianStates:
    @settings(max_examples=25, deadline=None)
    @given(
        r1=st.floats(0.0, 1.0),
        r2=st.floats(0.0, 1.0),
        theta=st.floats(-math.pi, math.pi),
        phi=st.floats(-math.pi, math.pi),
    )
    def test_fourth_order_reduces_to_second_order(self, r1, r2, theta, phi):
        state = apply_symplectic(
            _squeezed_product(r1, r2), beamsplitter(theta, 0, 1) @ two_mode_squeeze(0.2, 0, 1)
        )
        state = reduce_to_standard_form(apply_symplectic(state, rotate(phi, 0, 2)))
        c = compute_cumulant_set(state)
        scale = math.exp(4 * (r1 + r2 + 0.2))
        assert abs(c.k4_u) <= 1e-11 * scale
        assert abs(c.k4_v) <= 1e-11 * scale
        assert abs(c.k22_m1) <= 1e-11 * scale
        gaussian_lhs = (
            3 * c.k2_u**2 + 3 * c.k2_v**2 - 2 - 6 * c.k2_x1 * c.k2_x2 - 6 * c.k2_p1 * c.k2_p2
        )
        assert fourth_order_witness(c).lhs == pytest.approx(gaussian_lhs, abs=1e-9 * scale)

    @settings(max_examples=25, deadline=None)
    @given(r1=st.floats(0.0, 1.2), r2=st.floats(0.0, 1.2))
    def test_separable_products_are_never_flagged(self, r1, r2):
        _, fourth, duan = evaluate_state(_squeezed_product(r1, r2))
        assert fourth.margin >= -1e-9
        assert duan.margin >= -1e-9

    def test_duan_requires_matching_pair(self, tmsv):
        c = compute_cumulant_set(tmsv, EprOperatorPair(1.0, -2.0, 1.0, 1.0))
        with pytest.raises(InvalidParameterError, match="Duan"):
            duan_witness(c, 1.0)

    def test_duan_with_general_parameter(self, tmsv):
        a = 1.5
        c = compute_cumulant_set(tmsv, EprOperatorPair.duan(a))
        assert duan_witness(c, a).rhs == pytest.approx(a * a + 1 / (a * a))

    def test_uncentered_state_rejected(self):
        with pytest.raises(PreconditionError):
            compute_cumulant_set(tensor_product(make_coherent(0.2), make_vacuum(1)))

    def test_single_mode_state_rejected(self):
        with pytest.raises(InvalidParameterError, match="two-mode"):
            compute_cumulant_set(make_vacuum(1))


class TestLossScaling:
    @pytest.mark.parametrize("eta", [0.1, 0.3, 0.5, 0.7, 0.9])
    @pytest.mark.parametrize(
        "descriptor", ["tmsv:r=0.7", "split-sqv:r=0.4", "split-fock:n=1,eps=0.2", "split-phssv:r=0.6"]
    )
    def test_scaling_matches_channel(self, descriptor, eta):
        state = build_state(descriptor)
        direct = compute_cumulant_set(make_lossy(state, eta)).values()
        scaled = loss_scaled_cumulants(compute_cumulant_set(state), eta).values()
        for name in CumulantSet.FIELDS:
            assert direct[name] == pytest.approx(scaled[name], abs=1e-10), name

    def test_bad_efficiency_rejected(self, tmsv):
        with pytest.raises(InvalidParameterError):
            loss_scaled_cumulants(compute_cumulant_set(tmsv), -0.1)


class TestUncertaintyMargin:
    @pytest.mark.parametrize(
        "descriptor", ["vacuum", "tmsv:r=0.8", "split-fock:n=2,eps=0.3", "split-phssv:r=1"]
    )
    def test_physical_states_respect_the_bound(self, descriptor):
        state = build_state(descriptor)
        for mode in (0, 1):
            assert fourth_moment_uncertainty_margin(state, mode) >= -1e-9


class TestThreshold:
    def test_linear_root(self):
        assert find_margin_root(lambda t: t - 0.3, (0.0, 1.0), tol=1e-9) == pytest.approx(0.3, abs=1e-8)

    def test_root_at_endpoint(self):
        assert find_margin_root(lambda t: t, (0.0, 1.0)) == 0.0

    def test_bad_bracket_rejected(self):
        with pytest.raises(InvalidParameterError):
            find_margin_root(lambda t: t, (1.0, 0.0))

    def test_same_sign_raises_no_crossing(self):
        with pytest.raises(NoCrossingError) as info:
            find_margin_root(lambda t: t + 1.0, (0.0, 1.0))
        assert info.value.bracket == (0.0, 1.0)
        assert info.value.margins == (1.0, 2.0)

    @pytest.mark.parametrize("criterion", [Criterion.FOURTH_ORDER, Criterion.DUAN])
    def test_margin_family_matches_direct_evaluation(self, criterion):
        family = state_family("split-phssv:eta=0.8", "r")
        margin = witness_margin_family(family, EprOperatorPair.duan(1.0), criterion)
        for r in (0.2, 0.7):
            _, fourth, duan = evaluate_state(family(r), EprOperatorPair.duan(1.0))
            expected = duan if criterion is Criterion.DUAN else fourth
            assert margin(r) == pytest.approx(expected.margin, rel=1e-12, abs=1e-14)

    @pytest.mark.parametrize(
        "descriptor",
        [
            "split-fock:n=1,fid=0.9999999999",
            "split-fock:n=1,fid=0.999",
            "split-phssv:r=0.001",
            "split-phssv:r=1",
        ],
    )
    def test_loss_sweeps_never_cross(self, descriptor):
        with pytest.raises(NoCrossingError):
            find_threshold(state_family(descriptor, "eta"), bracket=(0.05, 1.0))

    def test_coarse_ring_photon_margin_curve(self):
        # At fidelity 1 − 1e-3 the ring sits well below the exact 6η − 4η² but stays positive.
        margin = witness_margin_family(state_family("split-fock:n=1,fid=0.999", "eta"))
        assert margin(1.0) == pytest.approx(0.481, abs=1e-3)
        assert margin(0.66) == pytest.approx(1.350, abs=1e-3)
        for eta in (0.05, 0.3, 0.66, 1.0):
            fock = build_fock(f"split-fock:n=1,fid=0.999,eta={eta}", cutoff=30)
            oracle = fourth_order_witness(fock_cumulant_set(fock))
            assert margin(eta) == pytest.approx(oracle.margin, abs=1e-6)
            assert 0 < margin(eta) < 6 * eta - 4 * eta**2

    def test_fourth_order_squeezing_threshold(self):
        crossing = find_threshold(
            state_family("split-phssv:eta=1", "r"), bracket=(0.005, 0.3), tol=1e-4
        )
        assert 0.02 < crossing < 0.05

    def test_duan_squeezing_threshold(self):
        crossing = find_threshold(
            state_family("split-phssv:eta=1", "r"),
            EprOperatorPair.duan(1.0),
            bracket=(0.3, 1.0),
            criterion=Criterion.DUAN,
        )
        assert 0.5 <= crossing <= 0.6

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.6, 1.0])
    def test_split_phssv_is_flagged_above_threshold(self, r):
        _, fourth, _ = evaluate_state(build_state(f"split-phssv:r={r}"))
        assert fourth.violated
