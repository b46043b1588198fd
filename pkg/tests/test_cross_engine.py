"""
Agreement between the phase-space engine and the truncated Fock oracle.
"""

import pytest

from cvwitness.fock_oracle import build_fock, fock_cumulant_set, wigner_value
from cvwitness.phase_space import partial_trace, wigner_eval
from cvwitness.states import build_state
from cvwitness.witness import CumulantSet, compute_cumulant_set

CUTOFF = 30
# Smallest cutoff per squeezing level whose leakage keeps fourth moments within 1e-6.
SQUEEZING_CUTOFFS = {0.5: 30, 1.0: 60, 1.5: 140}

CASES = [
    *(
        (f"{name}:r={r}", cutoff)
        for r, cutoff in SQUEEZING_CUTOFFS.items()
        for name in ("tmsv", "split-sqv", "split-phssv")
    ),
    *((f"split-fock:n={n},eps={eps}", CUTOFF) for n in (1, 2) for eps in (0.05, 0.3)),
]
# A lossy TMSV at r=1.5 needs thousands of ensemble members at cutoff 140.
SKIPPED = {("tmsv:r=1.5", 0.7)}


def assert_cumulants_agree(descriptor: str, cutoff: int) -> None:
    fock = build_fock(descriptor, cutoff=cutoff)
    phase_space = compute_cumulant_set(build_state(descriptor)).values()
    oracle = fock_cumulant_set(fock).values()
    tolerance = max(1e-6, 10 * fock.leakage)
    for name in CumulantSet.FIELDS:
        assert phase_space[name] == pytest.approx(oracle[name], abs=tolerance), name


@pytest.mark.slow
@pytest.mark.parametrize("eta", [1.0, 0.7])
@pytest.mark.parametrize(("descriptor", "cutoff"), CASES)
def test_cumulants_agree(descriptor, cutoff, eta):
    if (descriptor, eta) in SKIPPED:
        pytest.skip("ensemble too large for the oracle")
    assert_cumulants_agree(f"{descriptor},eta={eta}", cutoff)


@pytest.mark.slow
@pytest.mark.parametrize("point", [(0.0, 0.0), (0.4, -0.3), (1.1, 0.8)])
@pytest.mark.parametrize("descriptor", ["split-fock:n=1,eps=0.3", "split-phssv:r=0.5,eta=0.8"])
def test_reduced_wigner_functions_agree(descriptor, point):
    reduced = partial_trace(build_state(descriptor), 1)
    fock = build_fock(descriptor, cutoff=CUTOFF)
    assert wigner_eval(reduced, point) == pytest.approx(wigner_value(fock, point, mode=0), abs=1e-6)
