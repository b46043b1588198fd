"""
Symplectic maps (Gaussian unitaries) acting on phase-space states.

Conventions, in quadrature order (x₁, p₁, x₂, p₂, ...):

* beamsplitter(θ, i, j): x_i → cosθ·x_i + sinθ·x_j, x_j → −sinθ·x_i + cosθ·x_j
  (p identically); transmittivity T = cos²θ.
* squeeze(r, i): x_i → e^r·x_i, p_i → e^{−r}·p_i, so vacuum becomes diag(e^{2r}, e^{−2r})/2.
* two_mode_squeeze(r, i, j): x_i → cosh r·x_i + sinh r·x_j, p_i → cosh r·p_i − sinh r·p_j
  (and symmetrically), giving the TMSV covariance with +½sinh2r on x–x and −½sinh2r on p–p.
* rotate(φ, i): counter-clockwise phase-space rotation (x, p) → (cosφ·x − sinφ·p, sinφ·x + cosφ·p).

A map acts on means as μ → Sμ + d and on covariances as Σ → SΣSᵀ.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from cvwitness.base import InvalidParameterError, NonSymplecticError
from cvwitness.phase_space.state import (
    ComplexGaussianComponent,
    GaussianSumState,
    mode_indices,
)

SYMPLECTIC_TOL = 1e-12


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal J with per-mode blocks [[0, 1], [−1, 0]]."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_residual(matrix: np.ndarray) -> float:
    """Largest entry of |S J Sᵀ − J|."""
    n_modes = matrix.shape[0] // 2
    J = symplectic_form(n_modes)
    return float(np.max(np.abs(matrix @ J @ matrix.T - J)))


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """
    Real symplectic matrix with an optional displacement.

    Attributes:
        matrix: (2N, 2N) real matrix S with S J Sᵀ = J
        displacement: Optional real vector d of length 2N
    """

    matrix: np.ndarray
    displacement: np.ndarray | None = None

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise InvalidParameterError(f"Symplectic matrix must be square and even, got {matrix.shape}")
        residual = symplectic_residual(matrix)
        # Entries of S J Sᵀ grow like ‖S‖², so the tolerance scales with it.
        scale = max(1.0, float(np.max(np.abs(matrix))) ** 2)
        if residual > SYMPLECTIC_TOL * scale:
            raise NonSymplecticError(residual)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

        if self.displacement is not None:
            d = np.array(self.displacement, dtype=float).ravel()
            if d.shape[0] != matrix.shape[0]:
                raise InvalidParameterError("Displacement length does not match the matrix")
            d.setflags(write=False)
            object.__setattr__(self, "displacement", d)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __matmul__(self, other: "SymplecticMap") -> "SymplecticMap":
        """Composition: ``(self @ other)`` applies ``other`` first."""
        if other.n_modes != self.n_modes:
            raise InvalidParameterError("Cannot compose maps on different mode counts")
        d_other = other.displacement if other.displacement is not None else 0.0
        d_self = self.displacement if self.displacement is not None else 0.0
        d = self.matrix @ np.broadcast_to(d_other, (self.matrix.shape[0],)) + d_self
        has_d = other.displacement is not None or self.displacement is not None
        return SymplecticMap(self.matrix @ other.matrix, d if has_d else None)

    def inverse(self) -> "SymplecticMap":
        # S⁻¹ = −J Sᵀ J for symplectic S.
        J = symplectic_form(self.n_modes)
        inv = -J @ self.matrix.T @ J
        d = None if self.displacement is None else -inv @ self.displacement
        return SymplecticMap(inv, d)


def _embed(block: np.ndarray, modes: list[int], n_modes: int) -> np.ndarray:
    matrix = np.eye(2 * n_modes)
    idx = [q for m in modes for q in mode_indices(m, n_modes)]
    matrix[np.ix_(idx, idx)] = block
    return matrix


def _distinct(i: int, j: int) -> None:
    if i == j:
        raise InvalidParameterError(f"Two-mode operation needs distinct modes, got {i} and {j}")


def beamsplitter(theta: float, i: int, j: int, n_modes: int = 2) -> SymplecticMap:
    _distinct(i, j)
    c, s = np.cos(theta), np.sin(theta)
    block = np.array(
        [
            [c, 0, s, 0],
            [0, c, 0, s],
            [-s, 0, c, 0],
            [0, -s, 0, c],
        ]
    )
    return SymplecticMap(_embed(block, [i, j], n_modes))


def squeeze(r: float, i: int, n_modes: int = 1) -> SymplecticMap:
    return SymplecticMap(_embed(np.diag([np.exp(r), np.exp(-r)]), [i], n_modes))


def two_mode_squeeze(r: float, i: int, j: int, n_modes: int = 2) -> SymplecticMap:
    _distinct(i, j)
    ch, sh = np.cosh(r), np.sinh(r)
    block = np.array(
        [
            [ch, 0, sh, 0],
            [0, ch, 0, -sh],
            [sh, 0, ch, 0],
            [0, -sh, 0, ch],
        ]
    )
    return SymplecticMap(_embed(block, [i, j], n_modes))


def rotate(phi: float, i: int, n_modes: int = 1) -> SymplecticMap:
    c, s = np.cos(phi), np.sin(phi)
    return SymplecticMap(_embed(np.array([[c, -s], [s, c]]), [i], n_modes))


_KINDS = {
    "beamsplitter": beamsplitter,
    "squeeze": squeeze,
    "two_mode_squeeze": two_mode_squeeze,
    "rotate": rotate,
}


def make_symplectic(kind: str, n_modes: int, **params: Any) -> SymplecticMap:
    """
    Build a named Gaussian gate.

    Args:
        kind: One of 'beamsplitter', 'squeeze', 'two_mode_squeeze', 'rotate'
        n_modes: Number of modes of the state the map will act on
        **params: Gate parameters, e.g. ``theta=..., i=0, j=1`` or ``r=..., i=1``

    Returns:
        SymplecticMap on ``n_modes`` modes

    Raises:
        InvalidParameterError: For an unknown kind, invalid or repeated mode indices
    """
    try:
        factory = _KINDS[kind]
    except KeyError as e:
        raise InvalidParameterError(
            f"Unknown gate '{kind}', expected one of {sorted(_KINDS)}"
        ) from e
    try:
        return factory(n_modes=n_modes, **params)
    except TypeError as e:
        raise InvalidParameterError(f"Bad parameters for {kind}: {e}") from e


def apply_symplectic(state: GaussianSumState, smap: SymplecticMap) -> GaussianSumState:
    """
    Apply a Gaussian unitary to every component.

    Weights are unchanged; means map as μ → Sμ + d and covariances as Σ → SΣSᵀ.

    Raises:
        InvalidParameterError: If the map and state mode counts differ
    """
    if smap.n_modes != state.n_modes:
        raise InvalidParameterError(
            f"Map acts on {smap.n_modes} modes but the state has {state.n_modes}"
        )
    S = smap.matrix
    d = smap.displacement
    components = []
    for c in state.components:
        mean = S @ c.mean
        if d is not None:
            mean = mean + d
        components.append(ComplexGaussianComponent(c.weight, mean, S @ c.cov @ S.T))
    return GaussianSumState(tuple(components), state.n_modes)


def is_physical_gaussian(component: ComplexGaussianComponent, tol: float = 1e-9) -> bool:
    """
    Check the uncertainty principle Σ + (i/2)J ⪰ 0 for one Gaussian component.

    Only meaningful for single-component states; affine sums are checked against the oracle.
    """
    matrix = component.cov + 0.5j * symplectic_form(component.n_modes)
    return bool(np.min(np.linalg.eigvalsh(matrix)) >= -tol)
