"""
Truncated bosonic operators and Gaussian-gate generators.

Gate conventions match the phase-space engine: on expectation values
beamsplitter(θ) maps a_i → cos θ·a_i + sin θ·a_j, squeeze(r) maps x → e^r·x and
two_mode_squeeze(r) maps a₁ → cosh r·a₁ + sinh r·a₂†.
"""

import math
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from cvwitness.base import InvalidParameterError


def annihilation(dim: int) -> sp.csr_matrix:
    """Annihilation operator a on Fock levels 0..dim−1."""
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr", dtype=complex)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense x = (a + a†)/√2 and p = −i(a − a†)/√2."""
    a = annihilation(dim).toarray()
    ad = a.conj().T
    return (a + ad) / math.sqrt(2), -1j * (a - ad) / math.sqrt(2)


def embed(op: sp.spmatrix, mode: int, n_modes: int, dim: int) -> sp.csr_matrix:
    """Single-mode operator acting on ``mode`` of an n-mode product space (mode 0 outermost)."""
    if not 0 <= mode < n_modes:
        raise InvalidParameterError(f"Mode index {mode} out of range for {n_modes} modes")
    factors = [sp.identity(dim, dtype=complex, format="csr")] * n_modes
    factors[mode] = op
    out = factors[0]
    for f in factors[1:]:
        out = sp.kron(out, f, format="csr")
    return out


def squeeze_generator(r: float, mode: int, n_modes: int, dim: int) -> sp.csr_matrix:
    """G with U = exp(G) = exp(r/2·(a†² − a²))."""
    a = embed(annihilation(dim), mode, n_modes, dim)
    ad = a.conj().T
    return 0.5 * r * (ad @ ad - a @ a)


def beamsplitter_generator(theta: float, i: int, j: int, n_modes: int, dim: int) -> sp.csr_matrix:
    """G with U = exp(θ(a_i†a_j − a_i a_j†))."""
    a_i = embed(annihilation(dim), i, n_modes, dim)
    a_j = embed(annihilation(dim), j, n_modes, dim)
    return theta * (a_i.conj().T @ a_j - a_i @ a_j.conj().T)


def two_mode_squeeze_generator(r: float, i: int, j: int, n_modes: int, dim: int) -> sp.csr_matrix:
    """G with U = exp(r(a_i†a_j† − a_i a_j))."""
    a_i = embed(annihilation(dim), i, n_modes, dim)
    a_j = embed(annihilation(dim), j, n_modes, dim)
    return r * (a_i.conj().T @ a_j.conj().T - a_i @ a_j)


def loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """
    Kraus operators of the pure-loss channel.

    K_l = Σ_n √C(n, l)·η^{(n−l)/2}·(1−η)^{l/2}·|n−l⟩⟨n|, for l = 0..dim−1.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"Loss efficiency must lie in [0, 1], got {eta}")
    kraus = []
    for lost in range(dim):
        k = np.zeros((dim, dim))
        for n in range(lost, dim):
            if eta == 0.0 and n != lost:
                continue
            if eta == 1.0 and lost > 0:
                continue
            log_amp = 0.5 * (gammaln(n + 1) - gammaln(lost + 1) - gammaln(n - lost + 1))
            if n > lost:
                log_amp += 0.5 * (n - lost) * math.log(eta)
            if lost > 0:
                log_amp += 0.5 * lost * math.log1p(-eta)
            k[n - lost, n] = math.exp(log_amp)
        if np.any(k):
            kraus.append(k)
    return kraus


def weyl_symmetrized(x: np.ndarray, p: np.ndarray, a: int, b: int) -> np.ndarray:
    """
    Weyl-ordered x^a p^b: the average of all distinct orderings of the a + b factors.

    Raises:
        InvalidParameterError: If a + b exceeds 4
    """
    if a < 0 or b < 0 or a + b > 4:
        raise InvalidParameterError(f"Weyl monomial x^{a} p^{b} has total order above 4")
    dim = x.shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    orderings = list(combinations(range(a + b), a))
    for x_positions in orderings:
        product = np.eye(dim, dtype=complex)
        for position in range(a + b):
            product = product @ (x if position in x_positions else p)
        total += product
    return total / len(orderings)


def commutator_sides(k: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Both sides of [x^k, p^k] = i·k·Σ_{m=0}^{k−1} x^{k−1−m} p^{k−1} x^m on a truncated space.

    Returns:
        (left-hand side, right-hand side) as dense matrices
    """
    x, p = quadratures(dim)
    xk = np.linalg.matrix_power(x, k)
    pk = np.linalg.matrix_power(p, k)
    lhs = xk @ pk - pk @ xk
    pk1 = np.linalg.matrix_power(p, k - 1)
    rhs = sum(
        np.linalg.matrix_power(x, k - 1 - m) @ pk1 @ np.linalg.matrix_power(x, m) for m in range(k)
    )
    return lhs, 1j * k * rhs
