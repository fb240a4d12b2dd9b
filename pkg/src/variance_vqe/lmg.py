"""Lipkin-Meshkov-Glick Hamiltonians.

Two constructions are provided: the (N+1)-dimensional quasispin matrix and
the full second-quantised Hamiltonian restricted to the N-particle sector
of 2N fermionic modes. The second one is an independent oracle for the
first.

Energies are in units of ``epsilon``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

MAX_FOCK_N = 6


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class LmgParams:
    N: int = 3
    epsilon: float = 1.0
    V: float = 0.5
    W: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")

    @property
    def j(self) -> float:
        return self.N / 2


def m_values(N: int) -> np.ndarray:
    """Ascending J_z eigenvalues -N/2 ... N/2."""
    j = N / 2
    return np.arange(N + 1) - j


def basis_phases(N: int) -> np.ndarray:
    """Real phase convention (-1)**floor(k/2) on the ascending-m basis index k.

    It flips the sign of every m -> m+/-2 element and leaves J_z and
    J_+J_- untouched, which gives negative pair-scattering couplings for
    positive V.
    """
    k = np.arange(N + 1)
    return np.where((k // 2) % 2 == 0, 1.0, -1.0)


def build_quasispin(params: LmgParams) -> np.ndarray:
    """Quasispin LMG matrix in the ascending-m basis.

    Diagonal: ``eps*m + W*(j(j+1) - m**2)``; ``(m, m+2)`` couplings:
    ``-V/2 * sqrt(j(j+1) - m(m+1)) * sqrt(j(j+1) - (m+1)(m+2))``.
    """
    N, eps, V, W = params.N, params.epsilon, params.V, params.W
    j = N / 2
    jj = j * (j + 1)
    m = m_values(N)
    h = np.diag(eps * m + W * (jj - m**2))
    s = basis_phases(N)
    for k in range(N - 1):
        mk = m[k]
        amp = np.sqrt(jj - mk * (mk + 1)) * np.sqrt(jj - (mk + 1) * (mk + 2))
        h[k + 2, k] = h[k, k + 2] = 0.5 * V * amp * s[k] * s[k + 2]
    return h


def _mode(p: int, sigma: int) -> int:
    # (p=1,-1), (p=1,+1), (p=2,-1), ... ; p is 1-based
    return 2 * (p - 1) + (sigma + 1) // 2


def _apply(ops, state: int):
    """Apply a product of ladder operators, rightmost first.

    ``ops`` is a sequence of ``(mode, dagger)``. Returns ``(sign, state)`` or
    None when the result vanishes. Signs follow the mode order: each
    operator picks up (-1) per occupied mode with a lower index.
    """
    sign = 1
    for mode, dagger in reversed(ops):
        bit = 1 << mode
        occupied = bool(state & bit)
        if occupied == dagger:
            return None
        if bin(state & (bit - 1)).count("1") % 2:
            sign = -sign
        state ^= bit
    return sign, state


def fock_basis(N: int) -> list[int]:
    """Occupation bitmasks over 2N modes with exactly N particles, ascending."""
    return [
        sum(1 << b for b in bits) for bits in itertools.combinations(range(2 * N), N)
    ]


def build_fock_sector(params: LmgParams, match_quasispin: bool = True) -> np.ndarray:
    """Second-quantised LMG Hamiltonian on the N-particle sector.

    Built term by term from the one-body level splitting and the two
    two-body sums (pair scattering V, exchange W) with operator order
    ``a+_{p,s} a+_{p',-s} a_{p',s} a_{p,-s}`` for the W term.

    Written in that order, the W sum equals ``W/2 (J+J- + J-J+ - N)``.
    With ``match_quasispin`` the constant ``W*N/2`` is added back so the
    spectrum contains the quasispin spectrum exactly; pass False for the
    literal operator.
    """
    N = params.N
    if N > MAX_FOCK_N:
        raise CapacityError(f"Fock sector for N={N} has dimension {comb(2 * N, N)}; max N is {MAX_FOCK_N}")
    eps, V, W = params.epsilon, params.V, params.W
    basis = fock_basis(N)
    index = {s: i for i, s in enumerate(basis)}
    dim = len(basis)
    h = np.zeros((dim, dim))
    particles = range(1, N + 1)
    sigmas = (-1, 1)

    for col, state in enumerate(basis):
        for p in particles:
            for sg in sigmas:
                if state >> _mode(p, sg) & 1:
                    h[col, col] += 0.5 * eps * sg
        for p, q, sg in itertools.product(particles, particles, sigmas):
            if V:
                ops = ((_mode(p, sg), True), (_mode(q, sg), True), (_mode(q, -sg), False), (_mode(p, -sg), False))
                res = _apply(ops, state)
                if res is not None:
                    h[index[res[1]], col] += 0.5 * V * res[0]
            if W:
                ops = ((_mode(p, sg), True), (_mode(q, -sg), True), (_mode(q, sg), False), (_mode(p, -sg), False))
                res = _apply(ops, state)
                if res is not None:
                    h[index[res[1]], col] += 0.5 * W * res[0]
    if match_quasispin:
        h += 0.5 * W * N * np.eye(dim)
    return h
