"""Statevector simulation of the two-parameter ansatz and shot sampling.

Amplitudes are indexed with qubit 0 as the most-significant bit, so the
bitstring ``"10"`` is basis index 2 and means qubit 0 reads 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .pauli import PauliError, PauliSum, check_letters

NORM_TOL = 1e-12


class Gate(NamedTuple):
    kind: str  # "ry", "cnot", "h", "sdg", "x"
    qubits: tuple[int, ...]
    theta: float = 0.0


def ry(theta: float, target: int) -> Gate:
    return Gate("ry", (target,), float(theta))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def hadamard(target: int) -> Gate:
    return Gate("h", (target,))


def sdg(target: int) -> Gate:
    return Gate("sdg", (target,))


def xgate(target: int) -> Gate:
    return Gate("x", (target,))


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def build_ansatz(theta: Sequence[float]) -> list[Gate]:
    """Ry(theta1) on qubit 1, CNOT 1 -> 0, Ry(theta2) on qubit 0.

    At theta1 = 0 the output spans {|00>, |10>} and at theta1 = pi it spans
    {|01>, |11>}, so every real eigenvector of a Hamiltonian that is
    block-diagonal in those two pairs is reachable.
    """
    t1, t2 = theta
    return [ry(t1, 1), cnot(1, 0), ry(t2, 0)]


def _check_gate(g: Gate, n: int) -> None:
    if any(not 0 <= q < n for q in g.qubits):
        raise IndexError(f"{g.kind} on qubits {g.qubits} out of range for {n} qubits")
    if g.kind == "cnot" and g.qubits[0] == g.qubits[1]:
        raise ValueError("CNOT control and target must differ")


def _apply_1q(psi: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    t = psi.reshape((2,) * n)
    t = np.tensordot(u, t, axes=([1], [q]))
    return np.moveaxis(t, 0, q).reshape(-1)


def apply_gate(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    _check_gate(g, n)
    if g.kind == "ry":
        return _apply_1q(psi, _ry_matrix(g.theta), g.qubits[0], n)
    if g.kind == "h":
        return _apply_1q(psi, _H, g.qubits[0], n)
    if g.kind == "sdg":
        return _apply_1q(psi, _SDG, g.qubits[0], n)
    if g.kind == "x":
        return _apply_1q(psi, _X, g.qubits[0], n)
    if g.kind == "cnot":
        c, t = g.qubits
        out = psi.reshape((2,) * n).copy()
        sel = [slice(None)] * n
        sel[c] = 1
        sub = out[tuple(sel)].copy()
        # the target axis index shifts down by one when control precedes it
        out[tuple(sel)] = np.flip(sub, axis=t - (c < t))
        return out.reshape(-1)
    raise ValueError(f"unknown gate kind {g.kind!r}")


def run(circuit: Sequence[Gate], n_qubits: int) -> np.ndarray:
    """Apply ``circuit`` left to right to |0...0>."""
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[0] = 1.0
    for g in circuit:
        psi = apply_gate(psi, g, n_qubits)
    return psi


def ansatz_state(theta: Sequence[float]) -> np.ndarray:
    return run(build_ansatz(theta), 2)


def n_qubits_of(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if 2**n != state.size or n < 1:
        raise ValueError(f"state length {state.size} is not a power of two")
    return n


def expectation(state: np.ndarray, obs: PauliSum) -> float:
    """Exact <psi|O|psi>, imaginary residue discarded."""
    n = n_qubits_of(state)
    if n != obs.n_qubits:
        raise ValueError(f"state has {n} qubits, observable has {obs.n_qubits}")
    return float(np.real(np.vdot(state, obs.to_matrix() @ state)))


def basis_rotation(string: str) -> list[Gate]:
    """Gates mapping the eigenbasis of ``string`` onto the Z basis."""
    gates = []
    for q, c in enumerate(string):
        if c == "X":
            gates.append(hadamard(q))
        elif c == "Y":
            gates += [sdg(q), hadamard(q)]
    return gates


@dataclass
class ShotHistogram:
    n_qubits: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for b, c in self.counts.items():
            if len(b) != self.n_qubits or set(b) - {"0", "1"}:
                raise ValueError(f"bad bitstring {b!r} for {self.n_qubits} qubits")
            if c < 0:
                raise ValueError(f"negative count for {b!r}")

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_indices(cls, outcomes: np.ndarray, n_qubits: int) -> ShotHistogram:
        tally = np.bincount(np.asarray(outcomes, dtype=np.int64), minlength=2**n_qubits)
        return cls.from_vector(tally, n_qubits)

    @classmethod
    def from_vector(cls, tally, n_qubits: int) -> ShotHistogram:
        return cls(
            n_qubits,
            {format(i, f"0{n_qubits}b"): int(c) for i, c in enumerate(tally) if c},
        )

    def to_vector(self) -> np.ndarray:
        v = np.zeros(2**self.n_qubits, dtype=np.int64)
        for b, c in self.counts.items():
            v[int(b, 2)] += c
        return v

    def to_indices(self) -> np.ndarray:
        """Per-shot outcome indices, grouped in ascending basis order."""
        v = self.to_vector()
        return np.repeat(np.arange(v.size), v)

    def frequencies(self) -> np.ndarray:
        v = self.to_vector().astype(float)
        return v / v.sum()


def sample(state: np.ndarray, shots: int, rng) -> ShotHistogram:
    """Draw ``shots`` computational-basis outcomes by inverting the CDF."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng(rng)
    n = n_qubits_of(state)
    cdf = np.cumsum(np.abs(state) ** 2)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return ShotHistogram.from_indices(np.minimum(idx, cdf.size - 1), n)


def parity_signs(string: str) -> np.ndarray:
    """(-1)**(parity of measured bits at non-identity positions), per basis index."""
    n = len(string)
    mask = sum(1 << (n - 1 - q) for q, c in enumerate(string) if c != "I")
    idx = np.arange(2**n)
    parity = np.array([bin(i & mask).count("1") & 1 for i in idx])
    return 1.0 - 2.0 * parity


def parity_mean(dist, string: str) -> float:
    """Mean parity under a histogram or a probability vector."""
    if isinstance(dist, ShotHistogram):
        dist = dist.frequencies()
    return float(np.dot(parity_signs(string), dist))


def rotated_state(state: np.ndarray, string: str) -> np.ndarray:
    n = n_qubits_of(state)
    for g in basis_rotation(string):
        state = apply_gate(state, g, n)
    return state


def measure_state(state: np.ndarray, string: str, shots: int, seed=None) -> float:
    """Shot estimate of a non-identity Pauli string on ``state``.

    The identity string is rejected; its expectation is exactly 1 and
    callers add its coefficient analytically.
    """
    check_letters(string)
    if set(string) == {"I"}:
        raise PauliError("identity string has no measurement; handle it analytically")
    if len(string) != n_qubits_of(state):
        raise ValueError("string width does not match state")
    hist = sample(rotated_state(state, string), shots, seed)
    return parity_mean(hist, string)


def measure_pauli(theta: Sequence[float], string: str, shots: int, seed=None) -> float:
    """Shot estimate of a Pauli string on the ansatz state at ``theta``."""
    return measure_state(ansatz_state(theta), string, shots, seed)
