"""Readout bit-flip noise on shot histograms and its inversion."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .simulator import ShotHistogram

COND_LIMIT = 1e12


class MitigationError(ValueError):
    pass


@dataclass(frozen=True)
class ReadoutNoiseModel:
    """Independent per-qubit readout confusion.

    ``p01[k]`` is the probability that qubit ``k`` prepared in 0 reads 1,
    ``p10[k]`` that a 1 reads 0.
    """

    p01: tuple[float, ...]
    p10: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "p01", tuple(float(p) for p in self.p01))
        object.__setattr__(self, "p10", tuple(float(p) for p in self.p10))
        if len(self.p01) != len(self.p10):
            raise ValueError("p01 and p10 must have one entry per qubit")
        for p in self.p01 + self.p10:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"readout error probability {p} outside [0, 1]")

    @classmethod
    def uniform(cls, n_qubits: int, p01: float = 0.02, p10: float = 0.02) -> ReadoutNoiseModel:
        return cls((p01,) * n_qubits, (p10,) * n_qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.p01)

    @property
    def is_identity(self) -> bool:
        return not any(self.p01) and not any(self.p10)

    def qubit_matrix(self, k: int) -> np.ndarray:
        """2x2 confusion matrix ``[observed, true]`` for qubit ``k``."""
        a, b = self.p01[k], self.p10[k]
        return np.array([[1 - a, b], [a, 1 - b]])

    def then(self, other: ReadoutNoiseModel) -> ReadoutNoiseModel:
        """Model equivalent to applying ``self`` and then ``other``."""
        if other.n_qubits != self.n_qubits:
            raise ValueError("models act on different qubit counts")
        mats = [other.qubit_matrix(k) @ self.qubit_matrix(k) for k in range(self.n_qubits)]
        return ReadoutNoiseModel(tuple(m[1, 0] for m in mats), tuple(m[0, 1] for m in mats))


def calibration_matrix(model: ReadoutNoiseModel) -> np.ndarray:
    """Column-stochastic ``A[observed, true]`` over all 2**n bitstrings.

    Qubit 0 is the leftmost Kronecker factor, matching basis indexing.
    """
    return reduce(np.kron, (model.qubit_matrix(k) for k in range(model.n_qubits)))


def corrupt(hist: ShotHistogram, model: ReadoutNoiseModel, seed=None) -> ShotHistogram:
    """Flip each bit of each recorded shot with the model's probabilities."""
    if hist.n_qubits != model.n_qubits:
        raise ValueError(f"histogram has {hist.n_qubits} qubits, model has {model.n_qubits}")
    if model.is_identity:
        return ShotHistogram(hist.n_qubits, dict(hist.counts))
    rng = np.random.default_rng(seed)
    n = hist.n_qubits
    outcomes = hist.to_indices()
    u = rng.random((outcomes.size, n))
    for k in range(n):
        shift = n - 1 - k
        bit = (outcomes >> shift) & 1
        p = np.where(bit == 1, model.p10[k], model.p01[k])
        outcomes = outcomes ^ ((u[:, k] < p).astype(np.int64) << shift)
    return ShotHistogram.from_indices(outcomes, n)


def mitigate(hist: ShotHistogram, a: np.ndarray) -> np.ndarray:
    """Invert the calibration matrix on the empirical frequencies.

    The linear solve can produce small negative quasi-probabilities; they are
    clipped to zero and the vector renormalised, which biases the estimate
    slightly.
    """
    a = np.asarray(a, dtype=float)
    dim = 2**hist.n_qubits
    if a.shape != (dim, dim):
        raise ValueError(f"calibration matrix shape {a.shape} does not match {hist.n_qubits} qubits")
    if np.linalg.cond(a) > COND_LIMIT:
        raise MitigationError("calibration matrix is singular or ill-conditioned")
    x = np.linalg.solve(a, hist.frequencies())
    x = np.clip(x, 0.0, None)
    total = x.sum()
    if total <= 0:
        raise MitigationError("mitigated distribution has no positive mass")
    return x / total
