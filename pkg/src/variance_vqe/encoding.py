"""Reduced-qubit encoding of dense Hermitian matrices as Pauli sums."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .pauli import DROP_TOL, LETTERS, PauliSum, string_matrix

HERMITIAN_TOL = 1e-10


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PaddingPolicy:
    """How to fill the unused basis states when ``dim`` is not a power of two.

    ``zero`` leaves them at zero energy. ``penalty`` puts them on the diagonal
    at ``penalty_value``; when ``penalty_value`` is None it defaults to
    ``10 * max|entry| * dim`` (at least 1.0), far above the physical block.
    """

    mode: Literal["zero", "penalty"] = "penalty"
    penalty_value: float | None = None

    def __post_init__(self):
        if self.mode not in ("zero", "penalty"):
            raise ValidationError(f"unknown padding mode {self.mode!r}")

    def value_for(self, h: np.ndarray) -> float:
        if self.mode == "zero":
            return 0.0
        if self.penalty_value is not None:
            return float(self.penalty_value)
        return max(10.0 * float(np.max(np.abs(h))) * h.shape[0], 1.0)


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate a square Hermitian matrix and return it as a complex array."""
    a = np.asarray(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValidationError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains non-finite entries")
    err = np.max(np.abs(a - a.conj().T))
    if err >= tol:
        raise ValidationError(f"matrix is not Hermitian (max |H - H^dag| = {err:.3g})")
    return a


def n_qubits_for(dim: int) -> int:
    return max(1, math.ceil(math.log2(dim)))


def pad(h, policy: PaddingPolicy = PaddingPolicy()) -> np.ndarray:
    a = check_hermitian(h)
    dim = a.shape[0]
    full = 2 ** n_qubits_for(dim)
    if full == dim:
        return a.copy()
    out = np.zeros((full, full), dtype=complex)
    out[:dim, :dim] = a
    fill = policy.value_for(a)
    for k in range(dim, full):
        out[k, k] = fill
    return out


def decompose(h, policy: PaddingPolicy = PaddingPolicy()) -> PauliSum:
    """Expand ``h`` (padded to 2**n) as ``sum_P Tr(P h) / 2**n * P``.

    All 4**n strings are visited in lexicographic ``IXYZ`` order so the
    summation order, and hence the floating-point result, is fixed.
    """
    hp = pad(h, policy)
    n = n_qubits_for(hp.shape[0])
    dim = 2**n
    terms = []
    for letters in itertools.product(LETTERS, repeat=n):
        s = "".join(letters)
        # Tr(P h) = sum_ij P_ji h_ij ; Pauli strings are Hermitian so P_ji = conj(P_ij)
        coeff = np.sum(string_matrix(s).conj() * hp) / dim
        if abs(coeff) >= DROP_TOL:
            if abs(coeff.imag) < DROP_TOL:
                coeff = complex(coeff.real)
            terms.append((coeff, s))
    return PauliSum(terms, n_qubits=n)


def spectrum(h) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(check_hermitian(h))


def format_matrix(h, header: str = "") -> str:
    """Matrix file text: ``dim`` line then ``dim`` rows of ``a+bi`` entries.

    ``header`` lines are written as leading ``#`` comments.
    """
    a = np.asarray(h, dtype=complex)
    lines = [f"# {line}" for line in header.splitlines()]
    lines.append(str(a.shape[0]))
    for row in a:
        lines.append(" ".join(f"{float(z.real)!r}{float(z.imag):+}i" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValidationError("empty matrix file")
    try:
        dim = int(rows[0][0])
    except ValueError:
        raise ValidationError(f"first line must be the dimension, got {rows[0]!r}") from None
    body = rows[1:]
    if len(rows[0]) != 1 or len(body) != dim or any(len(r) != dim for r in body):
        raise ValidationError(f"expected {dim} rows of {dim} entries")
    try:
        return np.array([[_parse_entry(tok) for tok in r] for r in body], dtype=complex)
    except ValueError as exc:
        raise ValidationError(f"bad matrix entry: {exc}") from None


def _parse_entry(tok: str) -> complex:
    tok = tok.strip()
    if tok.endswith("i") or tok.endswith("j"):
        return complex(tok[:-1] + "j")
    return complex(float(tok))
