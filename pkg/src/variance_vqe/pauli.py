"""Pauli strings and real-weighted Pauli sums.

Qubit 0 is the leftmost letter of a string and the leftmost tensor factor,
i.e. the most-significant bit of a computational basis index.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, NamedTuple

import numpy as np

LETTERS = "IXYZ"
DROP_TOL = 1e-12

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Phases are tracked as k in {0,1,2,3} meaning i**k.
_PHASE_VALUES = (1 + 0j, 1j, -1 + 0j, -1j)

# (a, b) -> (phase tag, letter) for the single-qubit product a @ b
_PRODUCT: dict[tuple[str, str], tuple[int, str]] = {}
for _a in LETTERS:
    _PRODUCT[("I", _a)] = (0, _a)
    _PRODUCT[(_a, "I")] = (0, _a)
    _PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (1, _c)
    _PRODUCT[(_b, _a)] = (3, _c)


class PauliError(ValueError):
    """Malformed Pauli string or mismatched qubit counts."""


def check_letters(letters: str) -> str:
    if not isinstance(letters, str) or len(letters) == 0:
        raise PauliError(f"Pauli string must be a non-empty str, got {letters!r}")
    bad = set(letters) - set(LETTERS)
    if bad:
        raise PauliError(f"invalid Pauli letters {sorted(bad)} in {letters!r}")
    return letters


def multiply_strings(p: str, q: str) -> tuple[complex, str]:
    """Product of two Pauli strings.

    Returns ``(phase, r)`` with ``P @ Q == phase * R`` and ``phase`` one of
    ``1, -1, 1j, -1j``.
    """
    check_letters(p)
    check_letters(q)
    if len(p) != len(q):
        raise PauliError(f"length mismatch: {p!r} ({len(p)}) vs {q!r} ({len(q)})")
    tag = 0
    out = []
    for a, b in zip(p, q):
        k, c = _PRODUCT[(a, b)]
        tag += k
        out.append(c)
    return _PHASE_VALUES[tag % 4], "".join(out)


def string_matrix(letters: str) -> np.ndarray:
    """Dense matrix of a single Pauli string."""
    check_letters(letters)
    m = _MATS[letters[0]]
    for c in letters[1:]:
        m = np.kron(m, _MATS[c])
    return m


def commutes(p: str, q: str) -> bool:
    return sum(a != "I" and b != "I" and a != b for a, b in zip(p, q)) % 2 == 0


class PauliTerm(NamedTuple):
    coeff: complex
    string: str


class PauliSum:
    """Canonical weighted sum of Pauli strings.

    Terms are sorted by string, duplicates are merged and coefficients with
    magnitude below ``DROP_TOL`` are dropped. Instances are immutable.
    """

    __slots__ = ("_terms", "_n", "_matrix")

    def __init__(self, terms: Iterable[PauliTerm | tuple[complex, str]] = (), n_qubits: int | None = None):
        acc: dict[str, complex] = {}
        n = n_qubits
        for coeff, string in terms:
            check_letters(string)
            if n is None:
                n = len(string)
            elif len(string) != n:
                raise PauliError(f"term {string!r} has {len(string)} qubits, expected {n}")
            acc[string] = acc.get(string, 0j) + complex(coeff)
        if n is None:
            raise PauliError("cannot infer qubit count of an empty PauliSum; pass n_qubits")
        self._n = n
        self._terms = tuple(
            PauliTerm(c, s) for s, c in sorted(acc.items()) if abs(c) >= DROP_TOL
        )
        self._matrix = None

    @classmethod
    def from_dict(cls, mapping: Mapping[str, complex], n_qubits: int | None = None) -> PauliSum:
        return cls(((c, s) for s, c in mapping.items()), n_qubits=n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> PauliSum:
        return cls([(coeff, "I" * n_qubits)])

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        return self._terms

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def strings(self) -> tuple[str, ...]:
        return tuple(t.string for t in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __getitem__(self, string: str) -> complex:
        for c, s in self._terms:
            if s == string:
                return c
        return 0j

    def as_dict(self) -> dict[str, complex]:
        return {s: c for c, s in self._terms}

    def canonicalize(self) -> PauliSum:
        # construction already canonicalises
        return PauliSum(self._terms, n_qubits=self._n)

    def is_real(self, tol: float = DROP_TOL) -> bool:
        return all(abs(c.imag) < tol for c, _ in self._terms)

    def real_coeffs(self) -> dict[str, float]:
        if not self.is_real():
            raise PauliError("PauliSum has complex coefficients")
        return {s: c.real for c, s in self._terms}

    def identity_coeff(self) -> float:
        return self["I" * self._n].real

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, self._terms))

    def __add__(self, other: PauliSum) -> PauliSum:
        self._check_width(other)
        return PauliSum(self._terms + other._terms, n_qubits=self._n)

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> PauliSum:
        return PauliSum(((scalar * c, s) for c, s in self._terms), n_qubits=self._n)

    __rmul__ = __mul__

    def __neg__(self) -> PauliSum:
        return -1.0 * self

    def __matmul__(self, other: PauliSum) -> PauliSum:
        self._check_width(other)
        out = []
        for ci, si in self._terms:
            for cj, sj in other._terms:
                phase, r = multiply_strings(si, sj)
                out.append((ci * cj * phase, r))
        return PauliSum(out, n_qubits=self._n)

    def square(self) -> PauliSum:
        return self @ self

    def allclose(self, other: PauliSum, atol: float = 1e-12) -> bool:
        self._check_width(other)
        keys = set(self.as_dict()) | set(other.as_dict())
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def to_matrix(self) -> np.ndarray:
        if self._matrix is None:
            dim = 2**self._n
            m = np.zeros((dim, dim), dtype=complex)
            for c, s in self._terms:
                m += c * string_matrix(s)
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def _check_width(self, other: PauliSum) -> None:
        if self._n != other._n:
            raise PauliError(f"qubit count mismatch: {self._n} vs {other._n}")

    def __repr__(self) -> str:
        body = " ".join(f"{_fmt_coeff(c)}*{s}" for c, s in self._terms) or "0"
        return f"PauliSum({body})"

    def to_text(self) -> str:
        """One term per line, ``<coeff> <letters>``."""
        return "".join(f"{_fmt_coeff(c)} {s}\n" for c, s in self._terms)

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> PauliSum:
        terms = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PauliError(f"line {lineno}: expected '<coeff> <letters>', got {raw!r}")
            try:
                coeff = _parse_coeff(parts[0])
            except ValueError:
                raise PauliError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
            terms.append((coeff, check_letters(parts[1].upper())))
        return cls(terms, n_qubits=n_qubits)


def square(h: PauliSum) -> PauliSum:
    return h.square()


def to_matrix(h: PauliSum) -> np.ndarray:
    return h.to_matrix()


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0:
        return repr(float(c.real))
    return repr(complex(c)).strip("()")


_COMPLEX_RE = re.compile(r"[ij]$")


def _parse_coeff(token: str) -> complex:
    if _COMPLEX_RE.search(token):
        return complex(token.replace("i", "j"))
    return complex(float(token))
