"""Estimator-style front end to the variance VQE."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .encoding import PaddingPolicy, check_hermitian, decompose, spectrum
from .engine import EstimatorConfig, find_spectrum, moments
from .lmg import LmgParams, build_quasispin
from .mitigation import ReadoutNoiseModel
from .pauli import PauliSum


def check_hamiltonian(h, padding: PaddingPolicy = PaddingPolicy()) -> PauliSum:
    """Coerce a PauliSum, LmgParams or dense Hermitian matrix to a real PauliSum."""
    if isinstance(h, LmgParams):
        h = build_quasispin(h)
    if not isinstance(h, PauliSum):
        h = decompose(check_hermitian(h), padding)
    if not h.is_real():
        raise ValueError("Hamiltonian must have real Pauli coefficients")
    return h


def check_thetas(thetas) -> np.ndarray:
    """Validate an ``(n_points, 2)`` array of finite angles; a single pair is accepted."""
    a = np.asarray(thetas, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ValueError(f"expected angles of shape (n, 2), got {np.shape(thetas)}")
    if not np.all(np.isfinite(a)):
        raise ValueError("angles must be finite")
    return a


class VarianceVQE(BaseEstimator):
    """Find every eigenvalue reachable by the two-parameter ansatz.

    ``fit`` runs a multistart variance minimisation on the Hamiltonian and
    stores the merged levels. ``predict`` and ``variance`` evaluate the
    fitted Hamiltonian at arbitrary angle pairs.

    Parameters
    ----------
    mode : {"exact", "shots"}
    shots : int
        Samples per measured Pauli string in shot mode.
    seed : int or None
        Root seed for all sampling.
    grid : int
        Starts per axis of the multistart grid.
    noise_p01, noise_p10 : float
        Uniform readout error probabilities; zero disables noise.
    mitigate : bool
        Invert the readout confusion matrix before averaging.
    objective : {"variance", "energy"}
        ``"energy"`` gives ordinary ground-state VQE, for comparison.

    Attributes
    ----------
    hamiltonian_ : PauliSum
    report_ : SpectrumReport
    energies_, variances_ : ndarray
    thetas_ : ndarray of shape (n_levels, 2)
    exact_energies_ : ndarray
    complete_ : bool
    """

    def __init__(
        self,
        mode="exact",
        shots=20000,
        seed=0,
        grid=8,
        noise_p01=0.0,
        noise_p10=0.0,
        mitigate=False,
        objective="variance",
        max_evals=500,
        dedup_radius=0.1,
    ):
        self.mode = mode
        self.shots = shots
        self.seed = seed
        self.grid = grid
        self.noise_p01 = noise_p01
        self.noise_p10 = noise_p10
        self.mitigate = mitigate
        self.objective = objective
        self.max_evals = max_evals
        self.dedup_radius = dedup_radius

    def _config(self, n_qubits: int) -> EstimatorConfig:
        noise = None
        if self.noise_p01 or self.noise_p10:
            noise = ReadoutNoiseModel.uniform(n_qubits, self.noise_p01, self.noise_p10)
        return EstimatorConfig(
            mode=self.mode, shots=self.shots, seed=self.seed, noise=noise, mitigate=self.mitigate
        )

    def fit(self, H, y=None):
        h = check_hamiltonian(H)
        cfg = self._config(h.n_qubits)
        report = find_spectrum(
            h,
            cfg,
            grid=self.grid,
            objective=self.objective,
            dedup_radius=self.dedup_radius,
            max_evals=self.max_evals,
        )
        self.hamiltonian_ = h
        self.config_ = cfg
        self.report_ = report
        self.energies_ = report.energies
        self.variances_ = np.array([r.variance for r in report.levels])
        self.thetas_ = np.array([r.theta for r in report.levels]).reshape(-1, 2)
        self.exact_energies_ = spectrum(h.to_matrix())
        self.complete_ = report.complete
        return self

    def _moments(self, thetas):
        check_is_fitted(self, "hamiltonian_")
        a = check_thetas(thetas)
        h = self.hamiltonian_
        h2 = h.square()
        rng = self.config_.rng()
        return np.array([moments(t, h, h2, self.config_, rng) for t in a])

    def predict(self, thetas) -> np.ndarray:
        """Energy estimate at each angle pair."""
        return self._moments(thetas)[:, 0]

    def variance(self, thetas) -> np.ndarray:
        return self._moments(thetas)[:, 1]
