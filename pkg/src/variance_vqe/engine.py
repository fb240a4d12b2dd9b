"""Energy and variance costs, Nelder-Mead minimisation and multistart search.

Shot mode measures every distinct non-identity Pauli string of ``H`` and
``H**2`` once per evaluation, ``shots`` samples each, and combines the
parity means linearly. The variance uses the plug-in estimator
``<H^2>_est - <H>_est**2``, which is biased low by ``Var(<H>_est)``
(order ``1/shots``).

Seeds for multistart runs are split from the root seed as::

    SeedSequence(root).spawn(n_starts)[i].generate_state(2, np.uint64)

giving the optimisation seed and the fresh re-check seed of start ``i``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .mitigation import ReadoutNoiseModel, calibration_matrix, corrupt, mitigate
from .pauli import PauliSum
from .simulator import ansatz_state, expectation, parity_mean, rotated_state, sample

TWO_PI = 2 * math.pi
SIMPLEX_STEP = 0.3
EXACT_TOL = 1e-6
SHOT_TOL = 1e-2
MAX_EVALS = 500
EXACT_ACCEPT = 1e-8
SHOT_ACCEPT = 0.05
DEDUP_RADIUS = 0.1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    mode: Literal["exact", "shots"] = "exact"
    shots: int = 20000
    seed: int | None = 0
    noise: ReadoutNoiseModel | None = None
    mitigate: bool = False

    def __post_init__(self):
        if self.mode not in ("exact", "shots"):
            raise ConfigError(f"mode must be 'exact' or 'shots', got {self.mode!r}")
        if self.mode == "shots" and (int(self.shots) != self.shots or self.shots <= 0):
            raise ConfigError(f"shots must be a positive integer, got {self.shots!r}")
        if self.mitigate and self.noise is None:
            raise ConfigError("mitigation requires a readout noise model")

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def rng(self):
        return np.random.default_rng(self.seed)

    def to_dict(self) -> dict:
        d = {"mode": self.mode, "shots": self.shots, "seed": self.seed, "mitigate": self.mitigate}
        d["noise"] = None if self.noise is None else {"p01": list(self.noise.p01), "p10": list(self.noise.p10)}
        return d


@dataclass
class VqeResult:
    theta: tuple[float, float]
    energy: float
    variance: float
    converged: bool
    evaluations: int
    seed: int | None = None
    start: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "theta": list(self.theta),
            "energy": self.energy,
            "variance": self.variance,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "seed": self.seed,
            "start": None if self.start is None else list(self.start),
        }


@dataclass
class SpectrumReport:
    levels: list[VqeResult]
    dedup_radius: float
    expected_levels: int
    candidates: list[VqeResult] = field(default_factory=list)

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.levels])

    @property
    def complete(self) -> bool:
        return len(self.levels) >= self.expected_levels


@dataclass
class MinimizeResult:
    theta: tuple[float, float]
    value: float
    converged: bool
    evaluations: int


def wrap_angles(theta: Sequence[float]) -> tuple[float, float]:
    return tuple(float(t % TWO_PI) for t in theta)


def _check_two_qubit(h: PauliSum) -> None:
    if h.n_qubits != 2:
        raise ConfigError(f"the two-parameter ansatz acts on 2 qubits; Hamiltonian has {h.n_qubits}")


def check_square(h: PauliSum, h2: PauliSum, atol: float = 1e-9) -> None:
    m = h.to_matrix()
    if h2.n_qubits != h.n_qubits or not np.allclose(h2.to_matrix(), m @ m, atol=atol):
        raise ConfigError("h2 is not the square of h")


@lru_cache(maxsize=32)
def _calibration(model: ReadoutNoiseModel) -> np.ndarray:
    return calibration_matrix(model)


def estimate_strings(state: np.ndarray, strings, cfg: EstimatorConfig, rng) -> dict[str, float]:
    """Shot estimates of each distinct non-identity string, in sorted order."""
    out = {}
    for s in sorted(set(strings)):
        if set(s) == {"I"}:
            out[s] = 1.0
            continue
        hist = sample(rotated_state(state, s), cfg.shots, rng)
        if cfg.noise is not None:
            hist = corrupt(hist, cfg.noise, rng)
            if cfg.mitigate:
                out[s] = parity_mean(mitigate(hist, _calibration(cfg.noise)), s)
                continue
        out[s] = parity_mean(hist, s)
    return out


def _combine(h: PauliSum, est: dict[str, float]) -> float:
    return sum(c.real * est[s] for c, s in h.terms)


def moments(theta, h: PauliSum, h2: PauliSum, cfg: EstimatorConfig, rng=None) -> tuple[float, float]:
    """``(<H>, <H^2> - <H>^2)`` at ``theta`` under the configured estimator."""
    _check_two_qubit(h)
    state = ansatz_state(theta)
    if cfg.is_exact:
        e = expectation(state, h)
        e2 = expectation(state, h2)
    else:
        rng = cfg.rng() if rng is None else rng
        est = estimate_strings(state, h.strings + h2.strings, cfg, rng)
        e = _combine(h, est)
        e2 = _combine(h2, est)
    return e, e2 - e * e


def energy_cost(theta, h: PauliSum, cfg: EstimatorConfig = EstimatorConfig(), rng=None) -> float:
    _check_two_qubit(h)
    if not h.is_real():
        raise ConfigError("Hamiltonian must have real coefficients")
    state = ansatz_state(theta)
    if cfg.is_exact:
        return expectation(state, h)
    rng = cfg.rng() if rng is None else rng
    return _combine(h, estimate_strings(state, h.strings, cfg, rng))


def variance_cost(theta, h: PauliSum, h2: PauliSum | None = None, cfg: EstimatorConfig = EstimatorConfig(), rng=None) -> float:
    if h2 is None:
        h2 = h.square()
    else:
        check_square(h, h2)
    return moments(theta, h, h2, cfg, rng)[1]


def minimize(
    cost: Callable[[np.ndarray], float],
    start: Sequence[float],
    tol: float = EXACT_TOL,
    step: float = SIMPLEX_STEP,
    max_evals: int = MAX_EVALS,
) -> MinimizeResult:
    """Nelder-Mead from ``start`` with an axis-aligned initial simplex.

    Converged means every vertex lies within ``tol`` (per coordinate) of
    the best one. Running out of evaluations is reported through
    ``converged=False``, not raised.
    """
    x0 = np.asarray(start, dtype=float)
    simplex = np.vstack([x0, x0 + [step, 0.0], x0 + [0.0, step]])
    res = _scipy_minimize(
        cost,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": tol,
            "fatol": np.inf,
            "maxfev": max_evals,
            "maxiter": max_evals,
        },
    )
    return MinimizeResult(
        theta=(float(res.x[0]), float(res.x[1])),
        value=float(res.fun),
        converged=bool(res.status == 0),
        evaluations=int(res.nfev),
    )


def vqe(
    h: PauliSum,
    start: Sequence[float],
    cfg: EstimatorConfig = EstimatorConfig(),
    objective: Literal["variance", "energy"] = "variance",
    rng=None,
    max_evals: int = MAX_EVALS,
) -> VqeResult:
    """One local VQE run; ``energy``/``variance`` are evaluated at the optimum."""
    _check_two_qubit(h)
    h2 = h.square()
    rng = cfg.rng() if rng is None else rng
    if objective == "variance":
        fn = lambda t: moments(t, h, h2, cfg, rng)[1]  # noqa: E731
    elif objective == "energy":
        fn = lambda t: energy_cost(t, h, cfg, rng)  # noqa: E731
    else:
        raise ConfigError(f"unknown objective {objective!r}")
    tol = EXACT_TOL if cfg.is_exact else SHOT_TOL
    opt = minimize(fn, start, tol=tol, max_evals=max_evals)
    e, var = moments(opt.theta, h, h2, cfg, rng)
    return VqeResult(
        theta=wrap_angles(opt.theta),
        energy=e,
        variance=var,
        converged=opt.converged,
        evaluations=opt.evaluations,
        start=tuple(float(s) for s in start),
    )


def grid_starts(grid: int) -> list[tuple[float, float]]:
    axis = [TWO_PI * k / grid for k in range(grid)]
    return [(a, b) for a in axis for b in axis]


def split_seeds(root: int | None, n: int) -> list[tuple[int, int]]:
    children = np.random.SeedSequence(root).spawn(n)
    return [tuple(int(x) for x in c.generate_state(2, np.uint64)) for c in children]


def _run_start(args) -> tuple[VqeResult, bool]:
    h, cfg, start, seeds, objective, max_evals, accept = args
    if cfg.is_exact:
        res = vqe(h, start, cfg, objective, max_evals=max_evals)
        return res, res.variance < accept
    res = vqe(h, start, cfg, objective, rng=np.random.default_rng(seeds[0]), max_evals=max_evals)
    res.seed = seeds[0]
    ok = res.variance < accept
    # re-measure with an independent stream; the optimiser's best value is
    # selection-biased low
    e, var = moments(res.theta, h, h.square(), cfg, np.random.default_rng(seeds[1]))
    res.energy, res.variance = e, var
    return res, ok and var < accept


def deduplicate(results: Sequence[VqeResult], radius: float = DEDUP_RADIUS) -> list[VqeResult]:
    """Cluster by energy gaps larger than ``radius``; keep the lowest-variance member."""
    ordered = sorted(results, key=lambda r: r.energy)
    clusters: list[list[VqeResult]] = []
    for r in ordered:
        if clusters and r.energy - clusters[-1][-1].energy <= radius:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    return [min(c, key=lambda r: (r.variance, r.energy)) for c in clusters]


def find_spectrum(
    h: PauliSum,
    cfg: EstimatorConfig = EstimatorConfig(),
    grid: int = 8,
    objective: Literal["variance", "energy"] = "variance",
    accept: float | None = None,
    dedup_radius: float = DEDUP_RADIUS,
    max_evals: int = MAX_EVALS,
    n_jobs: int = 1,
) -> SpectrumReport:
    """Multistart VQE over an evenly spaced ``grid x grid`` set of starts.

    Runs with variance below ``accept`` are kept and merged by energy. In
    shot mode a run must also pass on an independent re-measurement, and
    the re-measured energy and variance are the ones reported. With
    ``objective="energy"`` every converged run is kept.
    """
    _check_two_qubit(h)
    if accept is None:
        accept = EXACT_ACCEPT if cfg.is_exact else SHOT_ACCEPT
    if objective == "energy":
        accept = math.inf
    starts = grid_starts(grid)
    seeds = split_seeds(cfg.seed, len(starts))
    tasks = [(h, cfg, s, sd, objective, max_evals, accept) for s, sd in zip(starts, seeds)]
    if n_jobs == 1:
        outcomes = [_run_start(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=None if n_jobs < 1 else n_jobs) as pool:
            outcomes = list(pool.map(_run_start, tasks))
    candidates = [r for r, _ in outcomes]
    kept = [r for r, ok in outcomes if ok]
    if objective == "energy":
        kept = [min(kept, key=lambda r: r.energy)] if kept else []
    return SpectrumReport(
        levels=deduplicate(kept, dedup_radius),
        dedup_radius=dedup_radius,
        expected_levels=1 if objective == "energy" else 2**h.n_qubits,
        candidates=candidates,
    )


def sweep(h: PauliSum, cfg: EstimatorConfig = EstimatorConfig(), resolution: int = 100):
    """Variance on the grid ``2*pi*k/resolution``, k < resolution, on both axes.

    Returns ``(axis, values)`` with ``values[i, j]`` at ``(axis[i], axis[j])``.
    Shot-mode cells draw from one generator in row-major order.
    """
    if resolution < 2:
        raise ConfigError("sweep resolution must be >= 2")
    h2 = h.square()
    axis = np.array([TWO_PI * k / resolution for k in range(resolution)])
    rng = None if cfg.is_exact else cfg.rng()
    values = np.empty((resolution, resolution))
    for i, t1 in enumerate(axis):
        for j, t2 in enumerate(axis):
            values[i, j] = moments((t1, t2), h, h2, cfg, rng)[1]
    return axis, values


def grid_local_minima(values: np.ndarray) -> list[tuple[int, int]]:
    """Cells strictly below all 8 neighbours, with periodic wrap-around."""
    out = []
    n1, n2 = values.shape
    for i in range(n1):
        for j in range(n2):
            v = values[i, j]
            if all(
                v < values[(i + di) % n1, (j + dj) % n2]
                for di in (-1, 0, 1)
                for dj in (-1, 0, 1)
                if di or dj
            ):
                out.append((i, j))
    return out


def landscape_minima(
    h: PauliSum,
    axis: np.ndarray,
    values: np.ndarray,
    threshold: float = EXACT_ACCEPT,
    radius: float = DEDUP_RADIUS,
) -> list[VqeResult]:
    """Refine every strict grid minimum with exact Nelder-Mead and merge by energy.

    Only refined points whose exact variance is below ``threshold`` count.
    """
    cfg = EstimatorConfig(mode="exact")
    found = []
    for i, j in grid_local_minima(values):
        res = vqe(h, (axis[i], axis[j]), cfg)
        if res.variance < threshold:
            found.append(res)
    return deduplicate(found, radius)
