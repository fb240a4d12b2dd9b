import itertools

import numpy as np
import pytest

from variance_vqe.encoding import spectrum
from variance_vqe.pauli import PauliError, PauliSum
from variance_vqe.simulator import (
    ShotHistogram,
    ansatz_state,
    apply_gate,
    build_ansatz,
    cnot,
    expectation,
    hadamard,
    measure_pauli,
    measure_state,
    run,
    ry,
    sample,
    sdg,
    xgate,
)

from conftest import COUPLING

ALL_2Q = ["".join(s) for s in itertools.product("IXYZ", repeat=2)]


def basis(idx, n=2):
    v = np.zeros(2**n, dtype=complex)
    v[idx] = 1
    return v


def test_ansatz_structure():
    gates = build_ansatz((0.3, 0.7))
    assert [(g.kind, g.qubits) for g in gates] == [("ry", (1,)), ("cnot", (1, 0)), ("ry", (0,))]


def test_ansatz_origin_is_00():
    assert np.allclose(ansatz_state((0, 0)), basis(0))


def test_ansatz_pi_gives_11():
    assert np.allclose(ansatz_state((np.pi, 0)), basis(3))


@pytest.mark.parametrize("t2", [0.0, 0.4, 1.9, 3.3, 5.0])
def test_ansatz_even_block(t2):
    expected = np.cos(t2 / 2) * basis(0) + np.sin(t2 / 2) * basis(2)
    assert np.allclose(ansatz_state((0, t2)), expected, atol=1e-15)


def test_run_examples():
    assert np.array_equal(run([], 3), basis(0, 3))
    assert np.allclose(run([hadamard(0)], 1), np.array([1, 1]) / np.sqrt(2))
    bell = run([ry(np.pi / 2, 1), cnot(1, 0)], 2)
    assert np.allclose(bell, (basis(0) + basis(3)) / np.sqrt(2))


def test_qubit_zero_is_msb():
    assert np.allclose(run([xgate(0)], 2), basis(2))
    assert np.allclose(run([xgate(1)], 2), basis(1))
    assert np.allclose(run([xgate(0), cnot(0, 2)], 3), basis(0b101, 3))


def test_cnot_against_dense():
    cn = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])  # control 0, target 1
    rng = np.random.default_rng(0)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.allclose(apply_gate(psi, cnot(0, 1), 2), cn @ psi)
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(apply_gate(psi, cnot(1, 0), 2), swap @ cn @ swap @ psi)


def test_gate_index_errors():
    with pytest.raises(IndexError):
        run([ry(0.1, 2)], 2)
    with pytest.raises(ValueError):
        run([cnot(1, 1)], 2)


def test_unitarity():
    rng = np.random.default_rng(1)
    psi = run([], 3)
    gates = [ry(0.3, 0), hadamard(1), sdg(2), cnot(2, 0), xgate(1), ry(-2.0, 2), cnot(0, 1)]
    for _ in range(20):
        for g in gates:
            psi = apply_gate(psi, g._replace(theta=rng.uniform(-7, 7)) if g.kind == "ry" else g, 3)
            assert abs(np.vdot(psi, psi).real - 1) < 1e-12


def test_expectation_examples(printed_pauli, exact_pauli):
    assert expectation(basis(0), printed_pauli) == pytest.approx(-1.5, abs=1e-15)
    rng = np.random.default_rng(2)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    assert expectation(psi, PauliSum([(1.0, "II")])) == pytest.approx(1.0, abs=1e-14)
    # even-block ground angle: tan(theta2) = coupling / 1
    t2 = np.arctan(COUPLING)
    e = expectation(ansatz_state((0, t2)), exact_pauli)
    assert e == pytest.approx(-0.5 - np.sqrt(1 + COUPLING**2), abs=1e-12)
    assert e == pytest.approx(spectrum(exact_pauli.to_matrix())[0], abs=1e-12)
    assert round(e, 4) == -1.8229


def test_expectation_size_mismatch(printed_pauli):
    with pytest.raises(ValueError):
        expectation(basis(0, 3), printed_pauli)


def test_periodicity():
    rng = np.random.default_rng(3)
    obs = PauliSum(zip(rng.normal(size=16), ALL_2Q))
    for t1, t2 in rng.uniform(0, 2 * np.pi, size=(25, 2)):
        f = expectation(ansatz_state((t1, t2)), obs)
        assert abs(expectation(ansatz_state((t1 + 2 * np.pi, t2)), obs) - f) < 1e-12
        assert abs(expectation(ansatz_state((t1, t2 + 2 * np.pi)), obs) - f) < 1e-12


def test_reachability_all_eigenvectors(exact_pauli):
    _, vecs = np.linalg.eigh(exact_pauli.to_matrix().real)
    for k in range(4):
        v = vecs[:, k]
        if abs(v[0]) + abs(v[2]) > 0.5:
            theta = (0.0, 2 * np.arctan2(v[2], v[0]))
        else:
            theta = (np.pi, 2 * np.arctan2(-v[1], v[3]))
        fid = abs(np.vdot(ansatz_state(theta), v)) ** 2
        assert fid > 1 - 1e-10


def test_measure_deterministic_outcome():
    state = basis(2)  # |10>
    for shots in (1, 17, 1000):
        assert measure_state(state, "ZI", shots, seed=0) == -1.0


def test_measure_x_on_00():
    m = measure_pauli((0, 0), "XI", 20000, seed=4)
    assert abs(m) < 0.02


def test_measure_zz_on_bell():
    bell = (basis(0) + basis(3)) / np.sqrt(2)
    assert measure_state(bell, "ZZ", 5000, seed=1) == 1.0


def test_measure_y_rotation():
    # Sdg-then-H maps Y eigenstates onto Z eigenstates
    s = run([hadamard(0)], 1)
    s_y = np.array([1, 1j]) / np.sqrt(2)
    assert measure_state(s, "X", 100, seed=0) == 1.0
    assert measure_state(s_y, "Y", 100, seed=0) == 1.0
    assert measure_state(s_y.conj(), "Y", 100, seed=0) == -1.0


def test_measure_rejects_identity():
    with pytest.raises(PauliError):
        measure_pauli((0.1, 0.2), "II", 10, seed=0)


def test_measure_reproducible():
    a = measure_pauli((0.3, 1.1), "XZ", 2000, seed=99)
    b = measure_pauli((0.3, 1.1), "XZ", 2000, seed=99)
    assert a == b


def test_estimator_consistency():
    rng = np.random.default_rng(5)
    shots = 10000
    hits = 0
    trials = 200
    for t in range(trials):
        theta = rng.uniform(0, 2 * np.pi, 2)
        s = ALL_2Q[1 + t % 15]
        exact = expectation(ansatz_state(theta), PauliSum([(1.0, s)]))
        est = measure_pauli(theta, s, shots, seed=t)
        hits += abs(est - exact) < 4 / np.sqrt(shots)
    assert hits >= 0.99 * trials


def test_histogram_invariants():
    h = sample(ansatz_state((1.0, 2.0)), 333, np.random.default_rng(0))
    assert h.shots == 333
    assert all(len(b) == 2 for b in h.counts)
    assert ShotHistogram.from_indices(h.to_indices(), 2) == h
    with pytest.raises(ValueError):
        ShotHistogram(2, {"101": 1})
