"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 incomplete spectrum.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .encoding import PaddingPolicy, ValidationError, decompose, format_matrix, parse_matrix, spectrum
from .engine import (
    EstimatorConfig,
    energy_cost,
    find_spectrum,
    split_seeds,
    sweep,
)
from .lmg import LmgParams, build_quasispin
from .mitigation import ReadoutNoiseModel

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2

DEFAULTS = {
    "n": 3,
    "epsilon": 1.0,
    "v": 0.5,
    "w": 0.0,
    "mode": "exact",
    "shots": 20000,
    "seed": 0,
    "grid": 8,
    "resolution": 100,
    "padding": "penalty",
    "noise_p01": 0.0,
    "noise_p10": 0.0,
    "mitigate": False,
    "out": "out",
    "matrix": None,
    "seeds": 20,
    "jobs": 1,
}

_TYPES = {
    "n": int,
    "epsilon": float,
    "v": float,
    "w": float,
    "shots": int,
    "seed": int,
    "grid": int,
    "resolution": int,
    "noise_p01": float,
    "noise_p10": float,
    "seeds": int,
    "jobs": int,
}

_QUBIT_KEY = re.compile(r"^noise\.q(\d+)\.(p01|p10)$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_bool(v: str) -> bool:
    low = str(v).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {v!r}")


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes and underscores are interchangeable."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key.startswith("noise.") and not _QUBIT_KEY.match(key):
            key = key.replace(".", "_")
        out[key] = value
    return out


def effective_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    per_qubit = {}
    if args.config:
        for key, value in read_config_file(args.config).items():
            m = _QUBIT_KEY.match(key)
            if m:
                per_qubit[(int(m.group(1)), m.group(2))] = float(value)
            elif key in DEFAULTS:
                cfg[key] = value
            else:
                raise UsageError(f"unknown config key {key!r}")
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
            if key in ("noise_p01", "noise_p10"):
                per_qubit = {k: v for k, v in per_qubit.items() if k[1] != key[-3:]}
    try:
        for key, typ in _TYPES.items():
            cfg[key] = typ(cfg[key])
        cfg["mitigate"] = cfg["mitigate"] if isinstance(cfg["mitigate"], bool) else _parse_bool(cfg["mitigate"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config value: {exc}") from None
    if cfg["mode"] not in ("exact", "shots"):
        raise UsageError(f"mode must be exact or shots, got {cfg['mode']!r}")
    if cfg["padding"] not in ("zero", "penalty"):
        raise UsageError(f"padding must be zero or penalty, got {cfg['padding']!r}")
    cfg["noise_per_qubit"] = {f"q{q}.{p}": v for (q, p), v in sorted(per_qubit.items())}
    cfg["command"] = args.command
    return cfg


def noise_model(cfg: dict, n_qubits: int) -> ReadoutNoiseModel | None:
    p01 = [cfg["noise_p01"]] * n_qubits
    p10 = [cfg["noise_p10"]] * n_qubits
    for key, value in cfg.get("noise_per_qubit", {}).items():
        q, which = key[1:].split(".")
        q = int(q)
        if q >= n_qubits:
            raise UsageError(f"noise.{key} refers to qubit {q}, but there are {n_qubits}")
        (p01 if which == "p01" else p10)[q] = value
    try:
        model = ReadoutNoiseModel(tuple(p01), tuple(p10))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return None if model.is_identity else model


def estimator_config(cfg: dict, n_qubits: int) -> EstimatorConfig:
    noise = noise_model(cfg, n_qubits)
    if cfg["mitigate"] and noise is None:
        raise UsageError("--mitigate needs non-zero readout noise")
    return EstimatorConfig(mode=cfg["mode"], shots=cfg["shots"], seed=cfg["seed"], noise=noise, mitigate=cfg["mitigate"])


def lmg_params(cfg: dict) -> LmgParams:
    try:
        return LmgParams(N=cfg["n"], epsilon=cfg["epsilon"], V=cfg["v"], W=cfg["w"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _header(cfg: dict) -> str:
    return f"variance_vqe {__version__}\nconfig: {json.dumps(cfg, sort_keys=True)}"


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _hamiltonian(cfg: dict):
    dense = build_quasispin(lmg_params(cfg))
    return dense, decompose(dense, PaddingPolicy(cfg["padding"]))


def cmd_model(cfg: dict, stdout) -> int:
    dense, h = _hamiltonian(cfg)
    out = Path(cfg["out"])
    _write(out / "hamiltonian.mat", format_matrix(dense, _header(cfg)))
    _write(out / "hamiltonian.pauli", _comment(_header(cfg)) + h.to_text())
    print(f"terms: {len(h)} on {h.n_qubits} qubit(s)", file=stdout)
    print(h.to_text(), end="", file=stdout)
    print("spectrum: " + " ".join(f"{e:.6f}" for e in spectrum(dense)), file=stdout)
    return EXIT_OK


def cmd_encode(cfg: dict, stdout) -> int:
    if not cfg["matrix"]:
        raise UsageError("encode needs --matrix PATH")
    src = Path(cfg["matrix"])
    try:
        text = src.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {src}: {exc}") from None
    try:
        h = decompose(parse_matrix(text), PaddingPolicy(cfg["padding"]))
    except ValidationError as exc:
        raise UsageError(f"{src}: {exc}") from None
    dest = Path(cfg["out"]) / (src.stem + ".pauli")
    _write(dest, _comment(_header(cfg)) + h.to_text())
    print(f"terms: {len(h)} on {h.n_qubits} qubit(s) -> {dest}", file=stdout)
    return EXIT_OK


def sweep_csv(cfg: dict) -> str:
    _, h = _hamiltonian(cfg)
    axis, values = sweep(h, estimator_config(cfg, h.n_qubits), cfg["resolution"])
    buf = io.StringIO()
    buf.write(_comment(_header(cfg)))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta1", "theta2", "variance"])
    for i, t1 in enumerate(axis):
        for j, t2 in enumerate(axis):
            w.writerow([repr(float(t1)), repr(float(t2)), repr(float(values[i, j]))])
    return buf.getvalue()


def read_sweep_csv(text: str):
    """Parse a sweep CSV back into ``(axis, values)``."""
    rows = list(csv.DictReader(line for line in text.splitlines() if not line.startswith("#")))
    t2 = np.array([float(r["theta2"]) for r in rows])
    v = np.array([float(r["variance"]) for r in rows])
    n = int(round(np.sqrt(len(rows))))
    return t2[:n], v.reshape(n, n)


def cmd_sweep(cfg: dict, stdout) -> int:
    if cfg["resolution"] < 2:
        raise UsageError("--resolution must be >= 2")
    dest = Path(cfg["out"]) / "sweep.csv"
    _write(dest, sweep_csv(cfg))
    print(f"wrote {cfg['resolution']}x{cfg['resolution']} grid -> {dest}", file=stdout)
    return EXIT_OK


_ORDINALS = ["Ground", "1st", "2nd", "3rd"]


def _label(k: int) -> str:
    return _ORDINALS[k] if k < len(_ORDINALS) else f"{k}th"


def spectrum_report(cfg: dict) -> dict:
    dense, h = _hamiltonian(cfg)
    est = estimator_config(cfg, h.n_qubits)
    report = find_spectrum(h, est, grid=cfg["grid"], n_jobs=cfg["jobs"])
    exact = spectrum(h.to_matrix())
    levels = []
    for r in report.levels:
        k = int(np.argmin(np.abs(exact - r.energy)))
        d = r.to_dict()
        d["exact"] = float(exact[k])
        d["eigenstate"] = k
        d["deviation"] = abs(r.energy - float(exact[k]))
        levels.append(d)
    return {
        "version": __version__,
        "config": cfg,
        "estimator_mode": est.mode,
        "root_seed": est.seed,
        "exact_eigenvalues": [float(e) for e in exact],
        "physical_eigenvalues": [float(e) for e in spectrum(dense)],
        "levels": levels,
        "seeds": [lv["seed"] for lv in levels],
        "dedup_radius": report.dedup_radius,
        "complete": report.complete,
        "n_candidates": len(report.candidates),
    }


def format_table(rep: dict) -> str:
    by_state = {lv["eigenstate"]: lv for lv in rep["levels"]}
    lines = [f"{'Eigenstate':<12}{'Exact Value':>14}{'VQE Result':>14}{'Deviation':>12}{'Variance':>12}"]
    for k, e in enumerate(rep["exact_eigenvalues"]):
        lv = by_state.get(k)
        if lv is None:
            lines.append(f"{_label(k):<12}{e:>14.3f}{'-':>14}{'-':>12}{'-':>12}")
        else:
            lines.append(
                f"{_label(k):<12}{e:>14.3f}{lv['energy']:>14.3f}{lv['deviation']:>12.3f}{lv['variance']:>12.2e}"
            )
    if not rep["complete"]:
        lines.append("spectrum incomplete")
    return "\n".join(lines) + "\n"


def cmd_spectrum(cfg: dict, stdout) -> int:
    rep = spectrum_report(cfg)
    _write(Path(cfg["out"]) / "spectrum.json", json.dumps(rep, sort_keys=True, indent=2) + "\n")
    print(format_table(rep), end="", file=stdout)
    return EXIT_OK if rep["complete"] else EXIT_INCOMPLETE


def noise_demo_report(cfg: dict) -> dict:
    """Raw vs mitigated energy error at each exact-mode eigenstate point.

    Raw and mitigated estimates for a seed share the same sampled shots and
    bit flips; they differ only by the correction.
    """
    _, h = _hamiltonian(cfg)
    noise = noise_model(cfg, h.n_qubits)
    if noise is None:
        noise = ReadoutNoiseModel.uniform(h.n_qubits, 0.02, 0.02)
    exact_levels = find_spectrum(h, EstimatorConfig(mode="exact"), grid=cfg["grid"]).levels
    seeds = [int(s[0]) for s in split_seeds(cfg["seed"], cfg["seeds"])]
    points = []
    for lv in exact_levels:
        raw, mit = [], []
        for s in seeds:
            for flag, acc in ((False, raw), (True, mit)):
                est = EstimatorConfig(mode="shots", shots=cfg["shots"], seed=s, noise=noise, mitigate=flag)
                acc.append(abs(energy_cost(lv.theta, h, est) - lv.energy))
        points.append(
            {
                "theta": list(lv.theta),
                "exact_energy": lv.energy,
                "mean_abs_dev_raw": float(np.mean(raw)),
                "mean_abs_dev_mitigated": float(np.mean(mit)),
                "improved": bool(np.mean(mit) < np.mean(raw)),
            }
        )
    return {
        "version": __version__,
        "config": cfg,
        "noise": {"p01": list(noise.p01), "p10": list(noise.p10)},
        "seeds": seeds,
        "points": points,
    }


def cmd_noise_demo(cfg: dict, stdout) -> int:
    rep = noise_demo_report(cfg)
    _write(Path(cfg["out"]) / "noise_demo.json", json.dumps(rep, sort_keys=True, indent=2) + "\n")
    print(f"{'Exact':>10}{'raw |dev|':>12}{'mitigated |dev|':>18}", file=stdout)
    for p in rep["points"]:
        print(f"{p['exact_energy']:>10.3f}{p['mean_abs_dev_raw']:>12.4f}{p['mean_abs_dev_mitigated']:>18.4f}", file=stdout)
    return EXIT_OK


def _comment(text: str) -> str:
    return "".join(f"# {line}\n" for line in text.splitlines())


COMMANDS = {
    "model": cmd_model,
    "encode": cmd_encode,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "noise-demo": cmd_noise_demo,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and estimator")
    g.add_argument("--config", help="key = value file; flags override it")
    g.add_argument("--n", type=int)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--v", type=float)
    g.add_argument("--w", type=float)
    g.add_argument("--mode", choices=["exact", "shots"])
    g.add_argument("--shots", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--grid", type=int, help="multistart starts per axis")
    g.add_argument("--resolution", type=int, help="sweep points per axis")
    g.add_argument("--padding", choices=["zero", "penalty"])
    g.add_argument("--noise-p01", dest="noise_p01", type=float)
    g.add_argument("--noise-p10", dest="noise_p10", type=float)
    g.add_argument("--mitigate", action="store_true", default=None)
    g.add_argument("--out", help="output directory")
    g.add_argument("--matrix", help="matrix file for encode")
    g.add_argument("--seeds", type=int, help="seed count for noise-demo")
    g.add_argument("--jobs", type=int, help="worker processes for multistart")
    g.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="variance-vqe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](cfg, stdout)
    except (UsageError, ValueError) as exc:
        print(f"variance-vqe: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
