"""Artifact file formats.

All writers are deterministic: fixed column order, ``repr``-exact floats
(17 significant digits), sorted JSON keys and no timestamps.

State file: plain text, one momentum pair per line, ``#`` comments, 15
whitespace-separated columns

    p1x p1y p1z p2x p2y p2z weight re_uu im_uu re_ud im_ud re_du im_du re_dd im_dd

An optional ``# mass = <value>`` comment sets the fermion mass (default 1).
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np

from .photon_modes import CloudAmplitude
from .qubits import BASIS, SpinDensityMatrix, TwoQubitState

STATE_COLUMNS = (
    "p1x p1y p1z p2x p2y p2z weight re_uu im_uu re_ud im_ud re_du im_du re_dd im_dd".split()
)
AMPLITUDE_COLUMNS = ["k0", "kx", "ky", "kz", "weight"] + [
    f"{part}_f{mu}" for mu in range(4) for part in ("re", "im")
]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path, rows, columns) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(x) for x in row] for row in reader])
    return {name: data[:, i] for i, name in enumerate(header)}


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_amplitude_csv(amplitude: CloudAmplitude, path) -> Path:
    grid = amplitude.grid
    f = amplitude.values
    cols = {"k0": grid.k[:, 0], "kx": grid.k[:, 1], "ky": grid.k[:, 2], "kz": grid.k[:, 3], "weight": grid.weights}
    for mu in range(4):
        cols[f"re_f{mu}"] = f[:, mu].real
        cols[f"im_f{mu}"] = f[:, mu].imag
    rows = ({c: cols[c][i] for c in AMPLITUDE_COLUMNS} for i in range(grid.size))
    return write_csv(path, rows, AMPLITUDE_COLUMNS)


def read_amplitude_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (k of shape (N, 4), weights, amplitude values of shape (N, 4))."""
    d = read_csv(path)
    k = np.column_stack([d["k0"], d["kx"], d["ky"], d["kz"]])
    f = np.column_stack([d[f"re_f{mu}"] + 1j * d[f"im_f{mu}"] for mu in range(4)])
    return k, d["weight"], f


def density_to_dict(rho) -> dict:
    m = rho.matrix if isinstance(rho, SpinDensityMatrix) else np.asarray(rho)
    return {
        "basis": list(BASIS),
        "entries": [[[float(m[i, j].real), float(m[i, j].imag)] for j in range(4)] for i in range(4)],
    }


def density_from_dict(d: dict) -> SpinDensityMatrix:
    if list(d.get("basis", BASIS)) != list(BASIS):
        raise ValueError(f"unsupported basis ordering {d.get('basis')}")
    e = np.asarray(d["entries"], dtype=float)
    return SpinDensityMatrix(e[..., 0] + 1j * e[..., 1])


def write_density_json(rho, path) -> Path:
    return write_json(path, density_to_dict(rho))


def read_density_json(path) -> SpinDensityMatrix:
    return density_from_dict(json.loads(Path(path).read_text()))


def write_density_csv(rho, path) -> Path:
    m = rho.matrix if isinstance(rho, SpinDensityMatrix) else np.asarray(rho)
    rows = [
        {"row": BASIS[i], "col": BASIS[j], "re": m[i, j].real, "im": m[i, j].imag} for i in range(4) for j in range(4)
    ]
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "re", "im"])
        for r in rows:
            writer.writerow([r["row"], r["col"], fmt(r["re"]), fmt(r["im"])])
    return path


_MASS_RE = re.compile(r"#\s*mass\s*=\s*([-+0-9.eE]+)")


def read_state(path) -> TwoQubitState:
    text = Path(path).read_text()
    mass = 1.0
    for line in text.splitlines():
        m = _MASS_RE.match(line.strip())
        if m:
            mass = float(m.group(1))
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != len(STATE_COLUMNS):
        raise ValueError(f"{path}: expected {len(STATE_COLUMNS)} columns, found {data.shape[1]}")
    amps = data[:, 7::2] + 1j * data[:, 8::2]
    return TwoQubitState(data[:, 0:3], data[:, 3:6], data[:, 6], amps, mass)


def write_state(state: TwoQubitState, path) -> Path:
    path = Path(path)
    lines = [f"# mass = {fmt(state.mass)}", "# " + " ".join(STATE_COLUMNS)]
    for a in range(state.n_pairs):
        vals = list(state.p1[a]) + list(state.p2[a]) + [state.weights[a]]
        for c in state.amplitudes[a]:
            vals += [c.real, c.imag]
        lines.append(" ".join(fmt(v) for v in vals))
    path.write_text("\n".join(lines) + "\n")
    return path
