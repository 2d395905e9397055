"""Verification pipelines behind the command-line front end.

Each ``run_*`` function takes a :class:`RunConfig`, computes its sweep and
returns ``(tables, checks)``: tables map artifact names to row lists, checks
map a check name to a :class:`Check`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import asymptotic, photon_modes, qubits
from .io import read_state
from .kinematics import ALPHA, OnShellMomentum
from .phases import PhaseConfig, cancellation_sweep

COMMANDS = ("phases", "cancellation", "spin-rho", "softcount", "stationary")


def _plain(x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


@dataclass
class Check:
    passed: bool
    value: object
    threshold: object
    note: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.value = _plain(self.value)

    def as_dict(self):
        return {"passed": bool(self.passed), "value": self.value, "threshold": self.threshold, "note": self.note}


@dataclass
class RunConfig:
    command: str = "all"
    seed: int = 20240101
    alpha: float = ALPHA
    # phase sweeps
    v1: tuple = (0.0, 0.0, 0.0)
    v2: tuple = (0.6, 0.0, 0.0)
    x1: tuple = (1.0, 0.0, 0.0)
    x2: tuple = (0.0, 0.0, 0.0)
    ratio: float = 10.0
    t0_schedule: tuple = (1e3, 1e4, 1e5)
    cancellation_limit: float = 1e-3
    # spin density matrices
    state_file: str | None = None
    random_states: int = 100
    max_pairs: int = 50
    dressing_t: float = 1e4
    dressing_t0: float = 1e2
    # soft photons
    ir_schedule: tuple = (1e-3, 1e-4, 1e-5)
    uv_cutoff: float = 0.1
    n_radial: int = 32
    n_polar: int = 24
    n_azimuth: int = 24
    cloud_t: float = 0.0
    soft_velocity: tuple = (0.5, 0.0, 0.0)
    # stationary phase
    sigma: float = 0.1
    stationary_momentum: tuple = (0.0, 0.0, 0.0)
    stationary_times: tuple = (10.0, 1e2, 1e3, 1e4)
    # tolerances
    identity_tol: float = 1e-12
    headline_tol: float = 1e-14
    dressed_number_tol: float = 1e-10
    ir_constancy: float = 0.01
    r2_min: float = 0.99
    decay_factor: float = 10.0
    cauchy_tol: float = 0.01
    out_dir: str = "out"
    workers: int = 4
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS + ("all",):
            raise ValueError(f"unknown command {self.command!r}; choose from {COMMANDS + ('all',)}")
        for name in ("t0_schedule", "ir_schedule", "stationary_times"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must not be empty")
        if self.ratio <= 0 or any(t0 <= 0 for t0 in self.t0_schedule):
            raise ValueError("t/t0 and t0 values must be positive")
        if self.dressing_t * self.dressing_t0 <= 0:
            raise ValueError("dressing_t and dressing_t0 must share their sign")
        if self.state_file is not None and not Path(self.state_file).is_file():
            raise ValueError(f"state file {self.state_file} not found")
        if self.random_states < 0 or self.max_pairs < 1:
            raise ValueError("random_states must be >= 0 and max_pairs >= 1")
        return self


def _base_phase_config(cfg: RunConfig) -> PhaseConfig:
    t0 = cfg.t0_schedule[0]
    return PhaseConfig(v1=cfg.v1, v2=cfg.v2, x1=cfg.x1, x2=cfg.x2, t=t0 * cfg.ratio, t0=t0, alpha=cfg.alpha)


def _sweep(cfg: RunConfig):
    base = _base_phase_config(cfg)
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        chunks = pool.map(lambda t0: cancellation_sweep(base, [t0], cfg.ratio)[0], cfg.t0_schedule)
        return list(chunks)


def run_phases(cfg: RunConfig):
    rows = _sweep(cfg)
    checks = {
        "phases_finite": Check(
            all(np.isfinite([r[c] for r in rows for c in ("kappa1", "kappa2", "kappa12_quad", "phi")])),
            None,
            None,
        ),
        "kappa12_closed_vs_quadrature": Check(
            max(abs(r["kappa12_quad"] - r["kappa12_closed"]) / abs(r["kappa12_closed"]) for r in rows) < 1e-6,
            max(abs(r["kappa12_quad"] - r["kappa12_closed"]) / abs(r["kappa12_closed"]) for r in rows),
            1e-6,
        ),
    }
    return {"phases": rows}, checks


def run_cancellation(cfg: RunConfig):
    rows = _sweep(cfg)
    asym = [r["residual_asymptotic"] for r in rows]
    quad_res = [r["residual"] for r in rows]
    checks = {
        "asymptotic_residual": Check(max(asym) < cfg.identity_tol, max(asym), cfg.identity_tol),
        "quadrature_residual_monotone": Check(bool(np.all(np.diff(quad_res) < 0)), quad_res, "decreasing"),
        "quadrature_residual_final": Check(quad_res[-1] < cfg.cancellation_limit, quad_res[-1], cfg.cancellation_limit),
    }
    return {"cancellation": rows}, checks


def bundled_singlet_path():
    return resources.files("irqubits") / "data" / "singlet.txt"


def _random_dressing(rng, state, cfg: RunConfig):
    x1 = rng.uniform(-5, 5, size=3)
    x2 = rng.uniform(-5, 5, size=3)
    t0 = float(np.exp(rng.uniform(np.log(10.0), np.log(1e4))))
    t = t0 * float(np.exp(rng.uniform(0.0, np.log(1e3))))
    alpha = float(rng.uniform(0.0, 1.0))
    return qubits.dressed_phases(state, x1, x2, t, t0, alpha)


def run_spin_rho(cfg: RunConfig):
    path = cfg.state_file or bundled_singlet_path()
    state = read_state(path)
    dressing = qubits.dressed_phases(state, cfg.x1, cfg.x2, cfg.dressing_t, cfg.dressing_t0, cfg.alpha)
    rho_free = qubits.reduce_spin_free(state)
    rho_dressed = qubits.reduce_spin_dressed(state, dressing)
    m_free = qubits.entanglement_summary(rho_free)
    m_dressed = qubits.entanglement_summary(rho_dressed)
    max_diff = float(np.max(np.abs(rho_free.matrix - rho_dressed.matrix)))

    rng = np.random.default_rng(cfg.seed)
    worst_rho, worst_measure = 0.0, 0.0
    for _ in range(cfg.random_states):
        s = qubits.random_state(rng, int(rng.integers(1, cfg.max_pairs + 1)))
        ph = _random_dressing(rng, s, cfg)
        a, b = qubits.reduce_spin_free(s), qubits.reduce_spin_dressed(s, ph)
        worst_rho = max(worst_rho, float(np.max(np.abs(a.matrix - b.matrix))))
        worst_measure = max(
            worst_measure,
            abs(qubits.concurrence(a) - qubits.concurrence(b)),
            abs(qubits.negativity(a) - qubits.negativity(b)),
        )

    summary = {
        "state_file": str(path),
        "seed": cfg.seed,
        "free": m_free,
        "dressed": m_dressed,
        "max_diff": max_diff,
        "random_states": cfg.random_states,
        "random_max_diff": worst_rho,
        "random_max_measure_diff": worst_measure,
    }
    checks = {
        "bundled_state_equal": Check(max_diff < cfg.headline_tol, max_diff, cfg.headline_tol),
        "random_states_equal": Check(worst_rho < cfg.headline_tol, worst_rho, cfg.headline_tol),
        "random_measures_equal": Check(worst_measure < cfg.identity_tol, worst_measure, cfg.identity_tol),
    }
    return {"rho_free": rho_free, "rho_dressed": rho_dressed, "spin_measures": summary}, checks


def _fit_log(ir, numbers):
    x = np.log(1.0 / np.asarray(ir))
    y = np.asarray(numbers)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else float("nan")
    return float(slope), float(intercept), r2


def run_softcount(cfg: RunConfig):
    single = OnShellMomentum.from_velocity(cfg.soft_velocity)
    p1 = OnShellMomentum.from_velocity(cfg.v1)
    p2 = OnShellMomentum.from_velocity(cfg.v2)
    rows = []
    for lam in cfg.ir_schedule:
        grid = photon_modes.build_grid(lam, cfg.uv_cutoff, cfg.n_radial, cfg.n_polar, cfg.n_azimuth)
        grid2 = photon_modes.build_grid(2 * lam, cfg.uv_cutoff, cfg.n_radial, cfg.n_polar, cfg.n_azimuth)
        bare = photon_modes.cloud_amplitude([single], cfg.cloud_t, grid, cfg.alpha)
        bare2 = photon_modes.cloud_amplitude([single], cfg.cloud_t, grid2, cfg.alpha)
        dressed = photon_modes.cloud_amplitude_dressed(p1, p2, cfg.cloud_t, grid, cfg.alpha)
        n_bare = photon_modes.soft_photon_number(bare)
        rows.append(
            dict(
                ir_cutoff=lam,
                n_undressed=n_bare,
                n_undressed_double_cutoff=photon_modes.soft_photon_number(bare2),
                n_undressed_feynman=photon_modes.soft_photon_number(bare, "feynman"),
                n_dressed=photon_modes.soft_photon_number(dressed),
                gauge_residue_max=float(np.max(np.abs(photon_modes.gauge_residue(p1, grid.k)))),
            )
        )
    for r in rows:
        # N(lambda) - N(2 lambda): photons gained by halving the IR cutoff
        r["increment_halving"] = r["n_undressed"] - r["n_undressed_double_cutoff"]
    slope, intercept, r2 = _fit_log(cfg.ir_schedule, [r["n_undressed"] for r in rows])
    inc = np.array([r["increment_halving"] for r in rows])
    spread = float((inc.max() - inc.min()) / abs(inc.mean()))
    n_dressed = max(r["n_dressed"] for r in rows)
    summary = {"slope": slope, "intercept": intercept, "r2": r2, "increment_spread": spread, "max_dressed": n_dressed}
    checks = {
        "undressed_log_slope_positive": Check(slope > 0, slope, 0.0),
        "undressed_log_fit_r2": Check(r2 > cfg.r2_min, r2, cfg.r2_min),
        "undressed_halving_increment_constant": Check(spread < cfg.ir_constancy, spread, cfg.ir_constancy),
        "dressed_number_vanishes": Check(n_dressed < cfg.dressed_number_tol, n_dressed, cfg.dressed_number_tol),
        "gauge_residue": Check(
            max(r["gauge_residue_max"] for r in rows) < cfg.identity_tol,
            max(r["gauge_residue_max"] for r in rows),
            cfg.identity_tol,
        ),
    }
    return {"softcount": rows, "softcount_fit": summary}, checks


def run_stationary(cfg: RunConfig):
    times = list(cfg.stationary_times)
    specs = {
        g: asymptotic.OscillatoryTermSpec(g, momentum=np.asarray(cfg.stationary_momentum), sigma=cfg.sigma)
        for g in (1, 2)
    }
    rows = []
    values = {}
    for t in times:
        row = {"t": t}
        for g, spec in specs.items():
            val = asymptotic.oscillatory_integral(replace(spec, t=float(t)))
            values[(g, t)] = val
            row[f"abs_I_group{g}"] = abs(val)
        rows.append(row)

    checks = {}
    if 10.0 in times and 1e3 in times:
        ratio = abs(values[(1, 10.0)]) / abs(values[(1, 1e3)])
        checks["group1_decay"] = Check(ratio >= cfg.decay_factor, ratio, cfg.decay_factor)
    if 1e3 in times and 1e4 in times:
        late = values[(2, 1e4)]
        cauchy = abs(late - values[(2, 1e3)]) / abs(late)
        checks["group2_cauchy"] = Check(
            cauchy < cfg.cauchy_tol,
            cauchy,
            cfg.cauchy_tol,
            note="smeared integrals vanish as t -> infinity (Riemann-Lebesgue); see README",
        )
    ks = np.array([1e-2, 5e-3, 2.5e-3, 1e-3, 1e-4])
    res = np.array([asymptotic.phase_expansion_residual(cfg.stationary_momentum, [k, 0.0, 0.0]) for k in ks])
    slope = float(np.polyfit(np.log(ks), np.log(res), 1)[0])
    checks["expansion_slope"] = Check(abs(slope - 2.0) <= 0.05, slope, "2.0 +/- 0.05")
    return {"stationary": rows}, checks


RUNNERS = {
    "phases": run_phases,
    "cancellation": run_cancellation,
    "spin-rho": run_spin_rho,
    "softcount": run_softcount,
    "stationary": run_stationary,
}
