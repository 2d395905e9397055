"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line; ``conftest.py`` prints them in the
terminal summary. Run on its own with ``pytest tests/test_acceptance.py``.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from irqubits.asymptotic import OscillatoryTermSpec, oscillatory_integral, phase_expansion_residual
from irqubits.kinematics import OnShellMomentum, boost, relative_velocity_3v, relative_velocity_invariant
from irqubits.phases import (
    PhaseConfig,
    cancellation_residual,
    cancellation_sweep,
    kappa_cross_closed,
    kappa_cross_quadrature,
    kappa_self_closed,
    kappa_self_quadrature,
    sample_config,
)
from irqubits.photon_modes import build_grid, cloud_amplitude, cloud_amplitude_dressed, gauge_residue, soft_photon_number
from irqubits.qubits import (
    concurrence,
    dressed_phases,
    entanglement_entropy,
    negativity,
    random_state,
    reduce_spin_dressed,
    reduce_spin_free,
    singlet,
)

RESULTS = []


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} | {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_dressed_equals_free():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_rho = worst_measure = 0.0
    for _ in range(100):
        s = random_state(rng, int(rng.integers(1, 51)))
        t0 = float(np.exp(rng.uniform(np.log(10.0), np.log(1e4))))
        ph = dressed_phases(
            s,
            rng.uniform(-5, 5, 3),
            rng.uniform(-5, 5, 3),
            t0 * float(np.exp(rng.uniform(0, np.log(1e3)))),
            t0,
            alpha=float(rng.uniform(0, 1)),
        )
        free, dressed = reduce_spin_free(s), reduce_spin_dressed(s, ph)
        worst_rho = max(worst_rho, float(np.max(np.abs(free.matrix - dressed.matrix))))
        worst_measure = max(
            worst_measure,
            abs(concurrence(free) - concurrence(dressed)),
            abs(negativity(free) - negativity(dressed)),
        )
    elapsed = time.perf_counter() - start
    ok = worst_rho < 1e-14 and worst_measure < 1e-12 and elapsed < 10
    record(1, "dressed rho equals free rho", ok, f"max|drho|={worst_rho:.3g} max|dmeasure|={worst_measure:.3g} t={elapsed:.2f}s")


def test_criterion_2_phase_cancellation():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        cfg = sample_config(rng)
        p1, p2 = OnShellMomentum.from_velocity(cfg.v1), OnShellMomentum.from_velocity(cfg.v2)
        worst = max(worst, cancellation_residual(cfg, p1, p2, "asymptotic"))
    base = PhaseConfig(v1=[0, 0, 0], v2=[0.6, 0, 0], x1=[1, 0, 0], x2=[0, 0, 0], t=1e4, t0=1e3)
    res = [r["residual"] for r in cancellation_sweep(base, [1e3, 1e4, 1e5], ratio=10.0)]
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and res[0] > res[1] > res[2] and res[2] < 1e-3 and elapsed < 30
    record(
        2,
        "phase cancellation",
        ok,
        f"asymptotic max={worst:.3g}; quadrature residuals={[f'{r:.3g}' for r in res]} t={elapsed:.2f}s",
    )


def test_criterion_3_closed_form_vs_quadrature():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    worst_self = worst_cross = 0.0
    for _ in range(100):
        cfg = sample_config(rng)
        for which in (1, 2):
            q, c = kappa_self_quadrature(cfg, which), kappa_self_closed(cfg, which)
            worst_self = max(worst_self, abs(q - c) / abs(c))
        q, c = kappa_cross_quadrature(cfg), kappa_cross_closed(cfg)
        worst_cross = max(worst_cross, abs(q - c) / abs(c))
    elapsed = time.perf_counter() - start
    ok = worst_self < 1e-12 and worst_cross < 1e-6 and elapsed < 60
    record(3, "closed forms vs quadrature", ok, f"self rel={worst_self:.3g} cross rel={worst_cross:.3g} t={elapsed:.2f}s")


def test_criterion_4_mass_shell_residue():
    grid = build_grid(1e-4, 0.1, 32, 24, 24)
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(5):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 0.95) / np.linalg.norm(v)
        worst = max(worst, float(np.max(np.abs(gauge_residue(OnShellMomentum.from_velocity(v), grid.k)))))
    p1, p2 = OnShellMomentum.from_velocity([0.6, 0, 0]), OnShellMomentum.from_velocity([-0.3, 0.2, 0.1])
    n = soft_photon_number(cloud_amplitude_dressed(p1, p2, 100.0, grid))
    ok = grid.size >= 10_000 and worst < 1e-12 and n < 1e-10
    record(4, "mass-shell gauge residue", ok, f"modes={grid.size} max residue={worst:.3g} N_dressed={n:.3g}")


def test_criterion_5_ir_structure():
    p = OnShellMomentum.from_velocity([0.5, 0, 0])
    lams = np.array([1e-3, 1e-4, 1e-5])

    def number(lam):
        return soft_photon_number(cloud_amplitude([p], 0.0, build_grid(lam, 0.1)))

    n = np.array([number(lam) for lam in lams])
    inc = n - np.array([number(2 * lam) for lam in lams])
    spread = float(np.ptp(inc) / abs(inc.mean()))
    x = np.log(1 / lams)
    slope, intercept = np.polyfit(x, n, 1)
    r2 = 1 - np.sum((n - slope * x - intercept) ** 2) / np.sum((n - n.mean()) ** 2)
    ok = spread < 0.01 and slope > 0 and r2 > 0.99
    record(5, "IR log divergence", ok, f"increment spread={spread:.3g} slope={slope:.4g} R2={r2:.6f}")


def test_criterion_6_stationary_phase():
    g1 = OscillatoryTermSpec(1, momentum=[0, 0, 0], sigma=0.1)
    g2 = OscillatoryTermSpec(2, momentum=[0, 0, 0], sigma=0.1)
    decay = abs(oscillatory_integral(replace(g1, t=10.0))) / abs(oscillatory_integral(replace(g1, t=1e3)))
    i3, i4 = oscillatory_integral(replace(g2, t=1e3)), oscillatory_integral(replace(g2, t=1e4))
    cauchy = abs(i4 - i3) / abs(i4)
    ks = np.array([1e-2, 1e-3, 1e-4])
    res = [phase_expansion_residual([0.3, 0, 0], [k, 0, 0]) for k in ks]
    slope = float(np.polyfit(np.log(ks), np.log(res), 1)[0])
    ok = decay >= 10 and cauchy < 0.01 and abs(slope - 2.0) <= 0.05
    record(
        6,
        "stationary-phase classification",
        ok,
        f"group1 decay={decay:.3g} (>=10) group2 cauchy={cauchy:.3g} (<0.01) "
        f"|I2(1e3)|={abs(i3):.3g} |I2(1e4)|={abs(i4):.3g} expansion slope={slope:.4f}",
    )


def test_criterion_7_kinematics():
    rng = np.random.default_rng(7)
    worst_u = worst_boost = 0.0
    for _ in range(1000):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        s1, s2, b = rng.uniform(-0.95, 0.95, size=3)
        v1, v2 = s1 * axis, s2 * axis
        p, q = OnShellMomentum.from_velocity(v1), OnShellMomentum.from_velocity(v2)
        u = relative_velocity_invariant(p, q)
        worst_u = max(worst_u, abs(u - relative_velocity_3v(v1, v2)))
        ub = relative_velocity_invariant(boost(p, b * axis), boost(q, b * axis))
        worst_boost = max(worst_boost, abs(ub - u))
    ok = worst_u < 1e-12 and worst_boost < 1e-12
    record(7, "kinematics consistency", ok, f"max|u_inv-u_3v|={worst_u:.3g} max boost drift={worst_boost:.3g}")


def test_criterion_8_measure_sanity():
    s = singlet()
    rho = np.outer(s, s.conj())
    errs = [abs(concurrence(rho) - 1), abs(negativity(rho) - 0.5), abs(entanglement_entropy(s) - 1)]
    up = np.zeros(4, dtype=complex)
    up[0] = 1
    prod = np.outer(up, up)
    product_values = [concurrence(prod), negativity(prod), entanglement_entropy(up)]
    rng = np.random.default_rng(8)
    disagreements = 0
    for _ in range(1000):
        rank = int(rng.integers(1, 5))
        a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        m = a @ a.conj().T
        m /= np.trace(m)
        disagreements += (concurrence(m) > 1e-10) != (negativity(m) > 1e-10)
    ok = max(errs) < 1e-12 and max(product_values) == 0.0 and disagreements == 0
    record(8, "entanglement measures", ok, f"singlet errors={max(errs):.3g} product={product_values} disagreements={disagreements}/1000")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
