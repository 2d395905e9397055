"""Soft-photon number of bare and dressed clouds versus the IR cutoff.

    python scripts/ir_divergence_scan.py --out results/ir_scan.csv
"""

import argparse

import numpy as np

from irqubits.io import write_csv
from irqubits.kinematics import OnShellMomentum
from irqubits.photon_modes import build_grid, cloud_amplitude, cloud_amplitude_dressed, soft_photon_number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--speed", type=float, default=0.5)
    ap.add_argument("--uv", type=float, default=0.1)
    ap.add_argument("--decades", type=int, default=6)
    ap.add_argument("--out", default="ir_scan.csv")
    args = ap.parse_args()

    p = OnShellMomentum.from_velocity([args.speed, 0, 0])
    q = OnShellMomentum.from_velocity([-args.speed, 0, 0])
    rows = []
    for lam in args.uv * np.logspace(-1, -args.decades, 2 * args.decades):
        grid = build_grid(lam, args.uv)
        rows.append(
            dict(
                ir_cutoff=lam,
                log_inverse_cutoff=np.log(1 / lam),
                n_bare_single=soft_photon_number(cloud_amplitude([p], 0.0, grid)),
                n_bare_pair=soft_photon_number(cloud_amplitude([p, q], 0.0, grid)),
                n_dressed_pair=soft_photon_number(cloud_amplitude_dressed(p, q, 0.0, grid)),
            )
        )
    write_csv(args.out, rows, list(rows[0]))
    slope = np.polyfit([r["log_inverse_cutoff"] for r in rows], [r["n_bare_single"] for r in rows], 1)[0]
    print(f"bare single-particle slope dN/dln(1/lambda) = {slope:.6g}")
    print(f"max dressed pair number = {max(r['n_dressed_pair'] for r in rows):.3g}")


if __name__ == "__main__":
    main()
