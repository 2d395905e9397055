"""|I(t)| for both interaction groups over a log-spaced time range.

    python scripts/stationary_phase_scan.py --momentum 0.3 --out stationary.csv
"""

import argparse
from dataclasses import replace

import numpy as np

from irqubits.asymptotic import OscillatoryTermSpec, oscillatory_integral
from irqubits.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--momentum", type=float, default=0.0)
    ap.add_argument("--sigma", type=float, default=0.1)
    ap.add_argument("--out", default="stationary_scan.csv")
    args = ap.parse_args()

    specs = {g: OscillatoryTermSpec(g, momentum=[args.momentum, 0, 0], sigma=args.sigma) for g in (1, 2)}
    rows = []
    for t in np.logspace(0, 4, 17):
        row = {"t": t}
        for g, spec in specs.items():
            row[f"abs_I_group{g}"] = abs(oscillatory_integral(replace(spec, t=float(t))))
        rows.append(row)
        print(f"t={t:9.3g}  |I1|={row['abs_I_group1']:.4e}  |I2|={row['abs_I_group2']:.4e}")
    write_csv(args.out, rows, list(rows[0]))


if __name__ == "__main__":
    main()
