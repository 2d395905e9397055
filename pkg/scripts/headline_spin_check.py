"""Dressed versus free spin density matrices on random states, plus the joint-matrix view.

The reduced matrices agree exactly; the joint (spin x momentum) matrix keeps
t0-dependent phases on its off-diagonal momentum blocks.

    python scripts/headline_spin_check.py --states 200 --seed 3
"""

import argparse

import numpy as np

from irqubits.qubits import (
    concurrence,
    dressed_phases,
    joint_matrix_with_phases,
    random_state,
    reduce_spin_dressed,
    reduce_spin_free,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=100)
    ap.add_argument("--max-pairs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.states):
        s = random_state(rng, int(rng.integers(1, args.max_pairs + 1)))
        ph = dressed_phases(s, rng.uniform(-5, 5, 3), rng.uniform(-5, 5, 3), 1e5, 1e2, alpha=1.0)
        worst = max(worst, float(np.max(np.abs(reduce_spin_free(s).matrix - reduce_spin_dressed(s, ph).matrix))))
    print(f"max |rho_dressed - rho_free| over {args.states} states: {worst:.3g}")

    s = random_state(rng, 3)
    for t0 in (10.0, 100.0, 1000.0):
        jm = joint_matrix_with_phases(s, dressed_phases(s, [1, 0, 0], [0, 1, 0], 1e4, t0))
        rho = jm.trace_momenta()
        print(f"t0={t0:6g}  theta_01={jm.theta[0, 1]: .6f}  concurrence={concurrence(rho):.12f}")


if __name__ == "__main__":
    main()
