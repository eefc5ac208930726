"""Stroboscopic error of zeroth- and first-order high-frequency Hamiltonians versus omega."""

from __future__ import annotations

import argparse
import math

import numpy as np
import scipy.linalg as sla

from floquetsim.bounds import floquet_magnus
from floquetsim.presets import driven_qubit
from floquetsim.propagator import exact_propagator


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3, help="number of periods")
    ap.add_argument("--ratios", type=float, nargs="+", default=[2, 4, 8, 16, 32])
    ap.add_argument("--phase", type=float, default=math.pi / 2)
    args = ap.parse_args()
    lam = sum(driven_qubit().alphas.values())
    print(f"{'omega/lam':>9} {'order 0':>11} {'order 1':>11}")
    for r in args.ratios:
        H = driven_qubit(omega=r * lam, phase=args.phase).H
        U = np.linalg.matrix_power(exact_propagator(H, H.period, 1e-13), args.n)
        errs = [np.linalg.norm(U - sla.expm(-1j * floquet_magnus(H, k).H_FM * args.n * H.period), 2) for k in (0, 1)]
        print(f"{r:9g} {errs[0]:11.3e} {errs[1]:11.3e}")


if __name__ == "__main__":
    main()
