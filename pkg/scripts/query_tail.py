"""Jacobi-Anger tail eps_q against (tau/q)^q and the certified envelope 2 (e tau / 2q)^q."""

from __future__ import annotations

import argparse
import math

from floquetsim.blockenc import jacobi_anger_tails


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau", type=float, nargs="+", default=[1.0, 5.0, 20.0])
    args = ap.parse_args()
    print(f"{'tau':>5} {'q':>4} {'eps_q':>11} {'(tau/q)^q':>11} {'envelope':>11}  below (tau/q)^q")
    for tau in args.tau:
        tails, _ = jacobi_anger_tails(tau, 1e-300)
        for q in range(math.ceil(2 * tau), len(tails)):
            if tails[q] < 1e-14:
                break
            x = math.e * tau / (2 * (q + 1))
            env = 2 * x ** (q + 1) / (1 - x)
            naive = (tau / q) ** q
            print(f"{tau:5g} {q:4d} {tails[q]:11.3e} {naive:11.3e} {env:11.3e}  {tails[q] < naive}")


if __name__ == "__main__":
    main()
