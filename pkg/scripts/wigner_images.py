"""Intertwining residuals of the Wigner map against the stated grid operators
and against the images derived from the displacement operator, per operator
and truncation dimension."""
import argparse

from ncqm.hilbert_grid import GridSpec
from ncqm.wigner_bridge import equivalence_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--l", type=float, default=10.0)
    args = ap.parse_args()
    spec = GridSpec(args.n, args.l)
    print(f"{'dim':>4} {'targets':>8} " + " ".join(f"{k:>10}" for k in ("Q1", "Q2", "P1", "P2")))
    for dim in (16, 32, 64):
        for targets in ("stated", "derived"):
            rep = equivalence_check(args.theta, dim, spec, targets=targets).by_pair()
            print(f"{dim:>4} {targets:>8} " + " ".join(f"{rep[k]:10.3e}" for k in ("Q1", "Q2", "P1", "P2")))


if __name__ == "__main__":
    main()
