"""Measure the resolution-of-identity constant against the two candidate
normalizations, (2 pi)^2 |chi|^2 and 2 pi |chi|^2, over several probe pairs
and phase-grid resolutions."""
import argparse
import math

from ncqm.coherent_quantize import Fiducial, PhaseGrid, Quantizer, resolution_check
from ncqm.generators import standard_probes
from ncqm.group_core import GalileiParams
from ncqm.hilbert_grid import GridSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--l", type=float, default=10.0)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--lam", type=float, default=0.5)
    ap.add_argument("--method", choices=("direct", "fft"), default="fft")
    args = ap.parse_args()
    spec = GridSpec(args.n, args.l)
    fid = Fiducial.gaussian(spec)
    P = standard_probes(spec)
    pairs = [(0, 0), (0, 1), (1, 2), (2, 3), (3, 4)]
    print(f"{'phase grid':>12} {'pair':>6} {'C/|chi|^2':>14} {'/(2pi)^2':>10} {'/2pi':>10}")
    for nodes in (12, 24):
        q = Quantizer(fid, PhaseGrid(nodes, nodes, 6.0, 6.0), GalileiParams(args.m, args.lam),
                      method=args.method)
        for i, j in pairs:
            c = abs(resolution_check(q, P[i], P[j]).constant) / fid.eta.norm() ** 2
            print(f"{nodes:>10}^4 {f'{i},{j}':>6} {c:14.8f} {c / (2 * math.pi) ** 2:10.6f} "
                  f"{c / (2 * math.pi):10.6f}")


if __name__ == "__main__":
    main()
