"""Print the quantized commutator table and the fitted form of the quantized
positions for a range of lambda values."""
import argparse

from ncqm.coherent_quantize import (
    COMMUTATOR_PAIRS,
    Fiducial,
    PhaseGrid,
    Quantizer,
    fit_q_operator,
    quantized_commutators,
    standard_symbols,
)
from ncqm.generators import standard_probes
from ncqm.group_core import GalileiParams
from ncqm.hilbert_grid import GridSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--l", type=float, default=8.0)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--lam", type=float, nargs="+", default=[0.5, 0.25, 1.0])
    ap.add_argument("--method", choices=("direct", "fft"), default="fft")
    args = ap.parse_args()
    spec = GridSpec(args.n, args.l)
    fid = Fiducial.gaussian(spec)
    g = standard_probes(spec)[:2]
    for lam in args.lam:
        params = GalileiParams(args.m, lam)
        q = Quantizer(fid, PhaseGrid(), params, method=args.method)
        print(f"lambda = {lam}, theta = {params.theta:.4f}")
        table = quantized_commutators(q, g)
        for pair in COMMUTATOR_PAIRS:
            c = table[pair][0].coefficient
            print(f"  [{pair[0]},{pair[1]}] = i * ({c.real:+.6f} {c.imag:+.1e}i)")
        out = q.apply({"q1": standard_symbols()["q1"]}, [g[0]])["q1"][0]
        a, b = fit_q_operator(out, g[0], 0)
        print(f"  O_q1 ~ ({a.real:+.6f}) x1 + ({b.real:+.1e} {b.imag:+.6f}i) d2"
              f"   [lam/2m^2 = {lam / (2 * args.m**2):.6f}]")


if __name__ == "__main__":
    main()
