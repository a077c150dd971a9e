"""Finite-size extrapolation of the windowed <alpha_min> against 1/n.

    python scripts/alpha_scaling.py [--ns 12 13 14 15 16] [--coupling rung]
"""
import argparse

import numpy as np

from quasicrit import models as M
from quasicrit import multifractal as MF
from quasicrit import spectral as S

WINDOWS = (("|E|>2", 2.0, np.inf), ("0.67<|E|<2", 0.67, 2.0), ("|E|<0.67", 0.0, 0.67))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ns", type=int, nargs="+", default=[12, 13, 14, 15, 16])
    ap.add_argument("--V", type=float, default=2.0)
    ap.add_argument("--t-v", type=float, default=0.1)
    ap.add_argument("--coupling", default="rung", choices=["rung", "rung_plus_cross", "antisymmetric_cross"])
    args = ap.parse_args()
    series = {name: MF.ScalingSeries("alpha_min", "1/n") for name, _, _ in WINDOWS}
    for n in args.ns:
        spec = M.minimal_model(n, args.V, args.t_v, args.coupling)
        es = S.diagonalize(M.build_hamiltonian(spec))
        a = MF.alpha_min_all(es.states, spec.N)
        row = []
        for name, lo, hi in WINDOWS:
            v = MF.masked_mean(a, S.abs_window(es.energies, lo, hi))
            series[name].add(n, spec.N, v)
            row.append(f"{v:.4f}")
        print(f"n={n:2d} L={spec.N:5d}  " + "  ".join(row))
    for name, s in series.items():
        fit = MF.extrapolate(s)
        print(f"{name:12s} intercept {fit.intercept:.3f}  slope {fit.slope:.3f}  rms {fit.residual:.2e}")


if __name__ == "__main__":
    main()
