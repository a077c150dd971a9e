"""Windowed tau2 classification of the minimal model and its coupling variants.

    python scripts/phase_windows.py [--n 15] [--V 2.0] [--t-v 0.1]
"""
import argparse

import numpy as np

from quasicrit import models as M
from quasicrit import multifractal as MF
from quasicrit import spectral as S

WINDOWS = (("|E|>2", 2.0, np.inf, "loc"), ("0.67<|E|<2", 0.67, 2.0, "ext"), ("|E|<0.67", 0.0, 0.67, "crit"))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=15)
    ap.add_argument("--V", type=float, default=2.0)
    ap.add_argument("--t-v", type=float, default=0.1)
    args = ap.parse_args()
    print(f"{'coupling':22s} {'window':12s} {'states':>6s} {'<tau2>':>7s} loc   crit  ext")
    for coupling in ("rung", "rung_plus_cross", "antisymmetric_cross"):
        spec = M.minimal_model(args.n, args.V, args.t_v, coupling)
        es = S.diagonalize(M.build_hamiltonian(spec))
        t = MF.tau2_all(es.states, spec.N)
        labels = MF.classify_tau2(t)
        for name, lo, hi, _ in WINDOWS:
            m = S.abs_window(es.energies, lo, hi)
            share = [np.mean(labels[m] == k) for k in ("loc", "crit", "ext")]
            print(f"{coupling:22s} {name:12s} {m.sum():6d} {t[m].mean():7.3f} " + " ".join(f"{x:.2f}" for x in share))


if __name__ == "__main__":
    main()
