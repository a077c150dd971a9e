"""Coarse-grained tau2 of the continuum s-band states, by energy window.

    python scripts/continuum_windows.py [--L 89 144] [--dx 0.05]
"""
import argparse

import numpy as np

from quasicrit import continuum as C

WINDOWS = (("E<2.48", 0.0, 2.48), ("2.48<E<2.60", 2.48, 2.60), ("E>2.60", 2.60, np.inf))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=int, nargs="+", default=[89, 144])
    ap.add_argument("--dx", type=float, default=0.05)
    ap.add_argument("--V1", type=float, default=8.0)
    ap.add_argument("--V2", type=float, default=0.25)
    ap.add_argument("--Omega", type=float, default=0.01)
    args = ap.parse_args()
    for L in args.L:
        spec = C.ContinuumSpec(args.V1, args.V2, args.Omega, L, dx=args.dx)
        es = C.solve_continuum(spec)
        idx = C.s_band_states(es, spec)
        E, t = es.energies[idx], C.continuum_tau2_all(es, spec)[idx]
        print(f"L={L}  s-band [{E.min():.4f}, {E.max():.4f}]  gap above {C.band_gap(es, spec):.3f}")
        for name, lo, hi in WINDOWS:
            x = t[(E > lo) & (E < hi)]
            print(f"  {name:12s} {x.size:4d} states  <tau2> {x.mean():.3f}  "
                  f"<0.4: {np.mean(x < 0.4):.2f}  0.4-0.8: {np.mean((x >= 0.4) & (x <= 0.8)):.2f}  >0.8: {np.mean(x > 0.8):.2f}")


if __name__ == "__main__":
    main()
