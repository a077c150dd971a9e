"""Spreading exponent kappa on the dual line J=V of the coupled dual chains.

    python scripts/wavepacket.py [--n 14] [--t-v 0.5] [--JV 0.8 1.0 1.5 2.0]
"""
import argparse
import warnings

from quasicrit import dynamics as D
from quasicrit import models as M
from quasicrit import spectral as S


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--t-v", type=float, default=0.5)
    ap.add_argument("--sigma", type=float, default=5.0)
    ap.add_argument("--t-max", type=float, default=500.0)
    ap.add_argument("--JV", type=float, nargs="+", default=[0.8, 1.0, 1.5, 2.0])
    args = ap.parse_args()
    for x in args.JV:
        spec = M.dual_coupled_model(args.n, x, x, args.t_v)
        es = S.diagonalize(M.build_hamiltonian(spec))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            tr = D.spread_exponent(es, spec, D.PacketSpec(args.sigma), t_max=args.t_max)
        flag = " reflected" if caught else ""
        print(f"J=V={x:<4g} kappa {tr.kappa:.3f}  W(t_max) {tr.W[-1]:7.2f}  fit rms {tr.residual:.3f}{flag}")


if __name__ == "__main__":
    main()
