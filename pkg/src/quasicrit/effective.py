"""Free-chain resolvent and the effective potential it induces on a coupled chain.

The free chain has hopping ``+1`` so its band is ``2 cos k``. Eliminating that
chain from a rung-coupled pair leaves ``(H1 + t_v^2 G(E) - E) v = 0`` for the
other chain's amplitudes; with a pure on-site ``H1`` the diagonal of this
equation contains ``1/(E - V_m)``, which is unbounded whenever E sits inside
the range of the potential.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, ParameterError, ResonanceError
from .models import (
    AAH,
    ChainSpec,
    CoupledModelSpec,
    Nearest,
    Rung,
    Sampled,
    build_single_chain,
    fibonacci_approximant,
    free_chain,
    onsite,
)

DEFAULT_ETA = 1e-3
POLE_TOL = 1e-9


def _decaying_root(w: complex) -> complex:
    s = np.sqrt(complex(w) ** 2 - 4.0)
    z1, z2 = (w - s) / 2.0, (w + s) / 2.0
    return z1 if abs(z1) < abs(z2) else z2


def green_analytic(E: float, d: int, eta: float = 0.0) -> complex:
    """Infinite-chain ``G(m, n; E + i eta)`` at separation ``d = |m - n|``.

    Outside the band the root of ``z^2 - E z + 1`` with ``|z| < 1`` is used, so
    G decays as ``|z|^d``. Inside the band with ``eta = 0`` the retarded limit
    is taken and ``|G|`` is independent of d.
    """
    d = abs(int(d))
    if eta == 0.0:
        if abs(abs(E) - 2.0) < 1e-15:
            raise BranchPointError(f"E={E} is a band edge of the free chain")
        if abs(E) < 2.0:
            z = complex(E, -np.sqrt(4.0 - E * E)) / 2.0
        else:
            z = _decaying_root(E)
    else:
        z = _decaying_root(complex(E, eta))
    return z**d / (1.0 / z - z)


def green_numeric(E: float, m: int, n: int, L: int, eta: float | None = None) -> complex:
    """Plane-wave eigen-sum of the resolvent of a free ring of ``L`` sites."""
    if eta is None:
        eta = DEFAULT_ETA if abs(E) < 2.0 else 0.0
    k = 2.0 * np.pi * np.arange(L) / L
    Ek = 2.0 * np.cos(k)
    if eta == 0.0:
        close = np.abs(E - Ek)
        j = int(np.argmin(close))
        if close[j] < POLE_TOL:
            raise ResonanceError(f"E={E} hits the ring level k=2*pi*{j}/{L}")
    phase = np.exp(1j * k * (m - n))
    return complex(np.sum(phase / (E + 1j * eta - Ek)) / L)


def ring_green_matrix(E: float, L: int, eta: float = 0.0) -> np.ndarray:
    """Full ``(E + i eta - H2)^-1`` for the free ring; real when ``eta = 0``."""
    H2 = build_single_chain(free_chain_from_L(L))
    A = (E + 1j * eta) * np.eye(L) - H2
    G = np.linalg.inv(A)
    return G.real if eta == 0.0 else G


def free_chain_from_L(L: int) -> ChainSpec:
    for n in range(3, 31):
        if fibonacci_approximant(n).F_n == L:
            return free_chain(n)
    raise ParameterError(f"{L} is not a Fibonacci number in the supported range")


@dataclass(frozen=True)
class SelfEnergy:
    values: np.ndarray
    max_abs: float
    near_resonant: int
    singular_sites: tuple


def self_energy_diag(E: float, chain: ChainSpec, eps: float = 0.01) -> SelfEnergy:
    """Per-site ``1/(E - V_m)``; exact zeros map to ``+inf`` and are listed."""
    V = onsite(chain)
    diff = E - V
    with np.errstate(divide="ignore"):
        vals = 1.0 / diff
    singular = np.flatnonzero(diff == 0)
    vals[singular] = np.inf
    return SelfEnergy(
        values=vals,
        max_abs=float(np.max(np.abs(vals))),
        near_resonant=int(np.sum(np.abs(diff) < eps)),
        singular_sites=tuple(int(s) for s in singular),
    )


def pure_potential_chain(n: int, V: float) -> ChainSpec:
    """AAH on-site potential with the hopping switched off."""
    return ChainSpec(fibonacci_approximant(n), Nearest(0.0), AAH(V))


def random_potential_chain(n: int, V: float, seed: int) -> ChainSpec:
    """Uniform on-site disorder on ``[-V/2, V/2]`` with zero hopping; ``seed`` is mandatory."""
    if seed is None:
        raise ParameterError("a random potential needs an explicit seed", path="effective.seed")
    approx = fibonacci_approximant(n)
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-V / 2.0, V / 2.0, size=approx.F_n)
    return ChainSpec(approx, Nearest(0.0), Sampled(tuple(float(v) for v in vals)))


def toy_model(chain1: ChainSpec, t_v: float) -> CoupledModelSpec:
    """``chain1`` rung-coupled to a free chain of the same length."""
    return CoupledModelSpec(chain1, free_chain(chain1.approximant.n), Rung(t_v))


def projected_residual(chain1: ChainSpec, t_v: float, E: float, v: np.ndarray) -> float:
    """Norm of ``(H1 + t_v^2 G(E) - E) v`` with the exact ring resolvent."""
    H1 = build_single_chain(chain1)
    G = ring_green_matrix(E, chain1.L)
    return float(np.linalg.norm((H1 + t_v**2 * G - E * np.eye(chain1.L)) @ v))
