"""Tight-binding models for single and coupled quasiperiodic chains.

Every matrix produced here is real symmetric with periodic boundary
conditions on a Fibonacci approximant: a chain has ``L = F_n`` sites and the
quasiperiodic frequency is ``beta_n = F_{n-1}/F_n``. A coupled model stacks two
chains as ``[[H1, C], [C.T, H2]]`` with chain 1 occupying indices ``0..L-1``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import ParameterError

GOLDEN_BETA = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FibonacciApproximant:
    n: int
    F_n: int
    F_prev: int

    @property
    def beta_fraction(self) -> Fraction:
        return Fraction(self.F_prev, self.F_n)

    @property
    def beta(self) -> float:
        return self.F_prev / self.F_n

    @property
    def L(self) -> int:
        return self.F_n


def fibonacci_number(n: int) -> int:
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return b if n >= 2 else a


def fibonacci_approximant(n: int) -> FibonacciApproximant:
    if not isinstance(n, (int, np.integer)) or not 3 <= n <= 30:
        raise ParameterError(f"Fibonacci index must be an integer in [3, 30], got {n!r}")
    n = int(n)
    return FibonacciApproximant(n=n, F_n=fibonacci_number(n), F_prev=fibonacci_number(n - 1))


# --- hopping kinds --------------------------------------------------------


@dataclass(frozen=True)
class Nearest:
    J: float = 1.0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ParameterError(f"hopping sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class ExponentialLongRange:
    """Hopping ``J0 * exp(-p * d)`` between every pair, ``d`` the ring distance."""

    J0: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise ParameterError(f"long-range decay p must be positive, got {self.p}")


HoppingKind = Union[Nearest, ExponentialLongRange]


# --- potential kinds ------------------------------------------------------


@dataclass(frozen=True)
class NoPotential:
    pass


@dataclass(frozen=True)
class AAH:
    V: float
    phi: float = 0.0


@dataclass(frozen=True)
class GAAH:
    V: float
    a: float
    phi: float = 0.0

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise ParameterError(
                f"GAAH requires |a| < 1 (bounded potential), got a={self.a}"
            )


@dataclass(frozen=True)
class Mosaic:
    V: float
    phi: float = 0.0


@dataclass(frozen=True)
class SlowVarying:
    """``lam * cos(pi * beta * m**nu)``, nu < 1."""

    lam: float
    nu: float


@dataclass(frozen=True)
class Sampled:
    values: tuple[float, ...]


PotentialKind = Union[NoPotential, AAH, GAAH, Mosaic, SlowVarying, Sampled]


@dataclass(frozen=True)
class ChainSpec:
    approximant: FibonacciApproximant
    hopping: HoppingKind = field(default_factory=Nearest)
    potential: PotentialKind = field(default_factory=NoPotential)
    potential_sign: int = 1
    mu: float = 0.0

    def __post_init__(self):
        if self.potential_sign not in (1, -1):
            raise ParameterError("potential_sign must be +1 or -1")
        if isinstance(self.potential, Sampled) and len(self.potential.values) != self.L:
            raise ParameterError(
                f"sampled potential has {len(self.potential.values)} values, chain has {self.L} sites"
            )

    @property
    def L(self) -> int:
        return self.approximant.F_n


# --- couplings ------------------------------------------------------------


@dataclass(frozen=True)
class Rung:
    t_v: float


@dataclass(frozen=True)
class RungPlusCross:
    t_v: float


@dataclass(frozen=True)
class AntisymmetricCross:
    t_v: float


CouplingKind = Union[Rung, RungPlusCross, AntisymmetricCross]


@dataclass(frozen=True)
class CoupledModelSpec:
    chain1: ChainSpec
    chain2: ChainSpec
    coupling: CouplingKind

    def __post_init__(self):
        if self.chain1.approximant != self.chain2.approximant:
            raise ParameterError("both chains must share one Fibonacci approximant")

    @property
    def L_chain(self) -> int:
        return self.chain1.L

    @property
    def N(self) -> int:
        return 2 * self.chain1.L

    def decoupled(self) -> "CoupledModelSpec":
        return CoupledModelSpec(self.chain1, self.chain2, type(self.coupling)(0.0))


def spec_hash(spec) -> str:
    """Stable content hash of a (nested) frozen spec dataclass."""
    payload = {"type": type(spec).__name__, "fields": asdict(spec)}
    text = json.dumps(payload, sort_keys=True, default=repr)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# --- on-site sequences ----------------------------------------------------


def _raw_potential(pot: PotentialKind, m: np.ndarray, beta: float) -> np.ndarray:
    m = np.asarray(m)
    if isinstance(pot, NoPotential):
        return np.zeros(m.shape)
    if isinstance(pot, AAH):
        return 2.0 * pot.V * np.cos(2 * np.pi * beta * m + pot.phi)
    if isinstance(pot, GAAH):
        c = np.cos(2 * np.pi * beta * m + pot.phi)
        return 2.0 * pot.V * c / (1.0 - pot.a * c)
    if isinstance(pot, Mosaic):
        # (1 + (-1)^m) vanishes identically on odd sites
        even = (m % 2 == 0).astype(float)
        return 4.0 * pot.V * even * np.cos(2 * np.pi * beta * m + pot.phi)
    if isinstance(pot, SlowVarying):
        return pot.lam * np.cos(np.pi * beta * np.power(m.astype(float), pot.nu))
    if isinstance(pot, Sampled):
        return np.asarray(pot.values, dtype=float)[m]
    raise ParameterError(f"unknown potential kind {pot!r}")


def onsite(spec: ChainSpec) -> np.ndarray:
    m = np.arange(spec.L)
    return spec.potential_sign * _raw_potential(spec.potential, m, spec.approximant.beta) + spec.mu


def potential_value(spec: ChainSpec, m: int) -> float:
    if not 0 <= m < spec.L:
        raise ParameterError(f"site {m} outside chain of length {spec.L}")
    val = _raw_potential(spec.potential, np.array([m]), spec.approximant.beta)[0]
    return float(spec.potential_sign * val + spec.mu)


def ring_distance(L: int) -> np.ndarray:
    idx = np.arange(L)
    d = np.abs(idx[:, None] - idx[None, :])
    return np.minimum(d, L - d)


def hopping_matrix(hopping: HoppingKind, L: int) -> np.ndarray:
    H = np.zeros((L, L))
    if isinstance(hopping, Nearest):
        t = hopping.sign * hopping.J
        for m in range(L):
            H[m, (m + 1) % L] += t
            H[(m + 1) % L, m] += t
        return H
    if isinstance(hopping, ExponentialLongRange):
        d = ring_distance(L)
        H = hopping.J0 * np.exp(-hopping.p * d)
        np.fill_diagonal(H, 0.0)
        return H
    raise ParameterError(f"unknown hopping kind {hopping!r}")


def build_single_chain(spec: ChainSpec) -> np.ndarray:
    H = hopping_matrix(spec.hopping, spec.L)
    H[np.diag_indices(spec.L)] += onsite(spec)
    return H


def coupling_block(coupling: CouplingKind, L: int) -> np.ndarray:
    """Block ``C`` with ``C[i, j]`` the amplitude between chain-1 site i and chain-2 site j."""
    t = coupling.t_v
    C = np.zeros((L, L))
    m = np.arange(L)
    if isinstance(coupling, Rung):
        C[m, m] = t
    elif isinstance(coupling, RungPlusCross):
        # a_m^+ b_m + a_{m+1}^+ b_m + a_m^+ b_{m+1}
        C[m, m] += t
        C[m, (m + 1) % L] += t
        C[(m + 1) % L, m] += t
    elif isinstance(coupling, AntisymmetricCross):
        # a_m^+ b_{m+1} - a_m^+ b_{m-1}, with b on chain 1 and a on chain 2
        C[(m + 1) % L, m] += t
        C[(m - 1) % L, m] -= t
    else:
        raise ParameterError(f"unknown coupling kind {coupling!r}")
    return C


def build_hamiltonian(spec: CoupledModelSpec) -> np.ndarray:
    L = spec.L_chain
    H = np.zeros((2 * L, 2 * L))
    H[:L, :L] = build_single_chain(spec.chain1)
    H[L:, L:] = build_single_chain(spec.chain2)
    C = coupling_block(spec.coupling, L)
    H[:L, L:] = C
    H[L:, :L] = C.T
    return H


def dual_partner(spec: ChainSpec) -> ChainSpec:
    """Aubry dual of a nearest-neighbour AAH chain: hopping and potential swap."""
    if not isinstance(spec.potential, AAH) or not isinstance(spec.hopping, Nearest):
        raise ParameterError("dual partner is defined only for nearest-neighbour AAH chains")
    if spec.potential.phi != 0.0:
        raise ParameterError("dual partner requires phi = 0")
    return ChainSpec(
        approximant=spec.approximant,
        hopping=Nearest(J=spec.potential.V, sign=spec.hopping.sign),
        potential=AAH(V=spec.hopping.J),
        potential_sign=spec.potential_sign,
        mu=spec.mu,
    )


# --- named model families -------------------------------------------------


def aah_chain(n: int, V: float, J: float = 1.0, phi: float = 0.0) -> ChainSpec:
    return ChainSpec(fibonacci_approximant(n), Nearest(J), AAH(V, phi))


def free_chain(n: int, J: float = 1.0, mu: float = 0.0) -> ChainSpec:
    return ChainSpec(fibonacci_approximant(n), Nearest(J), NoPotential(), mu=mu)


def minimal_model(n: int, V: float, t_v: float, coupling: str = "rung") -> CoupledModelSpec:
    """AAH chain (chain 1) coupled to a free chain (chain 2)."""
    kinds = {"rung": Rung, "rung_plus_cross": RungPlusCross, "antisymmetric_cross": AntisymmetricCross}
    return CoupledModelSpec(aah_chain(n, V), free_chain(n), kinds[coupling](t_v))


def coupled_gaah_model(n: int, V: float, a: float, t_v: float) -> CoupledModelSpec:
    approx = fibonacci_approximant(n)
    return CoupledModelSpec(ChainSpec(approx, Nearest(1.0), GAAH(V, a)), free_chain(n), Rung(t_v))


def coupled_mosaic_model(n: int, V: float, t_v: float) -> CoupledModelSpec:
    approx = fibonacci_approximant(n)
    return CoupledModelSpec(ChainSpec(approx, Nearest(1.0), Mosaic(V)), free_chain(n), Rung(t_v))


def dual_coupled_model(n: int, J: float, V: float, t_v: float) -> CoupledModelSpec:
    """Chain 1: unit hopping with ``2V cos``; chain 2: hopping J with ``2 cos``."""
    return CoupledModelSpec(aah_chain(n, V, J=1.0), aah_chain(n, 1.0, J=J), Rung(t_v))


def soc_model(n: int, V: float, lam: float, t_so: float, t0: float = 1.0) -> CoupledModelSpec:
    """Spin-orbit coupled lattice written as two coupled AAH chains.

    Spin up: hopping ``-t0`` and potential ``(1+lam) V cos``; spin down: hopping
    ``+t0`` and potential ``-(1-lam) V cos``. The on-site ``delta_i = V cos`` has
    no factor 2, hence ``AAH(V*(1 +- lam)/2)``.
    """
    approx = fibonacci_approximant(n)
    up = ChainSpec(approx, Nearest(t0, sign=-1), AAH((1 + lam) * V / 2))
    down = ChainSpec(approx, Nearest(t0, sign=1), AAH((1 - lam) * V / 2), potential_sign=-1)
    # up_i^+ down_{i+1} - up_i^+ down_{i-1} is the antisymmetric cross term with t = -t_so
    return CoupledModelSpec(up, down, AntisymmetricCross(-t_so))


# --- analytic mobility edges ----------------------------------------------


def gaah_edge_general(J: float, V: float, a: float) -> float:
    """Mobility edge from ``a E = 2 sign(|J| - |V|)``."""
    return 2.0 * math.copysign(1.0, abs(J) - abs(V)) / a


def gaah_edge(V: float, a: float) -> float:
    """Mobility edge from ``a E_c = 2 - 2V`` (unit hopping)."""
    return (2.0 - 2.0 * V) / a


def mosaic_edges(V: float, J: float = 1.0) -> tuple[float, float]:
    e = J / (2.0 * V)
    return -e, e


def laah_edge(J: float, V: float, p: float) -> float:
    """Mobility edge from ``cosh(p) = (E + J) / V``."""
    return V * math.cosh(p) - J


def slow_varying_edges(lam: float) -> tuple[float, float]:
    e = abs(2.0 - lam)
    return -e, e
