"""Two-component bichromatic lattice in the continuum, discretized by finite differences.

Units: energies in the recoil energy E_R, lengths in the primary lattice
period a. The kinetic term is then ``-(1/pi^2) d^2/dxi^2``. The box ``[0, L]``
is sampled at cell centres ``x_j = (j + 1/2) dx`` and the wave function is
odd about both walls, so it vanishes exactly at ``xi = 0`` and ``xi = L``.
Component 2 carries the incommensurate potential; the components are mixed
by a constant ``Omega/2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import ParameterError
from .spectral import EigenSystem


@dataclass(frozen=True)
class ContinuumSpec:
    V1: float
    V2: float
    Omega: float
    L_cells: int
    dx: float = 1.0 / 20.0
    beta: float | None = None

    def __post_init__(self):
        if self.L_cells < 1:
            raise ParameterError("L_cells must be positive", path="continuum.L_cells")
        per_cell = 1.0 / self.dx
        if not self.dx > 0 or abs(per_cell - round(per_cell)) > 1e-9:
            raise ParameterError(f"dx must divide 1 exactly, got {self.dx}", path="continuum.dx")
        if self.dx > 0.1:
            warnings.warn(f"dx={self.dx} resolves a lattice period with only {round(per_cell)} points", RuntimeWarning)

    @property
    def points_per_cell(self) -> int:
        return int(round(1.0 / self.dx))

    @property
    def N_grid(self) -> int:
        return self.L_cells * self.points_per_cell

    @property
    def beta_value(self) -> float:
        if self.beta is not None:
            return self.beta
        return fibonacci_beta(self.L_cells)

    def grid(self) -> np.ndarray:
        return (np.arange(self.N_grid) + 0.5) * self.dx


def fibonacci_beta(L: int) -> float:
    """``F_{n-1}/F_n`` when L is a Fibonacci number, the golden ratio otherwise."""
    a, b = 1, 1
    while b < L:
        a, b = b, a + b
    return a / b if b == L else (math.sqrt(5.0) - 1.0) / 2.0


def _kinetic(spec: ContinuumSpec) -> float:
    return 1.0 / (math.pi**2 * spec.dx**2)


def _diagonals(spec: ContinuumSpec):
    x = spec.grid()
    kin = _kinetic(spec)
    T = np.full(spec.N_grid, 2.0 * kin)
    T[0] += kin
    T[-1] += kin
    Vp = spec.V1 * np.cos(np.pi * x) ** 2
    Vin = 0.5 * spec.V2 * np.cos(2.0 * np.pi * spec.beta_value * x)
    return kin, T + Vp, T + Vp + Vin


def build_continuum_hamiltonian(spec: ContinuumSpec) -> sp.csr_matrix:
    """Sparse symmetric operator, component-major: indices ``0..N-1`` then ``N..2N-1``."""
    kin, d1, d2 = _diagonals(spec)
    N = spec.N_grid
    off = -kin * np.ones(N - 1)
    block1 = sp.diags([off, d1, off], [-1, 0, 1])
    block2 = sp.diags([off, d2, off], [-1, 0, 1])
    mix = sp.identity(N) * (spec.Omega / 2.0)
    return sp.bmat([[block1, mix], [mix, block2]], format="csr")


def _banded_interleaved(spec: ContinuumSpec) -> np.ndarray:
    # index 2j + s; upper banded storage with two super-diagonals
    kin, d1, d2 = _diagonals(spec)
    n = 2 * spec.N_grid
    ab = np.zeros((3, n))
    ab[2, 0::2] = d1
    ab[2, 1::2] = d2
    ab[1, 1::2] = spec.Omega / 2.0
    ab[0, 2:] = -kin
    return ab


def solve_continuum(spec: ContinuumSpec, n_states: int | None = None) -> EigenSystem:
    """Lowest ``n_states`` eigenpairs (default ``4 L_cells``) of the full operator.

    States are returned component-major like ``build_continuum_hamiltonian``
    and normalized with the grid measure, ``sum |psi|^2 dx = 1``.
    """
    n_states = n_states or 4 * spec.L_cells
    ab = _banded_interleaved(spec)
    E, U = scipy.linalg.eig_banded(ab, lower=False, select="i", select_range=(0, n_states - 1))
    U = np.vstack([U[0::2], U[1::2]]) / math.sqrt(spec.dx)
    return EigenSystem(E, U, {"continuum": spec})


def s_band_states(es: EigenSystem, spec: ContinuumSpec) -> list[int]:
    """Lowest ``2 L_cells`` states; warns unless the gap above them exceeds their spread."""
    k = 2 * spec.L_cells
    E = es.energies
    if len(E) <= k:
        warnings.warn("spectrum too short to verify the s-band gap", RuntimeWarning)
        return list(range(min(k, len(E))))
    gap = E[k] - E[k - 1]
    spread = E[k - 1] - E[0]
    if not gap > spread:
        warnings.warn(f"no clear gap above the s-band: gap {gap:.4g} vs band spread {spread:.4g}", RuntimeWarning)
    return list(range(k))


def band_gap(es: EigenSystem, spec: ContinuumSpec) -> float:
    k = 2 * spec.L_cells
    return float(es.energies[k] - es.energies[k - 1])


def cell_weights(state, spec: ContinuumSpec) -> np.ndarray:
    """Probability per lattice cell, both components summed; shape ``(L_cells,)``."""
    p = np.abs(np.asarray(state)) ** 2 * spec.dx
    return p.reshape(2, spec.L_cells, spec.points_per_cell).sum(axis=(0, 2))


def continuum_tau2(state, spec: ContinuumSpec) -> float:
    """``D_2`` of the per-cell weights with the number of cells as log base."""
    w = cell_weights(state, spec)
    return float(-np.log(np.sum(w**2)) / np.log(spec.L_cells))


def continuum_tau2_all(es: EigenSystem, spec: ContinuumSpec) -> np.ndarray:
    p = es.states**2 * spec.dx
    w = p.reshape(2, spec.L_cells, spec.points_per_cell, -1).sum(axis=(0, 2))
    return -np.log(np.sum(w**2, axis=0)) / np.log(spec.L_cells)


def box_ground_energy(L_cells: float) -> float:
    """Free particle in ``[0, L]``: ``(1/L)^2`` in recoil units."""
    return 1.0 / L_cells**2


def bloch_band(V1: float, band: int = 0, nk: int = 64, nG: int = 21) -> tuple[float, float]:
    """Energy range of one Bloch band of ``V1 cos^2(pi xi)`` from a plane-wave expansion.

    The lattice has period 1, so plane waves ``exp(i 2 pi (q + G) xi)`` with
    kinetic energy ``4 (q + G)^2`` in recoil units; ``cos^2`` couples G to G +- 1
    with ``V1/4``.
    """
    Gs = np.arange(-(nG // 2), nG // 2 + 1)
    lo, hi = np.inf, -np.inf
    for q in np.linspace(-0.5, 0.5, nk):
        H = np.diag(4.0 * (q + Gs) ** 2 + V1 / 2.0)
        H += np.diag(np.full(nG - 1, V1 / 4.0), 1) + np.diag(np.full(nG - 1, V1 / 4.0), -1)
        e = np.linalg.eigvalsh(H)[band]
        lo, hi = min(lo, e), max(hi, e)
    return float(lo), float(hi)
