"""How much inter-chain coupling reshapes eigenstates: overlaps with the decoupled basis."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyWindowError, ParameterError, ResonanceError
from .models import CoupledModelSpec, build_hamiltonian
from .multifractal import ScalingSeries
from .spectral import EigenSystem, diagonalize

DEGENERACY_TOL = 1e-9


def overlap_matrix(es0: EigenSystem, es: EigenSystem) -> np.ndarray:
    """``C[j', j] = <phi0_j' | phi_j>``."""
    if es0.N != es.N:
        raise ParameterError(f"dimension mismatch: {es0.N} vs {es.N}")
    return es0.states.T @ es.states


def degenerate_blocks(energies, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Block label per level; consecutive levels closer than ``tol`` share a label."""
    return np.r_[0, np.cumsum(np.diff(np.asarray(energies)) > tol)]


@dataclass(frozen=True)
class OverlapProfile:
    energies: np.ndarray
    max_overlap: np.ndarray
    argmax: np.ndarray
    degenerate: np.ndarray


def overlap_profile(es0: EigenSystem, es: EigenSystem, tol: float = DEGENERACY_TOL) -> OverlapProfile:
    """Max squared overlap per coupled state, with degenerate decoupled levels merged.

    Inside a degenerate block of the decoupled spectrum the overlap is the
    squared projection onto the whole block, which does not depend on the
    arbitrary basis the eigensolver picked there.
    """
    C2 = overlap_matrix(es0, es) ** 2
    labels = degenerate_blocks(es0.energies, tol)
    nb = labels[-1] + 1
    S = np.zeros((nb, es.N))
    np.add.at(S, labels, C2)
    best_block = S.argmax(axis=0)
    sizes = np.bincount(labels)
    # representative decoupled index: the strongest single state inside the best block
    masked = np.where(labels[:, None] == best_block[None, :], C2, -1.0)
    return OverlapProfile(
        energies=es.energies,
        max_overlap=np.minimum(S.max(axis=0), 1.0),
        argmax=masked.argmax(axis=0),
        degenerate=sizes[best_block] > 1,
    )


def fidelity_scaling(
    family: Callable[[int, float], CoupledModelSpec],
    ns: Sequence[int],
    t_v: float,
    window: Callable[[np.ndarray], np.ndarray],
    name: str = "max_overlap",
) -> ScalingSeries:
    """Windowed mean of Max|C_j|^2 across a ladder of approximants.

    ``family(n, t_v)`` builds the model; ``window(E)`` returns a boolean mask.
    """
    if len(ns) < 3:
        raise ParameterError("fidelity scaling needs at least three sizes")
    series = ScalingSeries(name, "1/n")
    for n in ns:
        es0 = diagonalize(build_hamiltonian(family(n, 0.0)))
        es = diagonalize(build_hamiltonian(family(n, t_v)))
        prof = overlap_profile(es0, es)
        mask = window(prof.energies)
        if not mask.any():
            raise EmptyWindowError(f"window selects no states at n={n}")
        series.add(n, es.N, float(prof.max_overlap[mask].mean()))
    return series


def perturbation_bound(t_v: float, Delta: float, W: float) -> float:
    """Second-order admixture scale ``t_v^2 W / Delta^2``."""
    if Delta == 0:
        raise ResonanceError("zero detuning: spectra overlap and the perturbative bound does not apply")
    if Delta < 0 or W < 1:
        raise ParameterError("need Delta > 0 and W >= 1")
    return t_v**2 * W / Delta**2


def localization_width(state) -> float:
    """``1 / max |psi|^2``, the number of sites a localized state effectively covers."""
    return float(1.0 / np.max(np.abs(np.asarray(state)) ** 2))
