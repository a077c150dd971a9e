"""Dense exact diagonalization and the spectral helpers built on it."""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import ContractError, NumericalError, ParameterError

CACHE_MAGIC = b"QCEIG\x00\x00\x00"
CACHE_VERSION = 1


@dataclass(frozen=True)
class EigenSystem:
    """Ascending energies; ``states[:, j]`` is the eigenvector of ``energies[j]``."""

    energies: np.ndarray
    states: np.ndarray
    model_tag: dict = field(default_factory=dict, compare=False)

    @property
    def N(self) -> int:
        return len(self.energies)

    def gram_deviation(self) -> float:
        G = self.states.T @ self.states
        return float(np.abs(G - np.eye(self.N)).max())


def _fix_signs(U: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    # first component with |u| > tol made positive, column by column
    first = np.argmax(np.abs(U) > tol, axis=0)
    signs = np.sign(U[first, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def diagonalize(H: np.ndarray, model_tag: dict | None = None) -> EigenSystem:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {H.shape}")
    if not np.array_equal(H, H.T):
        raise ContractError(f"matrix is not symmetric (max asymmetry {np.abs(H - H.T).max():.3g})")
    try:
        E, U = scipy.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed for {model_tag or 'unlabelled matrix'}: {exc}") from exc
    E.setflags(write=False)
    U = _fix_signs(U)
    U.setflags(write=False)
    return EigenSystem(E, U, dict(model_tag or {}))


def states_in_window(es: EigenSystem, Emin: float, Emax: float) -> list[int]:
    if not Emin < Emax:
        raise ParameterError(f"empty energy interval [{Emin}, {Emax}]")
    return np.flatnonzero((es.energies >= Emin) & (es.energies <= Emax)).tolist()


def abs_window(energies: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Boolean mask for ``lo < |E| < hi``; the regime windows are symmetric in E."""
    a = np.abs(np.asarray(energies))
    return (a > lo) & (a < hi)


def _check_norm(psi0: np.ndarray):
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-10:
        raise ContractError(f"initial state must be normalized, |psi0| = {nrm:.12g}")


def spectral_propagate(es: EigenSystem, psi0: np.ndarray, t: float) -> np.ndarray:
    psi0 = np.asarray(psi0)
    _check_norm(psi0)
    c = es.states.T @ psi0
    return es.states @ (np.exp(-1j * es.energies * t) * c)


def propagate_many(es: EigenSystem, psi0: np.ndarray, times) -> np.ndarray:
    """Rows are ``psi(t)`` for each entry of ``times``."""
    psi0 = np.asarray(psi0)
    _check_norm(psi0)
    c = es.states.T @ psi0
    phases = np.exp(-1j * np.outer(times, es.energies)) * c
    return phases @ es.states.T


def spectral_bands(energies: np.ndarray, gap: float) -> list[tuple[float, float]]:
    """Split a sorted spectrum into bands at level spacings larger than ``gap``."""
    E = np.sort(np.asarray(energies))
    breaks = np.flatnonzero(np.diff(E) > gap)
    starts = np.r_[0, breaks + 1]
    ends = np.r_[breaks, len(E) - 1]
    return [(float(E[a]), float(E[b])) for a, b in zip(starts, ends)]


def in_bands(x: np.ndarray, bands) -> np.ndarray:
    x = np.asarray(x)
    mask = np.zeros(x.shape, bool)
    for lo, hi in bands:
        mask |= (x >= lo) & (x <= hi)
    return mask


def overlap_mask(energies, spectrum1, spectrum2, gap: float = 0.05) -> np.ndarray:
    """States whose energy lies inside the band structure of both reference spectra."""
    return in_bands(energies, spectral_bands(spectrum1, gap)) & in_bands(
        energies, spectral_bands(spectrum2, gap)
    )


# --- binary eigen-cache ---------------------------------------------------
# layout: magic(8) | version u32 | N u64 | energies N*f8 | states N*N*f8 row-major; little-endian


def save_eigensystem(es: EigenSystem, path) -> None:
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<IQ", CACHE_VERSION, es.N))
        fh.write(np.ascontiguousarray(es.energies, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(es.states, dtype="<f8").tobytes())


def load_eigensystem(path) -> EigenSystem:
    data = Path(path).read_bytes()
    if data[:8] != CACHE_MAGIC:
        raise NumericalError(f"{path}: not an eigen-cache file")
    version, N = struct.unpack_from("<IQ", data, 8)
    if version != CACHE_VERSION:
        raise NumericalError(f"{path}: unsupported cache version {version}")
    off = 8 + struct.calcsize("<IQ")
    expected = off + 8 * (N + N * N)
    if len(data) != expected:
        raise NumericalError(f"{path}: truncated cache ({len(data)} of {expected} bytes)")
    E = np.frombuffer(data, dtype="<f8", count=N, offset=off).astype(float)
    U = np.frombuffer(data, dtype="<f8", count=N * N, offset=off + 8 * N).reshape(N, N).astype(float)
    return EigenSystem(E, U, {"cache": str(path)})


class EigenCache:
    """Directory of cached eigensystems keyed by a spec hash."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.eig"

    def get_or_compute(self, key: str, build) -> EigenSystem:
        p = self.path(key)
        if p.exists():
            return load_eigensystem(p)
        es = diagonalize(build(), {"spec_hash": key})
        save_eigensystem(es, p)
        return es
