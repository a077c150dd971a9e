"""Wave-function statistics: moments, fractal dimensions, scaling indices and their size scaling."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyWindowError, ParameterError
from .spectral import EigenSystem

EXTENDED_TAU2 = 0.8
LOCALIZED_TAU2 = 0.2


def _prob(state) -> np.ndarray:
    return np.abs(np.asarray(state)) ** 2


def moment_pq(state, q: float) -> float:
    p = _prob(state)
    if q == 0:
        return float(np.count_nonzero(p))
    return float(np.sum(p[p > 0] ** q))


def shannon_dimension(state, L_total: int) -> float:
    p = _prob(state)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / np.log(L_total))


def fractal_dimension(state, q: float, L_total: int) -> float:
    """Finite-size ``D_q(L)``; q=1 falls back to the on-site entropy limit."""
    if q == 1:
        return shannon_dimension(state, L_total)
    return float(-np.log(moment_pq(state, q)) / ((q - 1) * np.log(L_total)))


def tau2_all(states: np.ndarray, L_total: int) -> np.ndarray:
    """``D_2(L)`` of every column of ``states``."""
    return -np.log(np.sum(np.abs(states) ** 4, axis=0)) / np.log(L_total)


def alpha_indices(state, L_total: int) -> np.ndarray:
    p = _prob(state)
    with np.errstate(divide="ignore"):
        return -np.log(p) / np.log(L_total)


def alpha_min(state, L_total: int) -> float:
    return float(-np.log(np.max(_prob(state))) / np.log(L_total))


def alpha_min_all(states: np.ndarray, L_total: int) -> np.ndarray:
    return -np.log(np.max(np.abs(states) ** 2, axis=0)) / np.log(L_total)


def classify_tau2(tau2) -> np.ndarray:
    """Reporting labels at finite size: 'ext', 'loc' or 'crit'."""
    tau2 = np.asarray(tau2)
    out = np.full(tau2.shape, "crit", dtype="<U4")
    out[tau2 > EXTENDED_TAU2] = "ext"
    out[tau2 < LOCALIZED_TAU2] = "loc"
    return out


@dataclass(frozen=True)
class StateStats:
    j: int
    E: float
    P: dict
    tau2: float
    alpha_min: float
    ipr: float
    npr: float


def state_stats(es: EigenSystem, L_total: int | None = None, qs: Sequence[float] = (2.0,)) -> list[StateStats]:
    L_total = L_total or es.N
    U = es.states
    p = U**2
    ipr = np.sum(p**2, axis=0)
    tau2 = -np.log(ipr) / np.log(L_total)
    amin = -np.log(p.max(axis=0)) / np.log(L_total)
    moments = {q: np.sum(p**q, axis=0) for q in qs}
    return [
        StateStats(
            j=j,
            E=float(es.energies[j]),
            P={q: float(moments[q][j]) for q in qs},
            tau2=float(tau2[j]),
            alpha_min=float(amin[j]),
            ipr=float(ipr[j]),
            npr=float(1.0 / (es.N * ipr[j])),
        )
        for j in range(es.N)
    ]


def window_average(stats: Sequence[StateStats], Emin: float, Emax: float, field_name: str) -> float:
    vals = [getattr(s, field_name) for s in stats if Emin <= s.E <= Emax]
    if not vals:
        raise EmptyWindowError(f"no states with {Emin} <= E <= {Emax}")
    return float(np.mean(vals))


def masked_mean(values, mask) -> float:
    values = np.asarray(values)[np.asarray(mask)]
    if values.size == 0:
        raise EmptyWindowError("energy window selects no states")
    return float(values.mean())


def mean_ipr_npr(es: EigenSystem) -> tuple[float, float]:
    ipr = np.sum(es.states**4, axis=0)
    return float(ipr.mean()), float(np.mean(1.0 / (es.N * ipr)))


# --- finite-size extrapolation -------------------------------------------


@dataclass(frozen=True)
class FitResult:
    intercept: float
    slope: float
    residual: float


@dataclass
class ScalingSeries:
    """Samples ``(n, L, value)``; abscissa is ``1/n`` or ``1/ln L``."""

    quantity: str
    abscissa: str = "1/n"
    samples: list = field(default_factory=list)

    def add(self, n: int, L: int, value: float):
        self.samples.append((int(n), int(L), float(value)))

    def x(self) -> np.ndarray:
        if self.abscissa == "1/n":
            return np.array([1.0 / n for n, _, _ in self.samples])
        if self.abscissa == "1/lnL":
            return np.array([1.0 / np.log(L) for _, L, _ in self.samples])
        raise ParameterError(f"unknown abscissa {self.abscissa!r}")

    def y(self) -> np.ndarray:
        return np.array([v for _, _, v in self.samples])


def extrapolate(series: ScalingSeries) -> FitResult:
    if len(series.samples) < 3:
        raise ParameterError(f"need at least 3 samples to extrapolate, got {len(series.samples)}")
    x, y = series.x(), series.y()
    if np.ptp(x) == 0:
        raise ParameterError("degenerate abscissa: all samples share one size")
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return FitResult(intercept=float(coef[0]), slope=float(coef[1]), residual=resid)


# --- alpha_min distributions ---------------------------------------------


@dataclass(frozen=True)
class AlphaHistogram:
    edges: np.ndarray
    counts: np.ndarray
    L_total: int
    n: int | None = None

    @property
    def f_L(self) -> np.ndarray:
        """``ln(count)/ln(L)`` per bin, NaN for empty bins."""
        with np.errstate(divide="ignore"):
            f = np.log(self.counts.astype(float)) / np.log(self.L_total)
        f[self.counts == 0] = np.nan
        return f

    def modes(self, floor: float = 0.05) -> int:
        return count_modes(self.counts, floor)


def alpha_histogram(values, d_alpha: float = 0.02, L_total: int = 2, n: int | None = None) -> AlphaHistogram:
    if not d_alpha > 0:
        raise ParameterError("bin width must be positive")
    values = np.asarray(values, dtype=float)
    nbins = int(np.ceil((1.0 + d_alpha) / d_alpha - 1e-9))
    edges = np.arange(nbins + 1) * d_alpha
    finite = values[np.isfinite(values)]
    idx = np.clip(np.floor(finite / d_alpha + 1e-9).astype(int), 0, nbins - 1)
    counts = np.bincount(idx, minlength=nbins)
    return AlphaHistogram(edges, counts, L_total, n)


def count_modes(counts, floor: float = 0.05) -> int:
    """Number of contiguous runs of bins with count above ``floor * peak``."""
    counts = np.asarray(counts)
    if counts.max(initial=0) == 0:
        return 0
    above = counts > floor * counts.max()
    return int(np.sum(above[1:] & ~above[:-1]) + above[0])
