"""Discrete invariants, error norms and relative residuals."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridShapeError
from .state import FieldState

__all__ = [
    "DiagnosticsRecord",
    "DiagnosticsRecorder",
    "ResidualSeries",
    "mass",
    "hamiltonian",
    "inner",
    "error_norms",
    "q_defect",
    "relative_residual_series",
]


def inner(grid, u, w) -> complex:
    """Discrete inner product ``h sum u conj(w)``."""
    return grid.cell * np.vdot(np.asarray(w).ravel(), np.asarray(u).ravel())


def mass(state: FieldState) -> float:
    return float(state.grid.cell * np.sum(np.abs(state.E) ** 2))


def hamiltonian(state: FieldState, eps: float) -> float:
    """Discrete Hamiltonian energy of ``(E, N, v)``.

    Sign convention: this is the negative of the physical energy, i.e. the
    Hamiltonian functional whose variational derivative drives the flow.
    Relative residuals are unaffected.
    """
    g = state.grid
    E, N, v = state.E, state.N, state.v
    lapE = g.ifft(g.lap * g.fft(E))
    lapN = g.irfft(g.lap_r * g.rfft(N))
    lapv = g.irfft(g.lap_r * g.rfft(v))
    h = g.cell
    terms = (
        np.vdot(E, lapE).real
        - eps**2 * np.vdot(lapE, lapE).real
        - 0.5 * np.sum(N * N)
        + 0.5 * eps**2 * np.sum(lapN * N)
        - np.sum(N * np.abs(E) ** 2)
        + 0.5 * np.sum(lapv * v)
    )
    return float(h * terms)


def q_defect(state: FieldState) -> float:
    """``max |q - |E|^2|``, or NaN when ``q`` is not tracked."""
    if state.q is None:
        return float("nan")
    return float(np.max(np.abs(state.q - np.abs(state.E) ** 2)))


def error_norms(state: FieldState, reference) -> tuple[float, float]:
    """Max-norm errors ``(e, n)`` of ``E`` and ``N`` against *reference*.

    *reference* is either a :class:`FieldState` on the same grid or an
    ``(E_ref, N_ref)`` pair of arrays.
    """
    if isinstance(reference, FieldState):
        if not reference.grid.same_as(state.grid):
            raise GridShapeError("reference lives on a different grid")
        E_ref, N_ref = reference.E, reference.N
    else:
        E_ref, N_ref = reference
        E_ref = state.grid.conform(E_ref)
        N_ref = state.grid.conform(N_ref)
    return float(np.max(np.abs(state.E - E_ref))), float(np.max(np.abs(state.N - N_ref)))


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    rm: float = 0.0
    rh: float = 0.0
    q_defect: float = float("nan")
    fp_iters: int = 0


@dataclass
class ResidualSeries:
    """Relative (or, for a zero baseline, absolute) drift of mass and energy."""

    t: np.ndarray
    rm: np.ndarray
    rh: np.ndarray
    absolute_mass: bool = False
    absolute_energy: bool = False

    def __len__(self):
        return len(self.t)


def _drift(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return values, False
    base = values[0]
    if base == 0:
        return np.abs(values - base), True
    return np.abs((values - base) / base), False


def relative_residual_series(records) -> ResidualSeries:
    """``RM`` and ``RH`` for every record, relative to the first one."""
    t = np.array([r.t for r in records], dtype=float)
    rm, abs_m = _drift([r.mass for r in records])
    rh, abs_h = _drift([r.energy for r in records])
    return ResidualSeries(t, rm, rh, abs_m, abs_h)


@dataclass
class DiagnosticsRecorder:
    """Observer for :func:`qzsprk.solver.run` collecting one record per stride."""

    eps: float
    stride: int = 1
    records: list = field(default_factory=list)

    def __call__(self, n, state, iters):
        M = mass(state)
        H = hamiltonian(state, self.eps)
        if self.records:
            M0, H0 = self.records[0].mass, self.records[0].energy
            rm = abs(M - M0) / abs(M0) if M0 else abs(M - M0)
            rh = abs(H - H0) / abs(H0) if H0 else abs(H - H0)
        else:
            rm = rh = 0.0
        self.records.append(
            DiagnosticsRecord(state.t, M, H, rm, rh, q_defect(state), int(iters))
        )

    @property
    def max_rm(self) -> float:
        return max((r.rm for r in self.records), default=0.0)

    @property
    def max_rh(self) -> float:
        return max((r.rh for r in self.records), default=0.0)

    @property
    def max_q_defect(self) -> float:
        vals = [r.q_defect for r in self.records if not np.isnan(r.q_defect)]
        return max(vals, default=float("nan"))
