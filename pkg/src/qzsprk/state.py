"""Field states and the initial-data families used in the experiments."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import CompatibilityError, DimensionError, GridShapeError
from .grid import SpectralGrid

__all__ = [
    "FieldState",
    "make_state",
    "init_zs_soliton",
    "exact_zs_solution",
    "init_cosine_2d",
    "init_two_solitons",
    "init_pump_wave",
    "pump_amplitude",
    "consistent_v0",
    "COLLISION_CASES",
]

# (x1, x2, V1, V2) for the three two-soliton collision set-ups.
COLLISION_CASES = {
    "I": (-30.0, 30.0, 0.5, -0.5),
    "II": (-30.0, 30.0, 0.75, -0.5),
    "III": (-5.0, 5.0, 0.75, -0.5),
}


@dataclass(frozen=True, eq=False)
class FieldState:
    """Solution ``(E, N, v)`` at time ``t``; ``q`` is carried only when tracked.

    ``E`` is complex, ``N``, ``v`` and ``q`` are real, all shaped like
    ``grid.shape``.
    """

    grid: SpectralGrid
    E: np.ndarray
    N: np.ndarray
    v: np.ndarray
    q: np.ndarray | None = None
    t: float = 0.0

    def __post_init__(self):
        g = self.grid
        object.__setattr__(self, "E", np.asarray(g.conform(self.E), dtype=complex))
        for name in ("N", "v", "q"):
            val = getattr(self, name)
            if val is None:
                continue
            arr = np.asarray(g.conform(val))
            if np.iscomplexobj(arr):
                if np.any(arr.imag != 0):
                    raise GridShapeError(f"{name} must be real")
                arr = arr.real
            object.__setattr__(self, name, np.asarray(arr, dtype=float))
        object.__setattr__(self, "t", float(self.t))

    @property
    def tracks_q(self) -> bool:
        return self.q is not None

    def with_q(self) -> "FieldState":
        """Copy that tracks ``q = |E|**2``."""
        return replace(self, q=np.abs(self.E) ** 2)

    def without_q(self) -> "FieldState":
        return replace(self, q=None)


def _sech(u):
    # overflow-free 1/cosh
    a = np.exp(-np.abs(u))
    return 2.0 * a / (1.0 + a * a)


def _require_dims(grid, dims, what):
    if grid.dims != dims:
        raise DimensionError(f"{what} needs a {dims}D grid, got {grid.dims}D")


def init_zs_soliton(grid: SpectralGrid, B: float = 1.0, V: float = 0.5, x0: float = 0.0):
    """Solitary wave of the classical Zakharov system at ``t = 0``.

    ``N1`` is the time derivative of the exact ``N`` at ``t = 0``,
    ``-4 B**3 V sech**2(B(x-x0)) tanh(B(x-x0))``.

    Returns
    -------
    E0, N0, N1 : ndarray
    """
    _require_dims(grid, 1, "init_zs_soliton")
    if not abs(V) < 1:
        raise ValueError("soliton velocity must satisfy |V| < 1")
    E0, N0 = exact_zs_solution(grid, B, V, x0, 0.0)
    u = B * (grid.coords() - x0)
    N1 = -4.0 * B**3 * V * _sech(u) ** 2 * np.tanh(u)
    return E0, N0, N1


def exact_zs_solution(grid: SpectralGrid, B: float, V: float, x0: float, t: float):
    """Exact ``(E, N)`` of the moving soliton at time *t* (``eps = 0`` only)."""
    _require_dims(grid, 1, "exact_zs_solution")
    x = grid.coords()
    u = B * (x - x0 - V * t)
    amp = np.sqrt(2.0 * B**2 * (1.0 - V**2))
    phase = V * (x - x0) / 2.0 - (V**2 / 4.0 - B**2) * t
    E = 1j * amp * _sech(u) * np.exp(1j * phase)
    N = -2.0 * B**2 * _sech(u) ** 2
    return E, N


def init_cosine_2d(grid: SpectralGrid):
    """``E0 = cos^2(pi x/8) cos^2(pi y/8)`` with ``N0 = N1 = 0`` (for ``[-8, 8)^2``)."""
    _require_dims(grid, 2, "init_cosine_2d")
    x, y = grid.coords()
    E0 = (np.cos(np.pi * x / 8) ** 2 * np.cos(np.pi * y / 8) ** 2).astype(complex)
    zero = np.zeros(grid.shape)
    return E0, zero, zero.copy()


def init_two_solitons(grid: SpectralGrid, x1=-30.0, x2=30.0, V1=0.5, V2=-0.5, case=None):
    """Superposition of two unit solitons at ``x1``, ``x2`` moving with ``V1``, ``V2``.

    Pass ``case`` ("I", "II" or "III") to use one of :data:`COLLISION_CASES`.
    """
    _require_dims(grid, 1, "init_two_solitons")
    if case is not None:
        x1, x2, V1, V2 = COLLISION_CASES[case]
    x = grid.coords()
    E0 = np.zeros(grid.shape, dtype=complex)
    N0 = np.zeros(grid.shape)
    N1 = np.zeros(grid.shape)
    for xj, Vj in ((x1, V1), (x2, V2)):
        if not abs(Vj) < 1:
            raise ValueError("soliton velocities must satisfy |V| < 1")
        u = x - xj
        s = _sech(u)
        E0 += 1j * np.sqrt(2.0 * (1.0 - Vj**2)) * s * np.exp(1j * Vj * u / 2.0)
        N0 -= 2.0 * s**2
        N1 -= 4.0 * Vj * s**2 * np.tanh(u)
    return E0, N0, N1


def pump_amplitude(k: float, eps: float) -> float:
    return k / np.sqrt(2.0) * (1.0 + eps**2 * k**2)


def init_pump_wave(grid: SpectralGrid, k: float = 0.7, beta: float = 0.001, eps: float = 0.0):
    """Perturbed homogeneous Langmuir pump wave.

    Warns when ``0 < k < sqrt(2) * E_amp`` fails, since the modulational
    instability that seeds the patterns then does not develop.
    """
    _require_dims(grid, 1, "init_pump_wave")
    amp = pump_amplitude(k, eps)
    if not 0 < k < np.sqrt(2.0) * amp:
        warnings.warn(
            f"pump wave k={k} outside the instability range 0 < k < {np.sqrt(2.0) * amp:.6g}",
            RuntimeWarning,
            stacklevel=2,
        )
    x = grid.coords()
    E0 = (amp * (1.0 + beta * np.cos(k * x))).astype(complex)
    N0 = -np.sqrt(2.0) * amp * k * beta * np.cos(k * x)
    return E0, N0, np.zeros(grid.shape)


def consistent_v0(grid: SpectralGrid, N1, compat_tol: float | None = None) -> np.ndarray:
    """Zero-mean solution of ``Delta_h v0 = N1``.

    Raises
    ------
    CompatibilityError
        If the mean of ``N1`` exceeds ``compat_tol`` (default
        ``max(1e-10 * max|N1|, 1e-14)``).
    """
    N1 = np.asarray(grid.conform(N1), dtype=float)
    if compat_tol is None:
        compat_tol = max(1e-10 * float(np.max(np.abs(N1), initial=0.0)), 1e-14)
    Nh = grid.rfft(N1)
    mean = Nh.flat[0].real / grid.size
    if abs(mean) > compat_tol:
        raise CompatibilityError(mean, compat_tol)
    lap = grid.lap_r
    vh = np.zeros_like(Nh)
    nz = lap != 0
    vh[nz] = Nh[nz] / lap[nz]
    return grid.irfft(vh)


def make_state(grid: SpectralGrid, E0, N0, N1, t: float = 0.0, track_q: bool = False,
               compat_tol: float | None = None) -> FieldState:
    """Consistently initialized :class:`FieldState` from ``(E0, N0, N1)``."""
    v0 = consistent_v0(grid, N1, compat_tol)
    state = FieldState(grid, E0, N0, v0, t=t)
    return state.with_q() if track_q else state
