"""Periodic tensor-product grids and Fourier pseudo-spectral operators.

Fields live on the grid as numpy arrays of shape ``(Nx,)`` in 1D and
``(Ny, Nx)`` in 2D, so a C-order flatten gives the row-major ``(y, x)``
vector layout used by the snapshot format.

FFT convention
--------------
Forward transforms are unnormalized and inverse transforms carry the
``1/(Nx*Ny)`` factor (``scipy.fft`` "backward" norm).  Every spectral
operator in the package is a forward -> multiply -> inverse sandwich, so
results do not depend on this choice.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import GridShapeError, InvalidGridError

__all__ = [
    "SpectralGrid",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "apply_laplacian",
    "dense_d2_matrix",
    "laplacian_eigenvalues",
]

MIN_POINTS = 4


def default_workers() -> int:
    """Thread count for FFTs, taken from ``QZS_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("QZS_THREADS", "1")))
    except ValueError:
        return 1


def laplacian_eigenvalues(n: int, length: float) -> np.ndarray:
    """Eigenvalues ``-mu**2 * m**2`` in FFT order ``m = 0, 1, ..., n/2, -n/2+1, ..., -1``."""
    mu = 2.0 * np.pi / length
    m = np.fft.fftfreq(n, d=1.0 / n)
    return -(mu**2) * m**2 + 0.0  # + 0.0 turns -0.0 into 0.0


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Uniform periodic grid on ``[a, b)`` or ``[a, b) x [c, d)``.

    Attributes
    ----------
    bounds : tuple of (float, float)
        One ``(lo, hi)`` pair per axis, x first.
    points : tuple of int
        Points per axis, x first.
    """

    bounds: tuple
    points: tuple
    workers: int = field(default_factory=default_workers)

    def __post_init__(self):
        if len(self.bounds) != len(self.points) or len(self.points) not in (1, 2):
            raise InvalidGridError("grid must have one or two axes")
        for n in self.points:
            if int(n) != n or n < MIN_POINTS or n % 2:
                raise InvalidGridError(
                    f"point count {n} must be an even integer >= {MIN_POINTS}"
                )
        for lo, hi in self.bounds:
            if not hi > lo:
                raise InvalidGridError(f"degenerate domain [{lo}, {hi})")

        eig = tuple(
            laplacian_eigenvalues(n, hi - lo) for n, (lo, hi) in zip(self.points, self.bounds)
        )
        if self.dims == 1:
            lap = eig[0].copy()
            lap_r = eig[0][: self.points[0] // 2 + 1].copy()
        else:
            lx, ly = eig
            lap = ly[:, None] + lx[None, :]
            lap_r = ly[:, None] + lx[None, : self.points[0] // 2 + 1]
        for arr in (*eig, lap, lap_r):
            arr.setflags(write=False)
        object.__setattr__(self, "eig", eig)
        object.__setattr__(self, "lap", lap)
        object.__setattr__(self, "lap_r", lap_r)

    @property
    def dims(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple:
        """Array shape of a field: ``(Nx,)`` or ``(Ny, Nx)``."""
        return tuple(reversed(self.points))

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def lengths(self) -> tuple:
        return tuple(hi - lo for lo, hi in self.bounds)

    @property
    def spacing(self) -> tuple:
        return tuple(L / n for L, n in zip(self.lengths, self.points))

    @property
    def wavenumber_scale(self) -> tuple:
        return tuple(2.0 * np.pi / L for L in self.lengths)

    @property
    def cell(self) -> float:
        """Quadrature weight ``h_x`` or ``h_x * h_y``."""
        return float(np.prod(self.spacing))

    @property
    def measure(self) -> float:
        return float(np.prod(self.lengths))

    def axis_nodes(self, axis: int = 0) -> np.ndarray:
        (lo, _), n, h = self.bounds[axis], self.points[axis], self.spacing[axis]
        return lo + h * np.arange(n)

    def coords(self):
        """Node coordinates broadcast to the field shape (``x`` or ``(x, y)``)."""
        if self.dims == 1:
            return self.axis_nodes(0)
        x, y = np.meshgrid(self.axis_nodes(0), self.axis_nodes(1), indexing="xy")
        return x, y

    def conform(self, values) -> np.ndarray:
        """Return *values* reshaped to the field shape, accepting flat vectors."""
        arr = np.asarray(values)
        if arr.shape == self.shape:
            return arr
        if arr.ndim == 1 and arr.size == self.size:
            return arr.reshape(self.shape)
        raise GridShapeError(f"field of shape {arr.shape} does not match grid {self.shape}")

    def same_as(self, other: "SpectralGrid") -> bool:
        return self.points == other.points and self.bounds == other.bounds

    # Transforms.  The real variants use the half spectrum and are what the
    # solver uses for N, v and Q.
    def fft(self, f):
        return sfft.fftn(f, axes=self._axes, workers=self.workers)

    def ifft(self, fh):
        return sfft.ifftn(fh, axes=self._axes, workers=self.workers)

    def rfft(self, f):
        return sfft.rfftn(f, axes=self._axes, workers=self.workers)

    def irfft(self, fh):
        return sfft.irfftn(fh, s=self.shape, axes=self._axes, workers=self.workers)

    @property
    def _axes(self):
        return tuple(range(-self.dims, 0))


def make_grid(bounds, points, workers=None) -> SpectralGrid:
    """Build a :class:`SpectralGrid`.

    Parameters
    ----------
    bounds : (a, b) or ((a, b), (c, d)) or (a, b, c, d)
        Domain bounds, x axis first.
    points : int or (Nx, Ny)
        Even point counts, at least 4 per axis.
    """
    b = np.asarray(bounds, dtype=float).ravel()
    if b.size not in (2, 4):
        raise InvalidGridError(f"expected 2 or 4 bound values, got {b.size}")
    pairs = tuple((float(b[i]), float(b[i + 1])) for i in range(0, b.size, 2))
    pts = (points,) if np.isscalar(points) else tuple(points)
    try:
        pts = tuple(int(p) if float(p) == int(p) else p for p in pts)
    except (TypeError, ValueError) as exc:
        raise InvalidGridError(f"bad point counts {points!r}") from exc
    kwargs = {} if workers is None else {"workers": int(workers)}
    return SpectralGrid(bounds=pairs, points=pts, **kwargs)


def forward_transform(grid: SpectralGrid, f) -> np.ndarray:
    """Unnormalized DFT of a grid field (full complex spectrum)."""
    return grid.fft(grid.conform(f))


def inverse_transform(grid: SpectralGrid, fh, real: bool = False) -> np.ndarray:
    """Inverse of :func:`forward_transform`; ``real=True`` drops the imaginary part."""
    out = grid.ifft(grid.conform(fh))
    return out.real if real else out


def apply_laplacian(grid: SpectralGrid, f, power: int = 1) -> np.ndarray:
    """Apply the spectral Laplacian ``Delta_h`` (``power=1``) or ``Delta_h**2``."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    f = grid.conform(f)
    if np.iscomplexobj(f):
        return grid.ifft(grid.lap**power * grid.fft(f))
    return grid.irfft(grid.lap_r**power * grid.rfft(f))


def dense_d2_matrix(grid: SpectralGrid, axis: int = 0) -> np.ndarray:
    """Explicit Fourier collocation second-derivative matrix along one axis.

    Only meant as a test oracle on small grids; the solver never forms it.
    """
    n = grid.points[axis]
    mu = grid.wavenumber_scale[axis]
    x = grid.axis_nodes(axis)
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    d = np.empty((n, n))
    off = j != k
    half = mu * (x[j[off]] - x[k[off]]) / 2.0
    d[off] = 0.5 * mu**2 * (-1.0) ** (j[off] + k[off] + 1) / np.sin(half) ** 2
    np.fill_diagonal(d, -(mu**2) * (n**2 + 2) / 12.0)
    return d
