"""Gauss-Legendre Runge-Kutta tableaux of orders 2, 4 and 6."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TableauError

__all__ = ["GaussTableau", "gauss_tableau", "check_symplectic", "SUPPORTED_STAGES"]

SUPPORTED_STAGES = (1, 2, 3)


@dataclass(frozen=True, eq=False)
class GaussTableau:
    """Butcher coefficients ``(A, b, c)`` of an ``s``-stage RK method."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float, ndmin=2)
        b = np.array(self.b, dtype=float, ndmin=1)
        c = np.array(self.c, dtype=float, ndmin=1)
        s = b.size
        if A.shape != (s, s) or c.size != s:
            raise TableauError(f"inconsistent tableau shapes A{A.shape}, b{b.shape}, c{c.shape}")
        for arr in (A, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def s(self) -> int:
        return self.b.size

    @property
    def order(self) -> int:
        return 2 * self.s


def gauss_tableau(s: int) -> GaussTableau:
    """Return the ``s``-stage Gauss method (``s`` in 1, 2, 3).

    Radicals are evaluated in ``np.longdouble`` and rounded once to float64.
    """
    one = np.longdouble(1)
    if s == 1:
        A = [[one / 2]]
        b = [one]
        c = [one / 2]
    elif s == 2:
        r3 = np.sqrt(np.longdouble(3))
        A = [[one / 4, one / 4 - r3 / 6], [one / 4 + r3 / 6, one / 4]]
        b = [one / 2, one / 2]
        c = [one / 2 - r3 / 6, one / 2 + r3 / 6]
    elif s == 3:
        r15 = np.sqrt(np.longdouble(15))
        A = [
            [5 * one / 36, 2 * one / 9 - r15 / 15, 5 * one / 36 - r15 / 30],
            [5 * one / 36 + r15 / 24, 2 * one / 9, 5 * one / 36 - r15 / 24],
            [5 * one / 36 + r15 / 30, 2 * one / 9 + r15 / 15, 5 * one / 36],
        ]
        b = [5 * one / 18, 4 * one / 9, 5 * one / 18]
        c = [one / 2 - r15 / 10, one / 2, one / 2 + r15 / 10]
    else:
        raise TableauError(f"unsupported stage count {s!r}; supported: {SUPPORTED_STAGES}")
    return GaussTableau(
        A=np.asarray(A, dtype=np.longdouble).astype(float),
        b=np.asarray(b, dtype=np.longdouble).astype(float),
        c=np.asarray(c, dtype=np.longdouble).astype(float),
    )


def check_symplectic(tableau: GaussTableau) -> float:
    """Largest violation of ``b_i a_ij + b_j a_ji = b_i b_j`` over all ``(i, j)``."""
    A, b = tableau.A, tableau.b
    M = b[:, None] * A + (b[:, None] * A).T - np.outer(b, b)
    return float(np.max(np.abs(M)))
