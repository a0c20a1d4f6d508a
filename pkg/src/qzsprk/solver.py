"""Symplectic Runge-Kutta Fourier pseudo-spectral stepper for the quantum Zakharov system.

The reformulated system is

    E_t = i (Delta E - eps^2 Delta^2 E - N E)
    N_t = Delta v
    v_t = N - eps^2 Delta N + q,        q = |E|^2

and each step of an ``s``-stage Gauss method is solved by a fixed-point
iteration on the stage slopes ``k1`` (for ``E``) and ``k2`` (for ``N``).
Inside an iteration the linear part is treated exactly: every Fourier mode
gives an independent ``s x s`` system, ``(I - i tau lam A) k1 = rhs1`` and
``(I - tau^2 lam A A) k2 = rhs2`` with ``lam = Delta - eps^2 Delta^2``.
The block inverses depend only on ``(grid, eps, tau)`` and are computed
once per distinct ``lam`` value.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    NonConvergenceError,
    NonConvergenceWarning,
    SingularBlockError,
    TableauError,
)
from .grid import SpectralGrid
from .state import FieldState
from .tableau import GaussTableau, check_symplectic

__all__ = [
    "SolverParams",
    "SPRKSolver",
    "linear_multiplier",
    "block_inverses",
    "solve_k1_system",
    "solve_k2_system",
    "run",
]

POLICIES = ("abort", "warn")
SYMPLECTIC_TOL = 1e-12
COND_LIMIT = 1e12


@dataclass(frozen=True)
class SolverParams:
    """Time step, quantum parameter and fixed-point controls."""

    tau: float
    eps: float = 0.0
    fp_tol: float = 1e-14
    fp_max_iters: int = 30
    policy: str = "abort"
    track_q: bool = False

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.eps >= 0:
            raise ValueError("eps must be non-negative")
        if not self.fp_tol > 0:
            raise ValueError("fp_tol must be positive")
        if int(self.fp_max_iters) != self.fp_max_iters or self.fp_max_iters < 1:
            raise ValueError("fp_max_iters must be an integer >= 1")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")


def linear_multiplier(grid: SpectralGrid, eps: float, half: bool = False) -> np.ndarray:
    """Per-mode symbol ``Delta - eps^2 Delta^2`` (on the rfft half spectrum if ``half``)."""
    lap = grid.lap_r if half else grid.lap
    return lap - eps**2 * lap**2


def block_inverses(A, scale, lam, check: bool = True) -> np.ndarray:
    """Inverses of ``I - scale * lam * A`` for every entry of ``lam``.

    Returns an array of shape ``(s, s) + lam.shape``.  Only distinct values
    of ``lam`` are factored.
    """
    A = np.asarray(A)
    lam = np.asarray(lam)
    s = A.shape[0]
    uniq, inv_idx = np.unique(lam, return_inverse=True)
    blocks = np.eye(s) - (scale * uniq)[:, None, None] * A[None, :, :]
    if check:
        cond = np.linalg.cond(blocks)
        bad = np.flatnonzero(~(cond < COND_LIMIT))
        if bad.size:
            i = int(bad[0])
            mode = np.unravel_index(int(np.flatnonzero(inv_idx.ravel() == i)[0]), lam.shape)
            raise SingularBlockError(mode, float(cond[i]))
    binv = np.linalg.inv(blocks)
    out = binv[inv_idx.ravel()].reshape(lam.shape + (s, s))
    return np.moveaxis(out, (-2, -1), (0, 1)).copy()


def _apply_blocks(binv, rhs):
    s = binv.shape[0]
    return np.stack([sum(binv[i, j] * rhs[j] for j in range(s)) for i in range(s)])


def solve_k1_system(rhs, tableau: GaussTableau, tau: float, L) -> np.ndarray:
    """Solve ``(I - i tau L A) k = rhs`` mode by mode.

    *rhs* is a stack of per-stage spectral coefficients, shape ``(s,) + L.shape``;
    the solution is returned in the same (spectral) layout.
    """
    rhs = np.asarray(rhs)
    return _apply_blocks(block_inverses(tableau.A, 1j * tau, L), rhs)


def solve_k2_system(rhs, tableau: GaussTableau, tau: float, L) -> np.ndarray:
    """Solve ``(I - tau^2 L A A) k = rhs`` mode by mode (spectral in, spectral out)."""
    rhs = np.asarray(rhs)
    A2 = tableau.A @ tableau.A
    return _apply_blocks(block_inverses(A2, tau**2, L), rhs)


def _combine(coef, stages):
    # coef @ stages over the leading stage axis
    return np.tensordot(coef, stages, axes=(-1, 0))


class SPRKSolver:
    """Stepper bound to one grid, tableau and parameter set.

    Block inverses are cached per step size, so forward and backward steps
    can be mixed freely.  One instance must not step two states concurrently.
    """

    def __init__(self, grid: SpectralGrid, tableau: GaussTableau, params: SolverParams,
                 allow_nonsymplectic: bool = False):
        residual = check_symplectic(tableau)
        if residual > SYMPLECTIC_TOL and not allow_nonsymplectic:
            raise TableauError(
                f"tableau violates the symplectic condition (residual {residual:.3e}); "
                "conservation would not hold"
            )
        self.grid = grid
        self.tableau = tableau
        self.params = params
        self.L = linear_multiplier(grid, params.eps)
        self.L_half = linear_multiplier(grid, params.eps, half=True)
        self._blocks = {}
        self.last_residual = np.nan

    def blocks(self, tau: float):
        """Cached ``(k1, k2)`` block inverses for step size *tau*."""
        if tau not in self._blocks:
            A = self.tableau.A
            self._blocks[tau] = (
                block_inverses(A, 1j * tau, self.L),
                block_inverses(A @ A, tau**2, self.L_half),
            )
        return self._blocks[tau]

    def _q_base(self, state):
        if self.params.track_q:
            if state.q is None:
                raise ValueError("track_q is on but the state carries no q")
            return state.q
        return np.abs(state.E) ** 2

    def fixed_point_step(self, state: FieldState, tau: float | None = None, step: int = 0):
        """Iterate the stage slopes to convergence.

        Returns
        -------
        k1 : complex ndarray, shape ``(s,) + grid.shape``
        k2 : real ndarray, same shape
        iterations : int
        """
        p, g, tab = self.params, self.grid, self.tableau
        tau = p.tau if tau is None else tau
        A, c = tab.A, tab.c
        b1, b2 = self.blocks(tau)
        E, N, v = state.E, state.N, state.v
        q0 = self._q_base(state)

        rhs1_lin = 1j * self.L * g.fft(E)
        c_col = c.reshape((tab.s,) + (1,) * g.dims)
        rhs2_lin = tau * c_col * (self.L_half * g.rfft(N)) + g.lap_r * g.rfft(v)

        k1 = np.broadcast_to(E, (tab.s,) + E.shape).copy()
        k2 = np.broadcast_to(N, (tab.s,) + N.shape).copy()
        residual = np.inf
        for it in range(1, p.fp_max_iters + 1):
            Es = E + tau * _combine(A, k1)
            Ns = N + tau * _combine(A, k2)
            Q = q0 + tau * _combine(A, 2.0 * (Es.conj() * k1).real)
            rhs1 = rhs1_lin - g.fft(1j * Ns * Es)
            rhs2 = rhs2_lin + tau * g.lap_r * g.rfft(_combine(A, Q))
            k1_new = g.ifft(_apply_blocks(b1, rhs1))
            k2_new = g.irfft(_apply_blocks(b2, rhs2))
            residual = max(np.max(np.abs(k1_new - k1)), np.max(np.abs(k2_new - k2)))
            k1, k2 = k1_new, k2_new
            if residual < p.fp_tol:
                break
        else:
            self.last_residual = residual
            if p.policy == "abort":
                raise NonConvergenceError(step, state.t, p.fp_max_iters, residual)
            warnings.warn(
                str(NonConvergenceError(step, state.t, p.fp_max_iters, residual)),
                NonConvergenceWarning,
                stacklevel=2,
            )
            return k1, k2, p.fp_max_iters
        self.last_residual = residual
        return k1, k2, it

    def finalize_step(self, state: FieldState, k1, k2, tau: float | None = None) -> FieldState:
        """Assemble ``(E, N, v[, q])`` at ``t + tau`` from converged slopes."""
        p, g, tab = self.params, self.grid, self.tableau
        tau = p.tau if tau is None else tau
        A, b = tab.A, tab.b
        Es = state.E + tau * _combine(A, k1)
        Ns = state.N + tau * _combine(A, k2)
        E1 = state.E + tau * _combine(b, k1)
        N1 = state.N + tau * _combine(b, k2)
        k4 = 2.0 * (Es.conj() * k1).real
        Q = self._q_base(state) + tau * _combine(A, k4)
        if p.eps:
            k3 = Ns - p.eps**2 * g.irfft(g.lap_r * g.rfft(Ns)) + Q
        else:
            k3 = Ns + Q
        v1 = state.v + tau * _combine(b, k3)
        q1 = state.q + tau * _combine(b, k4) if p.track_q else None
        return replace(state, E=E1, N=N1, v=v1, q=q1, t=state.t + tau)

    def step(self, state: FieldState, backward: bool = False, step: int = 0):
        """Advance one step (``backward=True`` uses ``-tau``).  Returns ``(state, iterations)``."""
        tau = -self.params.tau if backward else self.params.tau
        k1, k2, iters = self.fixed_point_step(state, tau, step=step)
        return self.finalize_step(state, k1, k2, tau), iters


def _stride(observer):
    return max(1, int(getattr(observer, "stride", 1)))


def run(state0: FieldState, params: SolverParams, tableau: GaussTableau, T: float,
        observers=(), solver: SPRKSolver | None = None) -> FieldState:
    """Integrate from ``state0.t`` over a span ``T`` that must be a whole number of steps.

    Each observer is called as ``observer(n, state, iterations)`` at step 0
    and at every multiple of its ``stride`` attribute (default 1).
    """
    J = int(round(T / params.tau))
    if J < 0 or abs(J * params.tau - T) > 1e-12 * max(abs(T), params.tau):
        raise ValueError(f"T={T!r} is not an integer multiple of tau={params.tau!r}")
    if params.track_q and state0.q is None:
        state0 = state0.with_q()
    solver = solver or SPRKSolver(state0.grid, tableau, params)
    observers = tuple(observers)
    t0 = state0.t
    state = state0
    for obs in observers:
        obs(0, state, 0)
    for n in range(1, J + 1):
        state, iters = solver.step(state, step=n)
        # pin t to the grid of step times so long runs do not drift
        state = replace(state, t=t0 + n * params.tau)
        for obs in observers:
            if n % _stride(obs) == 0:
                obs(n, state, iters)
    return state
