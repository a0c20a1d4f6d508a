"""Convergence studies and long-time scenarios for the quantum Zakharov solver.

Scenario factories return a :class:`Scenario` holding the grid, ``eps``, a
consistently initialized state and, when known, the exact solution.  The
default sizes are the ones used in the published experiments; pass smaller
``points``/``T`` for quick runs.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .diagnostics import DiagnosticsRecorder, error_norms
from .grid import make_grid
from .solver import SolverParams, run
from .state import (
    COLLISION_CASES,
    FieldState,
    exact_zs_solution,
    init_cosine_2d,
    init_pump_wave,
    init_two_solitons,
    init_zs_soliton,
    make_state,
)
from .tableau import gauss_tableau

__all__ = [
    "Scenario",
    "ConvergenceReport",
    "SimulationResult",
    "SnapshotRecorder",
    "zs_soliton",
    "soliton_data",
    "cosine_2d",
    "two_solitons",
    "pump_wave",
    "SCENARIOS",
    "simulate",
    "temporal_convergence",
    "spatial_convergence",
    "semiclassical_limit",
    "collision_scenario",
    "pattern_scenario",
    "cpu_time_report",
    "reflection_defect",
]


@dataclass
class Scenario:
    name: str
    eps: float
    state0: FieldState
    exact: Callable[[float], tuple] | None = None
    settings: dict = field(default_factory=dict)

    @property
    def grid(self):
        return self.state0.grid


def zs_soliton(points=2048, bounds=(-128.0, 128.0), B=1.0, V=0.5, x0=0.0, track_q=False):
    """Single classical-ZS soliton (``eps = 0``) with its exact solution."""
    g = make_grid(bounds, points)
    state = make_state(g, *init_zs_soliton(g, B, V, x0), track_q=track_q)
    return Scenario(
        "zs_soliton", 0.0, state,
        exact=lambda t: exact_zs_solution(g, B, V, x0, t),
        settings=dict(B=B, V=V, x0=x0),
    )


def soliton_data(eps, points=1024, bounds=(-64.0, 64.0), B=1.0, V=0.5, x0=0.0, track_q=False):
    """Soliton initial data evolved with a nonzero ``eps`` (no exact solution)."""
    sc = zs_soliton(points, bounds, B, V, x0, track_q)
    return Scenario("soliton_data", float(eps), sc.state0, settings=dict(sc.settings))


def cosine_2d(eps=1.0 / 8, points=256, bounds=(-8.0, 8.0, -8.0, 8.0), track_q=False):
    """2D data ``cos^2(pi x/8) cos^2(pi y/8)`` on ``[-8, 8)^2``."""
    pts = (points, points) if np.isscalar(points) else tuple(points)
    g = make_grid(bounds, pts)
    state = make_state(g, *init_cosine_2d(g), track_q=track_q)
    return Scenario("cosine_2d", float(eps), state)


def two_solitons(case="I", eps=0.25, points=4000, bounds=(-200.0, 200.0), track_q=False):
    """Two-soliton collision data for preset *case* ("I", "II" or "III")."""
    g = make_grid(bounds, points)
    state = make_state(g, *init_two_solitons(g, case=case), track_q=track_q)
    return Scenario("two_solitons", float(eps), state, settings=dict(case=case))


def pump_wave(eps=0.0, k=0.7, beta=0.001, points=2000, bounds=(-100.0, 100.0), track_q=False):
    """Modulationally unstable pump wave."""
    g = make_grid(bounds, points)
    state = make_state(g, *init_pump_wave(g, k, beta, eps), track_q=track_q)
    return Scenario("pump_wave", float(eps), state, settings=dict(k=k, beta=beta))


SCENARIOS = {
    "zs_soliton": zs_soliton,
    "soliton_data": soliton_data,
    "cosine_2d": cosine_2d,
    "two_solitons": two_solitons,
    "pump_wave": pump_wave,
}


def _rates(levels, errs):
    levels = np.asarray(levels, dtype=float)
    errs = np.asarray(errs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(errs[:-1] / errs[1:]) / np.log(levels[:-1] / levels[1:])


@dataclass
class ConvergenceReport:
    """Errors per refinement level with observed orders between adjacent levels.

    ``rates_e[k]`` is ``log(e_k/e_{k+1}) / log(p_k/p_{k+1})``, which reduces
    to ``log2(e_k/e_{k+1})`` for a halving ladder.
    """

    axis: str
    levels: np.ndarray
    e: np.ndarray
    n: np.ndarray
    scheme: int = 0
    slope_e: float = float("nan")
    slope_n: float = float("nan")

    def __post_init__(self):
        self.levels = np.asarray(self.levels, dtype=float)
        self.e = np.asarray(self.e, dtype=float)
        self.n = np.asarray(self.n, dtype=float)
        if np.any(np.diff(self.levels) >= 0):
            raise ValueError("levels must be strictly decreasing")

    @property
    def rates_e(self):
        return _rates(self.levels, self.e)

    @property
    def rates_n(self):
        return _rates(self.levels, self.n)

    def rows(self):
        """``(level, e, n, rate_e, rate_n)`` tuples; the first row has NaN rates."""
        re = np.concatenate([[np.nan], self.rates_e]) if len(self.levels) else []
        rn = np.concatenate([[np.nan], self.rates_n]) if len(self.levels) else []
        return list(zip(self.levels, self.e, self.n, re, rn))


def _integrate(state0, eps, s, tau, T, observers=(), **kw):
    params = SolverParams(tau=tau, eps=eps, **kw)
    return run(state0, params, gauss_tableau(s), T, observers)


def temporal_convergence(s, tau0, n_levels, scenario: Scenario, T=1.0, ref_scheme=3,
                         ref_tau=1e-3, reference=None, **solver_kw) -> ConvergenceReport:
    """Errors at ``T`` for ``tau = tau0 / 2**k``, ``k < n_levels``.

    The reference is the exact solution when the scenario has one, otherwise
    an ``ref_scheme``-stage run with step ``ref_tau`` on the same grid.
    """
    if reference is None:
        if scenario.exact is not None:
            reference = scenario.exact(T)
        else:
            reference = _integrate(scenario.state0, scenario.eps, ref_scheme, ref_tau, T, **solver_kw)
    taus = tau0 / 2.0 ** np.arange(n_levels)
    errs = [
        error_norms(_integrate(scenario.state0, scenario.eps, s, tau, T, **solver_kw), reference)
        for tau in taus
    ]
    e, n = zip(*errs) if errs else ((), ())
    return ConvergenceReport("time", taus, e, n, scheme=s)


def spatial_convergence(s, h0, n_levels, factory: Callable[[int], Scenario], T=1.0,
                        tau=2.0**-12, **solver_kw) -> ConvergenceReport:
    """Errors at ``T`` on grids with spacing ``h0 / 2**k`` against the exact solution.

    ``factory(points)`` builds the scenario on a 1D grid with that many points.
    """
    hs, errs = [], []
    for k in range(n_levels):
        probe = factory(4)
        length = probe.grid.lengths[0]
        points = int(round(length / (h0 / 2**k)))
        sc = factory(points)
        if sc.exact is None:
            raise ValueError("spatial convergence needs a scenario with an exact solution")
        final = _integrate(sc.state0, sc.eps, s, tau, T, **solver_kw)
        hs.append(sc.grid.spacing[0])
        errs.append(error_norms(final, sc.exact(T)))
    e, n = zip(*errs) if errs else ((), ())
    return ConvergenceReport("space", hs, e, n, scheme=s)


def _fit_slope(levels, errs):
    levels = np.asarray(levels, dtype=float)
    errs = np.asarray(errs, dtype=float)
    ok = (levels > 0) & (errs > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(levels[ok]), np.log(errs[ok]), 1)[0])


def semiclassical_limit(s, eps_list, factory: Callable[[float], Scenario], tau=0.01, T=10.0,
                        **solver_kw) -> ConvergenceReport:
    """Distance at ``T`` between runs with ``eps`` and the classical run ``eps = 0``.

    Both runs share grid, scheme and step, so the difference isolates the
    ``eps``-dependence of the discrete solution.  The least-squares slope of
    ``log(err)`` against ``log(eps)`` is stored on the report.
    """
    eps_list = sorted((float(x) for x in eps_list), reverse=True)
    base = factory(0.0)
    classical = _integrate(base.state0, 0.0, s, tau, T, **solver_kw)
    errs = []
    for eps in eps_list:
        if eps == 0.0:
            errs.append((0.0, 0.0))
            continue
        sc = factory(eps)
        errs.append(error_norms(_integrate(sc.state0, eps, s, tau, T, **solver_kw), classical))
    e, n = zip(*errs) if errs else ((), ())
    return ConvergenceReport(
        "epsilon", eps_list, e, n, scheme=s,
        slope_e=_fit_slope(eps_list, e), slope_n=_fit_slope(eps_list, n),
    )


@dataclass
class SnapshotRecorder:
    """Observer keeping ``(t, transform(state))`` every *stride* steps."""

    stride: int = 1
    transform: Callable = lambda st: (np.abs(st.E), st.N.copy())
    frames: list = field(default_factory=list)

    def __call__(self, n, state, iters):
        self.frames.append((state.t, self.transform(state)))


@dataclass
class SimulationResult:
    scenario: Scenario
    final: FieldState
    diagnostics: DiagnosticsRecorder
    snapshots: SnapshotRecorder
    wall_time: float


def simulate(scenario: Scenario, s=2, tau=0.05, T=30.0, diag_stride=1, snap_stride=20,
             transform=None, extra_observers=(), **solver_kw) -> SimulationResult:
    """Run *scenario* with full diagnostics and periodic snapshots."""
    diag = DiagnosticsRecorder(scenario.eps, stride=diag_stride)
    snaps = SnapshotRecorder(stride=snap_stride)
    if transform is not None:
        snaps.transform = transform
    t0 = time.perf_counter()
    final = _integrate(scenario.state0, scenario.eps, s, tau, T,
                       observers=(diag, snaps, *extra_observers), **solver_kw)
    return SimulationResult(scenario, final, diag, snaps, time.perf_counter() - t0)


def collision_scenario(case="I", eps=0.25, T=30.0, points=4000, bounds=(-200.0, 200.0),
                       tau=0.05, s=2, snap_stride=20, **solver_kw) -> SimulationResult:
    """Two-soliton collision; snapshots hold ``(|E|, N)``.

    The published runs use ``T = 200``; the default here is shortened.
    """
    if case not in COLLISION_CASES:
        raise ValueError(f"unknown collision case {case!r}; choose from {sorted(COLLISION_CASES)}")
    track_q = solver_kw.get("track_q", False)
    sc = two_solitons(case, eps, points, bounds, track_q=track_q)
    return simulate(sc, s, tau, T, snap_stride=snap_stride, **solver_kw)


def pattern_scenario(eps=0.0, T=50.0, k=0.7, beta=0.001, points=2000, bounds=(-100.0, 100.0),
                     tau=0.05, s=2, snap_stride=20, **solver_kw) -> SimulationResult:
    """Pump-wave modulational instability; snapshots hold ``|E|**0.5`` for contour plots."""
    track_q = solver_kw.get("track_q", False)
    sc = pump_wave(eps, k, beta, points, bounds, track_q=track_q)
    return simulate(sc, s, tau, T, snap_stride=snap_stride,
                    transform=lambda st: np.sqrt(np.abs(st.E)), **solver_kw)


def reflection_defect(state: FieldState) -> float:
    """``max |f(-x) - f(x)|`` over ``E`` and ``N`` on a grid symmetric about 0."""
    def mirror(f):
        return np.roll(f[::-1], 1)

    return float(max(np.max(np.abs(mirror(state.E) - state.E)),
                     np.max(np.abs(mirror(state.N) - state.N))))


def cpu_time_report(entries=((1, 1e-3), (2, 1e-2), (3, 5e-2)), eps=1.0 / 8, points=64, T=1.0,
                    ref_tau=1e-3):
    """Errors and wall-clock seconds for ``(scheme, tau)`` pairs on the 2D scenario.

    Timings are hardware dependent and reported for information only.
    """
    sc = cosine_2d(eps, points)
    reference = _integrate(sc.state0, eps, 3, ref_tau, T)
    rows = []
    for s, tau in entries:
        t0 = time.perf_counter()
        final = _integrate(sc.state0, eps, s, tau, T)
        seconds = time.perf_counter() - t0
        e, n = error_norms(final, reference)
        rows.append(dict(scheme=s, tau=tau, e=e, n=n, seconds=seconds))
    return rows
