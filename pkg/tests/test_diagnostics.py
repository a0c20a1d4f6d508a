import numpy as np
import pytest

from qzsprk import FieldState, SolverParams, SPRKSolver, dense_d2_matrix, gauss_tableau, make_grid, run
from qzsprk.diagnostics import (
    DiagnosticsRecord,
    DiagnosticsRecorder,
    error_norms,
    hamiltonian,
    inner,
    mass,
    q_defect,
    relative_residual_series,
)
from qzsprk.errors import GridShapeError
from qzsprk.experiments import zs_soliton


def zeros_state(g, E=0.0, N=0.0, v=0.0):
    one = np.ones(g.shape)
    return FieldState(g, E * one, N * one, v * one)


def test_mass_trivial():
    g = make_grid((0, 2 * np.pi), 8)
    assert mass(zeros_state(g)) == 0.0
    assert mass(zeros_state(g, E=1.0)) == pytest.approx(2 * np.pi, rel=1e-15)


def test_soliton_mass_matches_integral():
    st = zs_soliton(points=2048).state0
    # integral of 1.5 sech^2 over the line is 3
    assert abs(mass(st) - 3.0) < 1e-10


def test_inner_product_is_discrete_l2(rng):
    g = make_grid((0, 3), 12)
    u = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    assert inner(g, u, u).real == pytest.approx(g.cell * np.sum(np.abs(u) ** 2))


def test_hamiltonian_trivial_states():
    g = make_grid((0, 2 * np.pi, 0, 3), (8, 6))
    assert hamiltonian(zeros_state(g), 0.3) == 0.0
    c = 1.7
    area = 2 * np.pi * 3
    assert hamiltonian(zeros_state(g, N=c), 0.3) == pytest.approx(-(c**2) / 2 * area, rel=1e-14)


@pytest.mark.parametrize("eps", [0.0, 0.4])
def test_hamiltonian_matches_dense_oracle(eps, rng):
    g = make_grid((-3, 4), 32)
    x = g.coords()
    E = np.exp(-x**2) * np.exp(1j * x) + 0.1 * rng.standard_normal(32)
    N = np.cos(2 * np.pi * x / 7) + 0.1 * rng.standard_normal(32)
    v = np.sin(4 * np.pi * x / 7)
    st = FieldState(g, E, N, v)
    D = dense_d2_matrix(g)
    h = g.cell
    ip = lambda a, b: h * np.vdot(b, a).real
    ref = (
        ip(D @ E, E)
        - eps**2 * ip(D @ E, D @ E)
        - 0.5 * ip(N, N)
        + 0.5 * eps**2 * ip(D @ N, N)
        - ip(N, np.abs(E) ** 2)
        + 0.5 * ip(D @ v, v)
    )
    assert hamiltonian(st, eps) == pytest.approx(ref, rel=1e-11)


def test_hamiltonian_one_step_conserved(soliton_1024):
    st = soliton_1024
    nxt, _ = SPRKSolver(st.grid, gauss_tableau(2), SolverParams(tau=1 / 20)).step(st)
    h0 = hamiltonian(st, 0.0)
    assert abs(hamiltonian(nxt, 0.0) - h0) / abs(h0) < 1e-12


def test_error_norms(soliton_1024):
    assert error_norms(soliton_1024, soliton_1024) == (0.0, 0.0)
    assert error_norms(soliton_1024, (soliton_1024.E, soliton_1024.N)) == (0.0, 0.0)
    other = zs_soliton(points=64).state0
    with pytest.raises(GridShapeError):
        error_norms(soliton_1024, other)


@pytest.mark.parametrize("s,which,expected", [(2, 0, 2.57e-5), (3, 1, 2.10e-7)])
def test_published_error_at_quarter_step(s, which, expected):
    sc = zs_soliton()
    final = run(sc.state0, SolverParams(tau=0.25), gauss_tableau(s), 1.0)
    assert error_norms(final, sc.exact(1.0))[which] == pytest.approx(expected, rel=0.05)


def test_q_defect():
    g = make_grid((0, 1), 4)
    st = zeros_state(g, E=2.0)
    assert np.isnan(q_defect(st))
    assert q_defect(st.with_q()) == 0.0


def test_residual_series():
    recs = [DiagnosticsRecord(t, 2.0, -3.0) for t in (0.0, 0.5, 1.0)]
    series = relative_residual_series(recs)
    assert np.all(series.rm == 0) and np.all(series.rh == 0)
    single = relative_residual_series(recs[:1])
    assert len(single) == 1 and single.rm[1:].size == 0
    drift = relative_residual_series([DiagnosticsRecord(0, 2.0, 0.0), DiagnosticsRecord(1, 2.2, 1e-3)])
    assert drift.rm[1] == pytest.approx(0.1)
    assert drift.absolute_energy and drift.rh[1] == pytest.approx(1e-3)


def test_recorder_stride_and_fields(soliton_1024):
    rec = DiagnosticsRecorder(0.0, stride=3)
    run(soliton_1024, SolverParams(tau=0.1, track_q=True), gauss_tableau(2), 1.0, [rec])
    assert len(rec.records) == 10 // 3 + 1
    assert [r.t for r in rec.records] == pytest.approx([0.0, 0.3, 0.6, 0.9])
    assert rec.records[0].fp_iters == 0 and all(r.fp_iters > 0 for r in rec.records[1:])
    series = relative_residual_series(rec.records)
    np.testing.assert_allclose(series.rm, [r.rm for r in rec.records], rtol=0, atol=1e-300)
    assert rec.max_q_defect < 1e-13


@pytest.mark.slow
@pytest.mark.parametrize("s", [2, 3])
def test_long_run_round_off_plateau(s):
    sc = zs_soliton(points=1024, bounds=(-128, 128), track_q=True)
    rec = DiagnosticsRecorder(0.0, stride=20)
    run(sc.state0, SolverParams(tau=1 / 20, track_q=True), gauss_tableau(s), 200.0, [rec])
    assert rec.max_rm < 1e-10 and rec.max_rh < 1e-10
