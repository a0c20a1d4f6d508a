"""
Two-dimensional quantum Zakharov runs
=====================================

Initial data cos^2(pi x/8) cos^2(pi y/8) on [-8, 8)^2.  There is no exact
solution, so the reference is SPRK-3 with tau = 1e-3 on the same grid.
A 64^2 grid keeps this quick; pass points=256 for the published size.
"""
from qzsprk import SolverParams, gauss_tableau, run
from qzsprk.experiments import cosine_2d, temporal_convergence

eps = 0.25
sc = cosine_2d(eps, points=64)
reference = run(sc.state0, SolverParams(tau=1e-3, eps=eps), gauss_tableau(3), 1.0)

for s, levels in ((2, 5), (3, 4)):
    rep = temporal_convergence(s, 0.25, levels, sc, reference=reference)
    print(f"SPRK-{s}, eps={eps}")
    for tau, e, n, re, rn in rep.rows():
        print(f"  tau={tau:<8.5g} e={e:.3e} n={n:.3e} rate_e={re:5.2f}")

# On 256^2 grids with small eps the fixed-point change can stall near 1e-14
# from round-off.  There, pass policy="warn" to SolverParams (or to
# temporal_convergence) to accept the capped iterate instead of aborting.
