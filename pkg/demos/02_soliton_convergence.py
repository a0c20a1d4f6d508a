"""
Temporal and spatial convergence on the moving soliton
======================================================

The classical Zakharov system (eps = 0) has an exact travelling soliton,
so errors can be measured directly.  SPRK-2 and SPRK-3 are the 2- and
3-stage Gauss methods, of order 4 and 6.
"""
from qzsprk.experiments import spatial_convergence, temporal_convergence, zs_soliton

scenario = zs_soliton(points=2048)  # [-128, 128), B = 1, V = 1/2

for s in (2, 3):
    rep = temporal_convergence(s, 0.25, 5, scenario, T=1.0)
    print(f"SPRK-{s} in time")
    for tau, e, n, re, rn in rep.rows():
        print(f"  tau={tau:<8.5g} e={e:.3e} n={n:.3e} rate_e={re:5.2f} rate_n={rn:5.2f}")

# Spatial errors need a negligible time error; SPRK-3 with tau = 1/64 is enough.
rep = spatial_convergence(3, 1.0, 4, lambda n: zs_soliton(points=n), T=1.0, tau=1 / 64)
print("spectral accuracy in space")
for h, e, n, *_ in rep.rows():
    print(f"  h={h:<6g} e={e:.3e} n={n:.3e}")
