"""
Quantum to classical: the eps -> 0 limit
========================================

Runs with eps = 2^-5 ... 2^-13 are compared with the eps = 0 run on the
same grid and step.  The distance shrinks like eps^2.
"""
from qzsprk.experiments import semiclassical_limit, soliton_data

eps_list = [2.0 ** -(2 * j + 1) for j in range(2, 7)]
rep = semiclassical_limit(2, eps_list, lambda e: soliton_data(e, points=512, bounds=(-32, 32)),
                          tau=0.01, T=5.0)
for eps, e, n, re, rn in rep.rows():
    print(f"eps={eps:.3e}  e={e:.3e}  n={n:.3e}  pairwise rate={re:5.2f}")
print(f"least-squares slope: e {rep.slope_e:.3f}, n {rep.slope_n:.3f}")
