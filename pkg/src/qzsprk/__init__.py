"""Mass- and energy-conserving Gauss Runge-Kutta Fourier pseudo-spectral solvers
for the quantum Zakharov system on periodic 1D/2D domains."""

from .grid import (
    SpectralGrid,
    apply_laplacian,
    dense_d2_matrix,
    forward_transform,
    inverse_transform,
    make_grid,
)
from .tableau import GaussTableau, check_symplectic, gauss_tableau
from .state import (
    COLLISION_CASES,
    FieldState,
    consistent_v0,
    exact_zs_solution,
    init_cosine_2d,
    init_pump_wave,
    init_two_solitons,
    init_zs_soliton,
    make_state,
)
from .solver import SolverParams, SPRKSolver, linear_multiplier, run

__version__ = "0.1.0"
