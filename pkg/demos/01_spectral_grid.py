"""
Periodic grids and the spectral Laplacian
=========================================

A grid is a box with an even number of nodes per axis.  Derivatives are
multipliers in Fourier space, so the Laplacian of a trigonometric
polynomial is exact up to round-off.
"""
import numpy as np

from qzsprk import apply_laplacian, dense_d2_matrix, forward_transform, make_grid

# Four nodes on [0, 2pi): the multiplier is -m^2 in FFT order 0, 1, 2, -1.
g = make_grid((0, 2 * np.pi), 4)
print("eigenvalues, N=4:", g.eig[0])

# sin(x) is an eigenfunction of Delta with eigenvalue -1.
g = make_grid((0, 2 * np.pi), 32)
x = g.coords()
print("max |Delta sin + sin| =", np.max(np.abs(apply_laplacian(g, np.sin(x)) + np.sin(x))))

# The same operator written as a dense collocation matrix (test oracle only).
D = dense_d2_matrix(g)
f = np.exp(np.cos(x))
print("spectral vs dense:", np.max(np.abs(apply_laplacian(g, f) - D @ f)))
print("D2 is symmetric:", np.allclose(D, D.T), " eigenvalues <= 0:", np.linalg.eigvalsh(D).max() < 1e-9)

# A pure tone exp(i mu x) lands in Fourier mode 1.
g = make_grid((-128, 128), 2048)
tone = np.exp(1j * g.wavenumber_scale[0] * g.coords())
print("pure tone peak at mode", np.argmax(np.abs(forward_transform(g, tone))))

# 2D fields are stored as (Ny, Nx) arrays.
g2 = make_grid((-8, 8, -8, 8), (64, 32))
X, Y = g2.coords()
print("2D field shape:", X.shape, " cell area:", g2.cell)
