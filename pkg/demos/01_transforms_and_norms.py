"""Spectral grids, transforms and fractional Sobolev norms.

Walks through the basic representation: a 2*pi-periodic function is a
vector of Fourier coefficients over the modes j = -K, ..., K-1, moved
back and forth to its values on the 2K collocation points x_k = pi k/K.
"""

import numpy as np

from trigwave import (CoeffVector, make_grid, pair_norm, project_initial_data,
                      sobolev_norm, to_physical, to_spectral)
from trigwave.spectral import State

grid = make_grid(16)
print(f"grid: K = {grid.K}, {grid.n_modes} modes, "
      f"points from {grid.points[0]:.4f} to {grid.points[-1]:.4f}")

# A real function sampled on the collocation points interpolates exactly.
u = np.cos(3 * grid.points) + 0.5 * np.sin(grid.points) ** 2
y = to_spectral(u, grid)
print("\ncoefficients of cos(3x) + sin(x)^2 / 2 (nonzero modes):")
for j in grid.indices:
    if abs(y[j]) > 1e-14:
        print(f"  j = {j:+d}: {y[j]:.6f}")
print("real on the collocation points:", y.is_real_in_collocation())

round_trip = to_physical(y)
print("round-trip error:", np.max(np.abs(round_trip - u)))

# Sobolev norms weight mode j by max(1, |j|)^s; s may be any real number.
print("\nSobolev norms of the same function:")
for s in (-1.0, 0.0, 0.5, 1.0, 2.0):
    print(f"  s = {s:+.1f}: {sobolev_norm(y, s):.6f}")

# The norm of order 0 is the scaled Euclidean norm of the point values.
print("Parseval check:",
      sobolev_norm(y, 0.0), "=", np.linalg.norm(u) / np.sqrt(grid.n_modes))

# Energy-type norm of a (position, velocity) pair.
v = to_spectral(np.sin(2 * grid.points), grid)
print("pair norm |||(y, v)|||_0 =", pair_norm(State(y, v), 0.0))

# Periodisation of coefficients living outside the resolved modes:
# index 19 aliases onto 19 - 32 = -13 for K = 16.
folded = project_initial_data({19: 1.0, -13: 0.25}, grid, mode="fold")
truncated = project_initial_data({19: 1.0, -13: 0.25}, grid, mode="truncate")
print("\nfold picks up the alias:     y[-13] =", folded[-13])
print("truncate drops the outsider: y[-13] =", truncated[-13])
