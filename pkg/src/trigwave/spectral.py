"""Spectral collocation on the 2*pi-periodic interval.

A trigonometric polynomial u(x) = sum_{j=-K}^{K-1} y_j exp(i j x) is
represented by its coefficient vector y over the mode set {-K, ..., K-1}.
Values on the 2K collocation points x_k = pi k / K, k = -K, ..., K-1,
and coefficients are exchanged by :func:`to_physical` and
:func:`to_spectral`; the normalisation is fixed so that
``to_spectral(to_physical(y)) == y`` up to roundoff.

Coefficients are stored internally in FFT layout j = 0, 1, ..., K-1,
-K, ..., -1.  Public accessors take and return the mathematical mode
index j; :meth:`CoeffVector.to_math_order` converts to the ascending
order -K, ..., K-1.

Sobolev norms of arbitrary real order s are the weighted l2 norms
``||y||_s = (sum_j <j>^(2s) |y_j|^2)^(1/2)`` with ``<j> = max(1, |j|)``.

All types are immutable after construction and all operations are pure
functions, so values can be shared freely between threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import NDArray

#: Largest grid parameter accepted by :func:`make_grid` by default.
MAX_K_DEFAULT = 1 << 13


@dataclass(frozen=True)
class SpectralGrid:
    """Collocation grid with modes j = -K, ..., K-1 and points x_k = pi k / K."""

    K: int

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"grid parameter K must be a positive integer, got {self.K}")

    @property
    def n_modes(self) -> int:
        """Number of modes (and collocation points), equal to 2K."""
        return 2 * self.K

    @property
    def indices(self) -> NDArray[np.int_]:
        """Mode indices in ascending mathematical order -K, ..., K-1."""
        return np.arange(-self.K, self.K)

    @property
    def indices_fft(self) -> NDArray[np.int_]:
        """Mode indices in storage (FFT) order 0, ..., K-1, -K, ..., -1."""
        return np.concatenate([np.arange(0, self.K), np.arange(-self.K, 0)])

    @property
    def points(self) -> NDArray[np.float64]:
        """Collocation points pi*k/K in ascending order, from -pi to pi - pi/K."""
        return np.pi * self.indices / self.K

    def slot(self, j: int) -> int:
        """Storage position of the mathematical mode index j."""
        if not -self.K <= j < self.K:
            raise ValueError(f"mode index {j} outside {{-K, ..., K-1}} for K={self.K}")
        return j % self.n_modes


def make_grid(K: int, max_k: int = MAX_K_DEFAULT) -> SpectralGrid:
    """Create a collocation grid with 2K modes.

    Any K >= 1 is accepted; the FFT-based transforms are fastest when K
    is a power of two, which is what the convergence experiments use.

    Raises:
        ValueError: if K < 1 or K exceeds ``max_k``.
    """
    if K < 1:
        raise ValueError(f"grid parameter K must be a positive integer, got {K}")
    if K > max_k:
        raise ValueError(f"grid parameter K={K} exceeds the configured maximum {max_k}")
    return SpectralGrid(int(K))


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Complex Fourier coefficients of a trigonometric polynomial.

    ``values`` is in FFT storage order; use :meth:`__getitem__` or
    :meth:`to_math_order` to address modes by mathematical index.
    """

    grid: SpectralGrid
    values: NDArray[np.complex128]

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n_modes,):
            raise ValueError(
                f"expected {self.grid.n_modes} coefficients for K={self.grid.K}, "
                f"got shape {values.shape}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: SpectralGrid) -> "CoeffVector":
        return cls(grid, np.zeros(grid.n_modes, dtype=np.complex128))

    @classmethod
    def unit(cls, grid: SpectralGrid, j: int, amplitude: complex = 1.0) -> "CoeffVector":
        """Unit mass (or given amplitude) at mathematical mode index j."""
        v = np.zeros(grid.n_modes, dtype=np.complex128)
        v[grid.slot(j)] = amplitude
        return cls(grid, v)

    @classmethod
    def from_math_order(cls, grid: SpectralGrid, values) -> "CoeffVector":
        """Build from coefficients listed in ascending index order -K, ..., K-1."""
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (grid.n_modes,):
            raise ValueError(f"expected {grid.n_modes} coefficients, got shape {values.shape}")
        return cls(grid, np.fft.ifftshift(values))

    @classmethod
    def from_coeff_map(cls, grid: SpectralGrid, coeffs: Mapping[int, complex]) -> "CoeffVector":
        """Build from a sparse {mode index: value} mapping over {-K, ..., K-1}."""
        v = np.zeros(grid.n_modes, dtype=np.complex128)
        for j, value in coeffs.items():
            v[grid.slot(j)] = value
        return cls(grid, v)

    def __getitem__(self, j: int) -> complex:
        return complex(self.values[self.grid.slot(j)])

    def to_math_order(self) -> NDArray[np.complex128]:
        """Coefficients in ascending index order -K, ..., K-1."""
        return np.fft.fftshift(self.values)

    def is_real_in_collocation(self, tol: float = 1e-12) -> bool:
        """Whether the polynomial takes real values on the collocation points.

        Checks the coefficient symmetry y_{-j} = conj(y_j) for
        1 <= j <= K-1 together with Im y_0 = 0 and Im y_{-K} = 0, each
        up to ``tol``.
        """
        v = self.values
        K = self.grid.K
        if abs(v[0].imag) > tol or abs(v[K].imag) > tol:
            return False
        if K == 1:
            return True
        upper = v[1:K]
        lower = v[:K:-1]  # slots 2K-1, ..., K+1, i.e. j = -1, ..., -(K-1)
        return bool(np.max(np.abs(lower - np.conj(upper))) <= tol)

    def _binary(self, other, op):
        if not isinstance(other, CoeffVector):
            return NotImplemented
        if other.grid != self.grid:
            raise ValueError("coefficient vectors live on different grids")
        return CoeffVector(self.grid, op(self.values, other.values))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        return CoeffVector(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class State:
    """Pair of coefficient vectors (position, velocity) on a common grid."""

    position: CoeffVector
    velocity: CoeffVector

    def __post_init__(self):
        if self.position.grid != self.velocity.grid:
            raise ValueError("position and velocity live on different grids")

    @property
    def grid(self) -> SpectralGrid:
        return self.position.grid

    def is_real_in_collocation(self, tol: float = 1e-12) -> bool:
        return self.position.is_real_in_collocation(tol) and self.velocity.is_real_in_collocation(tol)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def to_physical(y: CoeffVector) -> NDArray[np.complex128]:
    """Evaluate the polynomial on the collocation points.

    Returns u(x_k) = sum_j y_j exp(i j x_k) ordered like ``grid.points``.
    """
    u_fft = np.fft.ifft(y.values) * y.grid.n_modes
    return np.fft.fftshift(u_fft)


def to_spectral(u, grid: SpectralGrid) -> CoeffVector:
    """Coefficients of the trigonometric interpolant through collocation values.

    ``u`` must hold 2K values ordered like ``grid.points``.  Exact
    inverse of :func:`to_physical` up to roundoff.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (grid.n_modes,):
        raise ValueError(f"expected {grid.n_modes} collocation values, got shape {u.shape}")
    return CoeffVector(grid, np.fft.fft(np.fft.ifftshift(u)) / grid.n_modes)


def to_physical_naive(y: CoeffVector) -> NDArray[np.complex128]:
    """O(K^2) evaluation of the polynomial, kept as an oracle for the FFT path."""
    grid = y.grid
    basis = np.exp(1j * np.outer(grid.points, grid.indices))
    return basis @ y.to_math_order()


def to_spectral_naive(u, grid: SpectralGrid) -> CoeffVector:
    """O(K^2) interpolation, kept as an oracle for the FFT path."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (grid.n_modes,):
        raise ValueError(f"expected {grid.n_modes} collocation values, got shape {u.shape}")
    basis = np.exp(1j * np.outer(grid.points, grid.indices))
    return CoeffVector.from_math_order(grid, basis.conj().T @ u / grid.n_modes)


def project_initial_data(coeffs: Mapping[int, complex], grid: SpectralGrid,
                         mode: str = "fold") -> CoeffVector:
    """Reduce a finitely supported coefficient family (u_k), k in Z, to the grid.

    mode "fold" aliases every index onto the grid, y_j = sum of u_k over
    k congruent to j modulo 2K, which interpolates the underlying
    function in the collocation points.  mode "truncate" keeps only the
    indices already inside {-K, ..., K-1}.
    """
    if mode not in ("fold", "truncate"):
        raise ValueError(f"mode must be 'fold' or 'truncate', got {mode!r}")
    v = np.zeros(grid.n_modes, dtype=np.complex128)
    for k, value in coeffs.items():
        if mode == "fold":
            v[int(k) % grid.n_modes] += value
        elif -grid.K <= k < grid.K:
            v[grid.slot(int(k))] += value
    return CoeffVector(grid, v)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=512)
def _sobolev_weights(K: int, s: float) -> NDArray[np.float64]:
    j = np.concatenate([np.arange(0, K), np.arange(-K, 0)])
    bracket = np.maximum(1.0, np.abs(j).astype(float))
    w = bracket ** (2.0 * s)
    w.flags.writeable = False
    return w


def sobolev_norm(y: CoeffVector, s: float) -> float:
    """Weighted l2 norm ``(sum <j>^(2s) |y_j|^2)^(1/2)``; s may be negative."""
    w = _sobolev_weights(y.grid.K, float(s))
    return float(np.sqrt(np.sum(w * np.abs(y.values) ** 2)))


def pair_norm(state: State, sigma: float) -> float:
    """Energy-type norm ``(||y||_{sigma+1}^2 + ||ydot||_sigma^2)^(1/2)``."""
    a = sobolev_norm(state.position, sigma + 1.0)
    b = sobolev_norm(state.velocity, sigma)
    return float(np.hypot(a, b))
