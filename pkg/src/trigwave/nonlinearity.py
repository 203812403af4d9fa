"""Collocation nonlinearities as aliased (mod 2K) convolutions.

On the collocation grid, the product of two trigonometric polynomials
is again a polynomial over the same mode set, with coefficients given
by the cyclic convolution

    (y * z)_j = sum over k + l congruent to j (mod 2K) of y_k z_l .

A pointwise product of collocation values therefore corresponds exactly
to this convolution, so the fast path for every nonlinearity is:
transform to collocation values, apply the scalar map pointwise,
transform back.  No dealiasing is applied on purpose; the aliased
product is the discrete system being solved.

The supported right-hand sides come from a scalar function g with
g(0) = 0 and g'(0) <= 0.  The linear part g'(0) u is absorbed into the
frequencies (see :mod:`trigwave.integrators`), so what is evaluated
here is gtilde(u) = g(u) - g'(0) u:

    power p:        gtilde(u) = u^p
    klein_gordon:   g(u) = -rho u + u^p,  gtilde(u) = u^p
    sine_gordon:    g(u) = -sin(u),       gtilde(u) = u - sin(u)
    series:         g(u) = sum a_m u^m,   gtilde(u) = sum_{m>=2} a_m u^m
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .spectral import CoeffVector


@dataclass(frozen=True)
class NonlinearitySpec:
    """Immutable description of the nonlinearity; build via the classmethods.

    ``linear_shift`` is g'(0); it is not part of the evaluated map but
    is consumed by the frequency constructors.  ``prefilter``, when
    present, is a diagonal (one real value per mode, FFT storage order)
    applied to the argument before the scalar map; it realises a
    nonlinearity of the form z -> f(Phi z).
    """

    kind: str  # "power" | "klein_gordon" | "sine_gordon" | "series"
    p: Optional[int] = None
    rho: Optional[float] = None
    coefficients: Optional[tuple[float, ...]] = None  # a_1, a_2, ..., a_M
    linear_shift: float = 0.0
    prefilter: Optional[tuple[float, ...]] = None

    @classmethod
    def power(cls, p: int) -> "NonlinearitySpec":
        """Pure power nonlinearity u^p, p >= 2."""
        if not isinstance(p, int) or p < 2:
            raise ValueError(f"power exponent must be an integer >= 2, got {p}")
        return cls(kind="power", p=p, linear_shift=0.0)

    @classmethod
    def klein_gordon(cls, rho: float, p: int = 2) -> "NonlinearitySpec":
        """Klein-Gordon right-hand side -rho u + u^p with rho > 0."""
        if not rho > 0:
            raise ValueError(f"klein_gordon requires rho > 0, got {rho}")
        if not isinstance(p, int) or p < 2:
            raise ValueError(f"power exponent must be an integer >= 2, got {p}")
        return cls(kind="klein_gordon", p=p, rho=float(rho), linear_shift=-float(rho))

    @classmethod
    def sine_gordon(cls) -> "NonlinearitySpec":
        """Sine-Gordon right-hand side -sin(u)."""
        return cls(kind="sine_gordon", linear_shift=-1.0)

    @classmethod
    def series(cls, coefficients) -> "NonlinearitySpec":
        """Analytic g given by its Taylor coefficients a_1, ..., a_M.

        The expansion is truncated at the supplied order; the truncation
        error is the caller's responsibility.  a_1 = g'(0) must be <= 0.
        """
        coeffs = tuple(float(a) for a in coefficients)
        if not coeffs:
            raise ValueError("series requires at least the linear coefficient a_1")
        if coeffs[0] > 0:
            raise ValueError(f"series requires a_1 = g'(0) <= 0, got {coeffs[0]}")
        return cls(kind="series", coefficients=coeffs, linear_shift=coeffs[0])

    @classmethod
    def zero(cls) -> "NonlinearitySpec":
        """Vanishing nonlinearity; the system is then purely linear."""
        return cls(kind="series", coefficients=(0.0,), linear_shift=0.0)

    def with_prefilter(self, phi) -> "NonlinearitySpec":
        """Variant evaluating z -> f(Phi z); phi is per-mode, storage order.

        Composes with any prefilter already present.
        """
        phi = np.asarray(phi, dtype=float)
        if self.prefilter is not None:
            phi = np.asarray(self.prefilter) * phi
        return replace(self, prefilter=tuple(float(x) for x in phi))


def _gtilde(spec: NonlinearitySpec, u: NDArray[np.complex128]) -> NDArray[np.complex128]:
    if spec.kind in ("power", "klein_gordon"):
        return u ** spec.p
    if spec.kind == "sine_gordon":
        return u - np.sin(u)
    if spec.kind == "series":
        # Horner evaluation of sum_{m>=2} a_m u^m.
        out = np.zeros_like(u)
        for a in spec.coefficients[:0:-1]:
            out = (out + a) * u
        return out * u
    raise ValueError(f"unknown nonlinearity kind {spec.kind!r}")


def evaluate_values(spec: NonlinearitySpec, values: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Array-level core of :func:`evaluate`; operates in FFT storage order."""
    if spec.prefilter is not None:
        values = np.asarray(spec.prefilter) * values
    n = values.shape[0]
    u = np.fft.ifft(values) * n
    return np.fft.fft(_gtilde(spec, u)) / n


def evaluate(spec: NonlinearitySpec, y: CoeffVector) -> CoeffVector:
    """Coefficients of gtilde(u) for the polynomial u represented by y.

    For the power kind this equals the p-fold cyclic self-convolution
    of y; for analytic kinds it sums the whole aliased convolution
    series of the truncationless scalar map at once.
    """
    return CoeffVector(y.grid, evaluate_values(spec, y.values))


def filtered(spec: NonlinearitySpec, phi, y: CoeffVector) -> CoeffVector:
    """Evaluate the filtered nonlinearity f(Phi y), Phi diagonal.

    ``phi`` holds one real value per mode in FFT storage order,
    matching ``y.values``.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != y.values.shape:
        raise ValueError(f"filter diagonal has shape {phi.shape}, expected {y.values.shape}")
    return evaluate(spec.with_prefilter(phi), y)


def cyclic_convolve(y: CoeffVector, z: CoeffVector) -> CoeffVector:
    """Cyclic convolution (y * z)_j = sum_{k+l = j mod 2K} y_k z_l, FFT path."""
    if y.grid != z.grid:
        raise ValueError("convolution operands live on different grids")
    n = y.grid.n_modes
    out = np.fft.fft(np.fft.ifft(y.values) * np.fft.ifft(z.values)) * n
    return CoeffVector(y.grid, out)


def cyclic_convolve_naive(y: CoeffVector, z: CoeffVector) -> CoeffVector:
    """Reference double-sum implementation of the cyclic convolution.

    O(K^2); retained as the independent oracle for the FFT path.
    """
    if y.grid != z.grid:
        raise ValueError("convolution operands live on different grids")
    n = y.grid.n_modes
    # Storage slot arithmetic is plain arithmetic modulo 2K.
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    out = (z.values[idx] * y.values[None, :]).sum(axis=1)
    return CoeffVector(y.grid, out)
