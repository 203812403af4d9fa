"""Time integrators for the semi-discrete oscillatory system.

The object of interest is the second-order system

    y''(t) = -Omega^2 y(t) + f(y(t))

for the coefficient vector y, with a diagonal nonnegative frequency
matrix Omega and a convolution nonlinearity f.  Its linear part is
solved exactly by the propagator

    R(t) = [[cos(t Omega), t sinc(t Omega)],
            [-Omega sin(t Omega), cos(t Omega)]]

applied mode by mode (:func:`exact_propagator_apply`).

A trigonometric integrator advances (y, ydot) by one step h via

    y^{n+1}    = cos(h Om) y^n + h sinc(h Om) ydot^n + h^2/2 Psi f(Phi y^n)
    ydot^{n+1} = -Om sin(h Om) y^n + cos(h Om) ydot^n
                 + h/2 Psi0 f(Phi y^n) + h/2 Psi1 f(Phi y^{n+1})

with diagonal filters Psi = psi(h Om) etc.  The step is explicit: the
position update never uses ydot^{n+1}, so no iteration is needed.  All
diagonal coefficient arrays for a fixed (h, frequencies) pair are
precomputed once per run.

The Stoermer-Verlet/leapfrog scheme is provided both in its native
two-step form (:func:`sv_two_step_run`) and as a trigonometric
integrator with modified frequencies (:func:`sv_as_trig`), which the
tests verify to be exactly equivalent under the step-size restriction
h*omega_j < 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from .exceptions import BlowUpError, CFLViolationError, ReferenceUnconvergedError
from .filters import FilterSet, method_filters, sinc
from .nonlinearity import NonlinearitySpec, evaluate_values
from .spectral import (CoeffVector, SpectralGrid, State, _sobolev_weights,
                       pair_norm, sobolev_norm)

#: A run aborts when the energy norm exceeds this multiple of its start value.
BLOWUP_FACTOR = 1e8


@dataclass(frozen=True, eq=False)
class FrequencySet:
    """Diagonal frequencies omega_j >= 0 in FFT storage order.

    ``growth_lower`` and ``growth_upper`` record constants c1, c2 with
    c1 |j| <= omega_j <= c2 (1 + |j|); they are metadata used by tests
    and diagnostics, not by the steppers.
    """

    grid: SpectralGrid
    omegas: NDArray[np.float64]
    origin: str
    growth_lower: float
    growth_upper: float

    def __post_init__(self):
        omegas = np.array(self.omegas, dtype=float)
        if omegas.shape != (self.grid.n_modes,):
            raise ValueError(
                f"expected {self.grid.n_modes} frequencies, got shape {omegas.shape}")
        if np.any(omegas < 0):
            raise ValueError("frequencies must be nonnegative")
        omegas.flags.writeable = False
        object.__setattr__(self, "omegas", omegas)

    @property
    def omega_min_nonzero(self) -> Optional[float]:
        """Smallest nonzero frequency, or None if all frequencies vanish."""
        nonzero = self.omegas[self.omegas > 0]
        return float(nonzero.min()) if nonzero.size else None

    @property
    def omega_max(self) -> float:
        return float(self.omegas.max())


def frequencies_spectral(grid: SpectralGrid, linear_shift: float = 0.0) -> FrequencySet:
    """Frequencies omega_j = sqrt(j^2 - linear_shift) of the collocation system.

    ``linear_shift`` is g'(0) <= 0 of the nonlinearity; zero gives the
    pure second-derivative frequencies omega_j = |j|.
    """
    if linear_shift > 0:
        raise ValueError(f"linear_shift must be <= 0, got {linear_shift}")
    j = grid.indices_fft.astype(float)
    omegas = np.sqrt(j * j - linear_shift)
    if linear_shift == 0:
        return FrequencySet(grid, omegas, "spectral", growth_lower=1.0, growth_upper=1.0)
    return FrequencySet(grid, omegas, f"spectral_shifted(gprime0={linear_shift})",
                        growth_lower=1.0, growth_upper=1.0 - linear_shift)


def frequencies_finite_difference(grid: SpectralGrid) -> FrequencySet:
    """Frequencies (2/dx) |sin(j dx / 2)|, dx = pi/K, of the three-point stencil."""
    dx = np.pi / grid.K
    j = grid.indices_fft.astype(float)
    omegas = (2.0 / dx) * np.abs(np.sin(j * dx / 2.0))
    return FrequencySet(grid, omegas, "finite_difference",
                        growth_lower=2.0 / np.pi, growth_upper=1.0)


@dataclass(frozen=True, eq=False)
class OscillatorySystem:
    """Grid, frequencies and nonlinearity of one semi-discrete system.

    ``inner_filter``, when present, is a fixed diagonal (FFT storage
    order) applied to the argument of the nonlinearity on top of the
    method filter Phi; it realises systems whose right-hand side is
    f(Phi z) by construction.
    """

    grid: SpectralGrid
    frequencies: FrequencySet
    nonlinearity: NonlinearitySpec
    inner_filter: Optional[NDArray[np.float64]] = None

    def __post_init__(self):
        if self.frequencies.grid != self.grid:
            raise ValueError("frequency set lives on a different grid")
        if self.inner_filter is not None:
            inner = np.array(self.inner_filter, dtype=float)
            if inner.shape != (self.grid.n_modes,):
                raise ValueError(
                    f"inner filter has shape {inner.shape}, expected ({self.grid.n_modes},)")
            inner.flags.writeable = False
            object.__setattr__(self, "inner_filter", inner)


def make_system(grid: SpectralGrid, nonlinearity: NonlinearitySpec,
                space: str = "spectral") -> OscillatorySystem:
    """Assemble the system for a nonlinearity, absorbing g'(0) into the frequencies."""
    if space == "spectral":
        freqs = frequencies_spectral(grid, nonlinearity.linear_shift)
    elif space == "fd":
        if nonlinearity.linear_shift != 0.0:
            raise ValueError("finite-difference frequencies are defined for unshifted "
                             "nonlinearities only (g'(0) = 0)")
        freqs = frequencies_finite_difference(grid)
    else:
        raise ValueError(f"space must be 'spectral' or 'fd', got {space!r}")
    return OscillatorySystem(grid=grid, frequencies=freqs, nonlinearity=nonlinearity)


# ---------------------------------------------------------------------------
# Exact propagator
# ---------------------------------------------------------------------------

def exact_propagator_apply(freqs: FrequencySet, t: float, state: State) -> State:
    """Apply the linear flow R(t) mode by mode.

    For omega = 0 the block degenerates to ((1, t), (0, 1)).
    """
    omegas = freqs.omegas
    arg = t * omegas
    c = np.cos(arg)
    ts = t * sinc(arg)
    os_ = omegas * np.sin(arg)
    y = state.position.values
    v = state.velocity.values
    grid = state.grid
    return State(CoeffVector(grid, c * y + ts * v),
                 CoeffVector(grid, -os_ * y + c * v))


# ---------------------------------------------------------------------------
# Trigonometric one-step method
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _StepCoeffs:
    """Diagonal arrays of one (system, filters, h) combination."""

    cos_h: NDArray[np.float64]
    t_sinc: NDArray[np.float64]
    neg_omega_sin: NDArray[np.float64]
    half_h2_psi: NDArray[np.float64]
    half_h_psi0: NDArray[np.float64]
    half_h_psi1: NDArray[np.float64]
    phi: NDArray[np.float64]


def _step_coeffs(system: OscillatorySystem, fs: FilterSet, h: float) -> _StepCoeffs:
    omegas = system.frequencies.omegas
    arg = h * omegas
    xi = np.abs(arg)  # filters are even; this admits negative h for symmetry checks
    return _StepCoeffs(
        cos_h=np.cos(arg),
        t_sinc=h * sinc(arg),
        neg_omega_sin=-omegas * np.sin(arg),
        half_h2_psi=0.5 * h * h * np.asarray(fs.psi(xi), dtype=float),
        half_h_psi0=0.5 * h * np.asarray(fs.psi0(xi), dtype=float),
        half_h_psi1=0.5 * h * np.asarray(fs.psi1(xi), dtype=float),
        phi=np.asarray(fs.phi(xi), dtype=float),
    )


def _eval_filtered_f(system: OscillatorySystem, coeffs: _StepCoeffs,
                     y: NDArray[np.complex128]) -> NDArray[np.complex128]:
    z = coeffs.phi * y
    if system.inner_filter is not None:
        z = system.inner_filter * z
    return evaluate_values(system.nonlinearity, z)


def _step_once(system, coeffs, y, v, fy=None):
    """One step on raw arrays; returns (y1, v1, f(Phi y1)) for reuse."""
    if fy is None:
        fy = _eval_filtered_f(system, coeffs, y)
    y1 = coeffs.cos_h * y + coeffs.t_sinc * v + coeffs.half_h2_psi * fy
    fy1 = _eval_filtered_f(system, coeffs, y1)
    v1 = coeffs.neg_omega_sin * y + coeffs.cos_h * v + coeffs.half_h_psi0 * fy \
        + coeffs.half_h_psi1 * fy1
    return y1, v1, fy1


def _energy_norm(y, v, K):
    w1 = _sobolev_weights(K, 1.0)
    w0 = _sobolev_weights(K, 0.0)
    return float(np.sqrt(np.sum(w1 * np.abs(y) ** 2) + np.sum(w0 * np.abs(v) ** 2)))


def _check_state(y, v, step, time, norm0, grid):
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(v))):
        raise BlowUpError(
            f"non-finite values after step {step} (t = {time:g})", step=step, time=time)
    norm = _energy_norm(y, v, grid.K)
    if norm > BLOWUP_FACTOR * norm0:
        raise BlowUpError(
            f"energy norm {norm:.3e} exceeds {BLOWUP_FACTOR:.0e} x initial after step "
            f"{step} (t = {time:g})", step=step, time=time, norm=norm)
    return norm


def trig_step(system: OscillatorySystem, fs: FilterSet, h: float, state: State) -> State:
    """One explicit step of the trigonometric integrator.

    The position row is evaluated first; the velocity row then uses the
    nonlinearity at the new position.  Negative h is admitted (filters
    are evaluated at |h| omega), which makes time-symmetry checks
    direct.

    Raises:
        BlowUpError: if the step produces non-finite values.
    """
    coeffs = _step_coeffs(system, fs, h)
    y, v, _ = _step_once(system, coeffs, state.position.values, state.velocity.values)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(v))):
        raise BlowUpError(f"non-finite values after a step of size {h:g}")
    grid = state.grid
    return State(CoeffVector(grid, y), CoeffVector(grid, v))


def integrate(system: OscillatorySystem, fs: FilterSet, h: float, n_steps: int,
              state: State, observer: Optional[Callable[[int, float, State], None]] = None,
              t0: float = 0.0) -> State:
    """Advance ``n_steps`` steps of size h from ``state``.

    The nonlinearity value at the current position is carried over from
    the previous step's velocity row, so each step costs one new
    nonlinearity evaluation.  ``observer``, when given, is called after
    every step as ``observer(n, t0 + n*h, state_n)``.

    Raises:
        BlowUpError: on non-finite values or an energy norm exceeding
            ``BLOWUP_FACTOR`` times its initial value.
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if n_steps == 0:
        return state
    coeffs = _step_coeffs(system, fs, h)
    grid = state.grid
    y = state.position.values
    v = state.velocity.values
    norm0 = max(_energy_norm(y, v, grid.K), np.finfo(float).tiny)
    fy = None
    for n in range(1, n_steps + 1):
        y, v, fy = _step_once(system, coeffs, y, v, fy)
        _check_state(y, v, n, t0 + n * h, norm0, grid)
        if observer is not None:
            observer(n, t0 + n * h, State(CoeffVector(grid, y), CoeffVector(grid, v)))
    return State(CoeffVector(grid, y), CoeffVector(grid, v))


# ---------------------------------------------------------------------------
# Stoermer-Verlet / leapfrog
# ---------------------------------------------------------------------------

def _sv_f(system: OscillatorySystem, y: NDArray[np.complex128]) -> NDArray[np.complex128]:
    if system.inner_filter is not None:
        y = system.inner_filter * y
    return evaluate_values(system.nonlinearity, y)


def sv_two_step_run(system: OscillatorySystem, h: float, n_steps: int,
                    state: State) -> list[State]:
    """Run the two-step leapfrog recurrence; returns states at n = 0, ..., n_steps.

    Positions follow y^{n+1} = 2 y^n - y^{n-1} - h^2 Omega^2 y^n + h^2 f(y^n)
    with the starting value
    y^1 = y^0 + h ydot^0 - h^2/2 Omega^2 y^0 + h^2/2 f(y^0).
    Velocities are the central differences (y^{n+1} - y^{n-1}) / (2h);
    the final one uses one extra position step.  No step-size
    restriction is imposed; the instability for h*omega > 2 is
    observable until the blow-up guard trips.

    Raises:
        BlowUpError: on non-finite positions or a position norm
            exceeding ``BLOWUP_FACTOR`` times its initial value.
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if n_steps == 0:
        return [state]
    grid = state.grid
    omega2 = system.frequencies.omegas ** 2
    y0 = state.position.values
    v0 = state.velocity.values
    norm0 = max(sobolev_norm(state.position, 1.0), np.finfo(float).tiny)

    positions = [y0]
    y1 = y0 + h * v0 - 0.5 * h * h * omega2 * y0 + 0.5 * h * h * _sv_f(system, y0)
    positions.append(y1)
    # Two-step recurrence up to y^{n_steps + 1}; the extra position
    # provides the central-difference velocity at the final time.
    for n in range(1, n_steps + 1):
        yn = positions[n]
        if not np.all(np.isfinite(yn)):
            raise BlowUpError(f"non-finite positions after step {n}", step=n, time=n * h)
        norm = sobolev_norm(CoeffVector(grid, yn), 1.0)
        if norm > BLOWUP_FACTOR * norm0:
            raise BlowUpError(
                f"position norm {norm:.3e} exceeds {BLOWUP_FACTOR:.0e} x initial after "
                f"step {n}", step=n, time=n * h, norm=norm)
        y_next = 2.0 * yn - positions[n - 1] - h * h * omega2 * yn + h * h * _sv_f(system, yn)
        positions.append(y_next)

    states = [state]
    for n in range(1, n_steps + 1):
        vn = (positions[n + 1] - positions[n - 1]) / (2.0 * h)
        states.append(State(CoeffVector(grid, positions[n]), CoeffVector(grid, vn)))
    return states


def sv_modified_frequencies(freqs: FrequencySet, h: float) -> FrequencySet:
    """Frequencies omega~ with cos(h omega~) = 1 - h^2 omega^2 / 2.

    Evaluated in the numerically stable form
    omega~ = (2/h) arcsin(h omega / 2), which maps [0, 2/h) onto
    [0, pi/h).  Requires h omega_j < 2 strictly for every mode.

    Raises:
        CFLViolationError: naming the worst offending mode index.
    """
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    omegas = freqs.omegas
    worst = int(np.argmax(omegas))
    if h * omegas[worst] >= 2.0:
        j = int(freqs.grid.indices_fft[worst])
        raise CFLViolationError(
            f"h*omega = {h * omegas[worst]:g} >= 2 at mode j = {j} "
            f"(omega = {omegas[worst]:g}, h = {h:g})",
            mode=j, h=h, omega=float(omegas[worst]))
    modified = (2.0 / h) * np.arcsin(h * omegas / 2.0)
    # arcsin(x) >= x, so the lower growth constant carries over; the
    # upper one worsens by at most 1/sqrt(1 - pi^2/12).
    upper_factor = 1.0 / math.sqrt(1.0 - math.pi ** 2 / 12.0)
    return FrequencySet(freqs.grid, modified, f"sv_modified(h={h:g})",
                        growth_lower=freqs.growth_lower,
                        growth_upper=freqs.growth_upper * upper_factor)


def _inv_sinc(xi):
    return 1.0 / sinc(xi)


def _cos_inv_sinc(xi):
    return np.cos(np.asarray(xi, dtype=float)) / sinc(xi)


def sv_as_trig(system: OscillatorySystem, h: float):
    """Reformulate leapfrog as a trigonometric integrator with modified frequencies.

    Returns ``(modified_system, filter_set, velocity_transform)`` such
    that running :func:`integrate` on the modified system with the
    returned filters, starting from (y^0, velocity_transform * ydot^0),
    reproduces the positions of :func:`sv_two_step_run` exactly, and
    its velocities divided by ``velocity_transform`` reproduce the
    central-difference velocities.  The transform is the per-mode array
    1 / sinc(h omega~_j).

    Raises:
        CFLViolationError: if h*omega_j >= 2 for some mode (the
            transform needs sinc(h omega~_j) > 0).
    """
    modified = sv_modified_frequencies(system.frequencies, h)
    fs = FilterSet(name="sv", psi=_one_like, phi=_one_like,
                   psi0=_cos_inv_sinc, psi1=_inv_sinc)
    transform = 1.0 / sinc(h * modified.omegas)
    return replace(system, frequencies=modified), fs, transform


def _one_like(xi):
    return np.ones_like(np.asarray(xi, dtype=float))


# ---------------------------------------------------------------------------
# Reference solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReferenceSolution:
    """A verified fine-step solution used as ground truth for error measurement."""

    state: State
    h_ref: float
    discrepancy: float
    norm_order: float  # sigma of the energy norm used for self-verification


def reference_solution(system: OscillatorySystem, T: float, h_ref: float,
                       state: State, s: float = 0.0, tol: float = 1e-5) -> ReferenceSolution:
    """Integrate to time T with the strongest-filtered catalog method and verify.

    The run uses method G at step h_ref and is recomputed at h_ref/2;
    the two results must agree in the energy norm of order s-1 within
    ``tol``, otherwise the call fails loudly.  The finer of the two
    runs is returned.

    Raises:
        ReferenceUnconvergedError: carrying both results when the
            self-verification discrepancy exceeds ``tol``.
    """
    n = T / h_ref
    if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
        raise ValueError(f"T/h_ref = {n!r} is not an integer")
    n = int(round(n))
    fs = method_filters("G")
    coarse = integrate(system, fs, h_ref, n, state)
    fine = integrate(system, fs, h_ref / 2.0, 2 * n, state)
    diff = State(coarse.position - fine.position, coarse.velocity - fine.velocity)
    discrepancy = pair_norm(diff, s - 1.0)
    if discrepancy > tol:
        raise ReferenceUnconvergedError(
            f"reference self-verification failed: discrepancy {discrepancy:.3e} "
            f"> tol {tol:.3e} (h_ref = {h_ref:g}, K = {system.grid.K})",
            coarse=coarse, fine=fine, discrepancy=discrepancy, tol=tol)
    return ReferenceSolution(state=fine, h_ref=h_ref, discrepancy=discrepancy,
                             norm_order=s - 1.0)
