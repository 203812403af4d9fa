"""Filter functions defining trigonometric integrators.

A trigonometric one-step method is determined by four scalar filter
functions (psi, phi, psi0, psi1) of xi = h*omega, all normalised to 1
at xi = 0.  The catalog (:func:`method_filters`) provides the methods

    B       psi = sinc,        phi = 1
    C       psi = sinc^2,      phi = sinc
    E       psi = sinc^2,      phi = 1
    G       psi = sinc^3,      phi = sinc
    Btilde  psi = chi * sinc,  phi = chi

where chi is the characteristic function of [-pi, pi] (closed, so
chi(pi) = 1).  Btilde truncates the filters of B beyond the first sinc
zero, which makes the nonlinearity act on reduced arguments only.

For each method, psi0 and psi1 are completed in closed form from the
time-symmetry conditions psi = sinc * psi1 and psi0 = cos * psi1.  The
closed forms avoid dividing psi by sinc, which would be singular at
xi = k*pi.

:func:`check_assumption` verifies, by sampling, the filter bounds that
the convergence theory requires for a decay exponent beta in [-1, 1]:

    |phi(xi)| <= c
    |psi(xi)| <= c xi^beta          for beta <= 0
    |1 - psi(xi)| <= c xi^beta      for beta > 0
    |1 - chi(xi)| <= c xi^(1+beta)  for chi in {phi, psi0, psi1}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

METHOD_NAMES = ("B", "C", "E", "G", "Btilde")

#: Tolerance for the normalisation check filter(0) == 1 at construction.
_NORMALISATION_TOL = 1e-14


def sinc(xi):
    """sin(xi)/xi with sinc(0) = 1.

    For |xi| < 1e-4 the truncated series 1 - xi^2/6 + xi^4/120 is used;
    its relative error there is below 1e-16, so the function is smooth
    across the removable singularity.
    """
    x = np.asarray(xi, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0 + x ** 4 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


# Catalog building blocks; module-level named functions keep FilterSet
# instances picklable.

def _one(xi):
    return np.ones_like(np.asarray(xi, dtype=float))


def _cos(xi):
    return np.cos(np.asarray(xi, dtype=float))


def _sinc2(xi):
    s = sinc(xi)
    return s * s


def _sinc3(xi):
    s = sinc(xi)
    return s * s * s


def _cos_sinc(xi):
    return np.cos(np.asarray(xi, dtype=float)) * sinc(xi)


def _cos_sinc2(xi):
    return np.cos(np.asarray(xi, dtype=float)) * _sinc2(xi)


def _chi(xi):
    """Characteristic function of the closed interval [-pi, pi]."""
    return np.where(np.abs(np.asarray(xi, dtype=float)) <= np.pi, 1.0, 0.0)


def _chi_sinc(xi):
    return _chi(xi) * sinc(xi)


def _cos_chi(xi):
    return np.cos(np.asarray(xi, dtype=float)) * _chi(xi)


@dataclass(frozen=True)
class FilterSet:
    """The four filter functions of a trigonometric integrator.

    The callables must accept numpy arrays of xi >= 0.  Construction
    verifies the normalisation psi(0) = phi(0) = psi0(0) = psi1(0) = 1.
    """

    name: str
    psi: Callable = field(repr=False)
    phi: Callable = field(repr=False)
    psi0: Callable = field(repr=False)
    psi1: Callable = field(repr=False)

    def __post_init__(self):
        zero = np.asarray(0.0)
        for label, fn in (("psi", self.psi), ("phi", self.phi),
                          ("psi0", self.psi0), ("psi1", self.psi1)):
            value = float(np.asarray(fn(zero)))
            if not np.isfinite(value) or abs(value - 1.0) > _NORMALISATION_TOL:
                raise ValueError(
                    f"filter {label} of {self.name!r} is not normalised: {label}(0) = {value}"
                )


_CATALOG = {
    "B": ("B", sinc, _one, _cos, _one),
    "C": ("C", _sinc2, sinc, _cos_sinc, sinc),
    "E": ("E", _sinc2, _one, _cos_sinc, sinc),
    "G": ("G", _sinc3, sinc, _cos_sinc2, _sinc2),
    "Btilde": ("Btilde", _chi_sinc, _chi, _cos_chi, _chi),
}


def method_filters(name: str) -> FilterSet:
    """Look up a catalog method by name ("B", "C", "E", "G", "Btilde")."""
    key = {n.lower(): n for n in METHOD_NAMES}.get(str(name).lower())
    if key is None:
        raise ValueError(f"unknown method {name!r}; valid names: {', '.join(METHOD_NAMES)}")
    label, psi, phi, psi0, psi1 = _CATALOG[key]
    return FilterSet(name=label, psi=psi, phi=phi, psi0=psi0, psi1=psi1)


def check_symmetry_symplecticity(fs: FilterSet, xi_samples) -> tuple[bool, bool]:
    """Test time symmetry and symplecticity on a sample set.

    Symmetric iff psi = sinc*psi1 and psi0 = cos*psi1; symplectic iff
    psi = sinc*phi.  Each identity is accepted when the residual stays
    below 1e-12 at every sample.
    """
    xi = np.asarray(xi_samples, dtype=float)
    if xi.size == 0:
        raise ValueError("xi_samples must be nonempty")
    s = sinc(xi)
    symmetric = (np.max(np.abs(fs.psi(xi) - s * fs.psi1(xi))) <= 1e-12
                 and np.max(np.abs(fs.psi0(xi) - np.cos(xi) * fs.psi1(xi))) <= 1e-12)
    symplectic = np.max(np.abs(fs.psi(xi) - s * fs.phi(xi))) <= 1e-12
    return bool(symmetric), bool(symplectic)


@dataclass(frozen=True)
class AssumptionViolation:
    xi: float
    inequality: str
    lhs: float
    rhs: float


@dataclass(frozen=True)
class AssumptionReport:
    """Sampled verification of the filter bounds for one (beta, c) pair."""

    name: str
    beta: float
    c: float
    xi_samples: NDArray[np.float64]
    violations: tuple[AssumptionViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "method": self.name,
            "beta": self.beta,
            "c": self.c,
            "samples": int(len(self.xi_samples)),
            "ok": self.ok,
            "violations": [
                {"xi": v.xi, "inequality": v.inequality, "lhs": v.lhs, "rhs": v.rhs}
                for v in self.violations
            ],
        }


def default_xi_samples(lo: float = 1e-3, hi: float = 1e3, n: int = 2000) -> NDArray[np.float64]:
    """Logarithmic sample grid used by the assumption checker."""
    return np.logspace(np.log10(lo), np.log10(hi), n)


def check_assumption(fs: FilterSet, beta: float, c: float, xi_samples) -> AssumptionReport:
    """Check the filter bounds at every sample; violations are collected, not raised.

    This is a sampled check, not a proof.  The comparisons are exact
    (no tolerance slack); the catalog methods pass them with c = 2 by a
    clear margin.
    """
    if not -1.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [-1, 1], got {beta}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    xi = np.asarray(xi_samples, dtype=float)
    if xi.size == 0 or np.any(xi <= 0):
        raise ValueError("xi_samples must be positive (the bounds apply for omega_j != 0)")

    violations: list[AssumptionViolation] = []

    def record(mask, inequality, lhs, rhs):
        for i in np.flatnonzero(mask):
            violations.append(AssumptionViolation(
                xi=float(xi[i]), inequality=inequality, lhs=float(lhs[i]), rhs=float(rhs[i])))

    lhs = np.abs(fs.phi(xi))
    rhs = np.full_like(xi, c)
    record(lhs > rhs, "abs(phi) <= c", lhs, rhs)

    if beta <= 0:
        lhs = np.abs(fs.psi(xi))
        rhs = c * xi ** beta
        record(lhs > rhs, "abs(psi) <= c*xi^beta", lhs, rhs)
    else:
        lhs = np.abs(1.0 - fs.psi(xi))
        rhs = c * xi ** beta
        record(lhs > rhs, "abs(1-psi) <= c*xi^beta", lhs, rhs)

    rhs = c * xi ** (1.0 + beta)
    for label, fn in (("phi", fs.phi), ("psi0", fs.psi0), ("psi1", fs.psi1)):
        lhs = np.abs(1.0 - fn(xi))
        record(lhs > rhs, f"abs(1-{label}) <= c*xi^(1+beta)", lhs, rhs)

    return AssumptionReport(name=fs.name, beta=float(beta), c=float(c),
                            xi_samples=xi, violations=tuple(violations))
