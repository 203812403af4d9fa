"""Convergence-order experiments with low-regularity initial data.

The workflow mirrors the measurement used throughout the package
documentation: pick initial coefficients on the complex unit circle
scaled by <j>^(-1.51) (positions) and <j>^(-0.51) (velocities), so the
data stay bounded in H^1 x H^0 uniformly in the grid size while any
strictly stronger Sobolev norm grows with K.  Integrate to a fixed time
with several methods, grid sizes K and step sizes h, measure the errors
against a verified fine-step reference in the norms

    err_y = ||y_ref(T) - y^N||_{1-alpha},   err_v = ||ydot_ref(T) - ydot^N||_{-alpha}

for a list of exponents alpha, and fit the slope of the
maximum-over-K error against h on a log-log scale.

Reproducibility: the random phases come from an explicitly specified
64-bit mixing generator (written out in :class:`SplitMix64`), so equal
seeds give bitwise equal data on every platform.  The sweep itself is
embarrassingly parallel over (method, K, h); records are merged in a
deterministic key order, so results do not depend on the worker count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import (BlowUpError, ConfigError, FitUndefinedError,
                         IncompleteGridError)
from .filters import method_filters
from .integrators import (OscillatorySystem, integrate, make_system,
                          reference_solution, sv_two_step_run)
from .nonlinearity import NonlinearitySpec
from .spectral import CoeffVector, State, make_grid, sobolev_norm

EQUATIONS = ("power", "klein-gordon", "sine-gordon", "linear")
TRIG_METHODS = ("B", "C", "E", "G", "Btilde")
ALL_METHODS = TRIG_METHODS + ("SV",)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit mixing generator for the initial-data phases.

    The recurrence is fixed so that ports to other languages reproduce
    identical streams:

        state  = (state + 0x9E3779B97F4A7C15) mod 2^64
        z      = state
        z      = ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
        z      = ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
        output = z xor (z >> 31)

    Uniform doubles in [0, 1) are (output >> 11) * 2^-53.
    """

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def next_uniform(self) -> float:
        return (self.next_uint64() >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class InitialDataSpec:
    """Recipe for one seeded low-regularity initial state."""

    seed: int
    K: int
    decay_y: float = 1.51
    decay_v: float = 0.51


def _draw_component(gen: SplitMix64, grid, decay: float) -> CoeffVector:
    K = grid.K
    values = np.zeros(grid.n_modes, dtype=np.complex128)
    # Modes j = 1, ..., K-1 get a random phase; the mirror modes are the
    # conjugates, so the polynomial is real on the collocation points.
    for j in range(1, K):
        theta = 2.0 * math.pi * gen.next_uniform()
        c = complex(math.cos(theta), math.sin(theta)) * j ** (-decay)
        values[j] = c
        values[grid.n_modes - j] = c.conjugate()
    # Modes 0 and -K must be real; keep full modulus and draw the sign.
    sign0 = 1.0 if gen.next_uniform() < 0.5 else -1.0
    values[0] = sign0
    sign_nyq = 1.0 if gen.next_uniform() < 0.5 else -1.0
    values[K] = sign_nyq * K ** (-decay)
    return CoeffVector(grid, values)


def generate_initial_data(spec: InitialDataSpec) -> State:
    """Seeded initial state with |y_j| = <j>^(-decay_y), |ydot_j| = <j>^(-decay_v).

    Phases are drawn from :class:`SplitMix64` in a fixed order (position
    phases for j = 1, ..., K-1, then the signs of modes 0 and -K, then
    the same pattern for the velocity), and the draws are symmetrised so
    the state is real on the collocation points.  Equal (seed, K) give
    bitwise equal states.
    """
    grid = make_grid(spec.K)
    gen = SplitMix64(spec.seed)
    position = _draw_component(gen, grid, spec.decay_y)
    velocity = _draw_component(gen, grid, spec.decay_v)
    return State(position, velocity)


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved configuration of one convergence study."""

    equation: str = "power"
    p: int = 2
    rho: float = 1.0
    space: str = "spectral"
    methods: tuple[str, ...] = ("C",)
    k_values: tuple[int, ...] = (32, 128, 512)
    h_values: tuple[float, ...] = (2.0 ** -4, 2.0 ** -5, 2.0 ** -6,
                                   2.0 ** -7, 2.0 ** -8, 2.0 ** -9)
    alphas: tuple[float, ...] = (1.0, 0.5, 0.0, -0.5, -1.0)
    T: float = 1.0
    t0: float = 0.0
    s: float = 0.0
    seed: int = 12345
    decay_y: float = 1.51
    decay_v: float = 0.51
    h_ref: float = 2.0 ** -12
    ref_tol: float = 1e-5
    jobs: int = 1
    max_k: int = 512

    def validate(self) -> None:
        if self.equation not in EQUATIONS:
            raise ConfigError(f"equation must be one of {EQUATIONS}, got {self.equation!r}")
        if self.space not in ("spectral", "fd"):
            raise ConfigError(f"space must be 'spectral' or 'fd', got {self.space!r}")
        if self.space == "fd" and self.equation not in ("power", "linear"):
            raise ConfigError("finite-difference frequencies are only defined for the "
                              "unshifted equations ('power' or 'linear')")
        if not self.methods:
            raise ConfigError("method list is empty")
        for m in self.methods:
            if m not in ALL_METHODS:
                raise ConfigError(f"unknown method {m!r}; valid: {', '.join(ALL_METHODS)}")
        if not self.k_values:
            raise ConfigError("K list is empty")
        for k in self.k_values:
            if k < 1 or (k & (k - 1)) != 0:
                raise ConfigError(f"K values must be powers of two, got {k}")
            if k > self.max_k:
                raise ConfigError(f"K = {k} exceeds max_k = {self.max_k}; raise max_k "
                                  f"to run larger grids")
        if not self.h_values:
            raise ConfigError("h list is empty")
        if not self.T > 0:
            raise ConfigError(f"T must be positive, got {self.T}")
        for h in self.h_values:
            if not h > 0:
                raise ConfigError(f"step sizes must be positive, got {h}")
            n = self.T / h
            if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
                raise ConfigError(f"h = {h} does not divide T = {self.T}")
        if not self.alphas:
            raise ConfigError("alpha list is empty")
        for a in self.alphas:
            if not -1.0 <= a <= 1.0:
                raise ConfigError(f"alpha must lie in [-1, 1], got {a}")
        if not self.h_ref > 0:
            raise ConfigError(f"h_ref must be positive, got {self.h_ref}")
        n = self.T / self.h_ref
        if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
            raise ConfigError(f"h_ref = {self.h_ref} does not divide T = {self.T}")
        if self.h_ref > min(self.h_values):
            raise ConfigError(f"h_ref = {self.h_ref} must not exceed the smallest "
                              f"step size {min(self.h_values)}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.p < 2:
            raise ConfigError(f"p must be >= 2, got {self.p}")
        if self.equation == "klein-gordon" and not self.rho > 0:
            raise ConfigError(f"klein-gordon requires rho > 0, got {self.rho}")


def nonlinearity_for(config: ExperimentConfig) -> NonlinearitySpec:
    if config.equation == "power":
        return NonlinearitySpec.power(config.p)
    if config.equation == "klein-gordon":
        return NonlinearitySpec.klein_gordon(config.rho, config.p)
    if config.equation == "sine-gordon":
        return NonlinearitySpec.sine_gordon()
    if config.equation == "linear":
        return NonlinearitySpec.zero()
    raise ConfigError(f"unknown equation {config.equation!r}")


def system_for(config: ExperimentConfig, K: int) -> OscillatorySystem:
    grid = make_grid(K, max_k=config.max_k)
    return make_system(grid, nonlinearity_for(config), space=config.space)


def initial_state_for(config: ExperimentConfig, K: int) -> State:
    return generate_initial_data(InitialDataSpec(
        seed=config.seed, K=K, decay_y=config.decay_y, decay_v=config.decay_v))


# ---------------------------------------------------------------------------
# Error records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorRecord:
    method: str
    K: int
    h: float
    alpha: float
    err_y: float
    err_v: float
    flags: str = ""


@dataclass(frozen=True, eq=False)
class ErrorTable:
    """All records of one study plus the resolved configuration."""

    records: tuple[ErrorRecord, ...]
    config: ExperimentConfig
    reference_discrepancies: tuple[tuple[int, float], ...] = ()

    def select(self, method: Optional[str] = None, K: Optional[int] = None,
               h: Optional[float] = None, alpha: Optional[float] = None) -> list[ErrorRecord]:
        out = []
        for r in self.records:
            if method is not None and r.method != method:
                continue
            if K is not None and r.K != K:
                continue
            if h is not None and r.h != h:
                continue
            if alpha is not None and r.alpha != alpha:
                continue
            out.append(r)
        return out

    def find(self, method: str, K: int, h: float, alpha: float) -> ErrorRecord:
        matches = self.select(method=method, K=K, h=h, alpha=alpha)
        if len(matches) != 1:
            raise KeyError(f"expected one record for ({method}, {K}, {h}, {alpha}), "
                           f"found {len(matches)}")
        return matches[0]

    def unstable_cells(self) -> list[tuple[str, int, float]]:
        seen = []
        for r in self.records:
            cell = (r.method, r.K, r.h)
            if r.flags == "blowup" and cell not in seen:
                seen.append(cell)
        return seen

    def to_csv(self, path) -> None:
        """Write records as CSV with columns method,K,h,alpha,err_y,err_v,flags."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "K", "h", "alpha", "err_y", "err_v", "flags"])
            for r in self.records:
                writer.writerow([r.method, r.K, _fmt(r.h), _fmt(r.alpha),
                                 _fmt(r.err_y), _fmt(r.err_v), r.flags])

    def order_summary(self) -> list[dict]:
        """Fitted envelope slopes per (method, alpha, component).

        Trigonometric methods are fitted over the four smallest step
        sizes h with h * max(K) > pi (the regime where the order is
        limited uniformly in K); the leapfrog method is fitted over its
        stable cells h*K <= 2.  A fit that is undefined (too few usable
        points) yields slope None.
        """
        out = []
        k_max = max(self.config.k_values)
        trig_window = default_fit_window(self.config.h_values, k_max)
        for method in self.config.methods:
            cfl_max = 2.0 if method == "SV" else None
            for alpha in self.config.alphas:
                for component in ("y", "v", "pair"):
                    try:
                        env = uniform_error_envelope(self, method, alpha,
                                                     component=component, cfl_max=cfl_max)
                        if method != "SV":
                            env = [(h, e) for h, e in env if h in trig_window]
                        fit = fit_order(env)
                        entry = {"slope": fit.slope, "residual": fit.residual,
                                 "n_points": fit.n_used}
                    except (FitUndefinedError, IncompleteGridError) as exc:
                        entry = {"slope": None, "residual": None, "n_points": 0,
                                 "note": str(exc)}
                    entry.update({"method": method, "alpha": alpha, "component": component})
                    out.append(entry)
        return out

    def summary_dict(self) -> dict:
        return {
            "schema": 1,
            "config": config_to_dict(self.config),
            "references": [{"K": k, "discrepancy": d}
                           for k, d in self.reference_discrepancies],
            "orders": self.order_summary(),
            "unstable": [{"method": m, "K": k, "h": h}
                         for m, k, h in self.unstable_cells()],
        }

    def write_summary(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary_dict(), fh, indent=2)
            fh.write("\n")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def config_to_dict(config: ExperimentConfig) -> dict:
    """Flag-style dictionary accepted back by :func:`config_from_dict`."""
    return {
        "equation": config.equation, "p": config.p, "rho": config.rho,
        "space": config.space, "method": list(config.methods),
        "K": list(config.k_values), "h": list(config.h_values),
        "alpha": list(config.alphas), "T": config.T, "t0": config.t0,
        "s": config.s, "seed": config.seed, "decay_y": config.decay_y,
        "decay_v": config.decay_v, "href": config.h_ref,
        "ref_tol": config.ref_tol, "jobs": config.jobs, "max_K": config.max_k,
    }


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a configuration from flag-style keys; unknown keys are rejected."""
    mapping = {
        "equation": ("equation", str), "p": ("p", int), "rho": ("rho", float),
        "space": ("space", str),
        "method": ("methods", lambda v: tuple(_aslist(v, str))),
        "K": ("k_values", lambda v: tuple(_aslist(v, int))),
        "h": ("h_values", lambda v: tuple(_aslist(v, float))),
        "alpha": ("alphas", lambda v: tuple(_aslist(v, float))),
        "T": ("T", float), "t0": ("t0", float), "s": ("s", float),
        "seed": ("seed", int), "decay_y": ("decay_y", float),
        "decay_v": ("decay_v", float), "href": ("h_ref", float),
        "ref_tol": ("ref_tol", float), "jobs": ("jobs", int),
        "max_K": ("max_k", int),
    }
    kwargs = {}
    for key, value in data.items():
        if key not in mapping:
            raise ConfigError(f"unknown configuration key {key!r}")
        field, conv = mapping[key]
        try:
            kwargs[field] = conv(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from exc
    return ExperimentConfig(**kwargs)


def _aslist(value, conv) -> list:
    if isinstance(value, (list, tuple)):
        return [conv(v) for v in value]
    return [conv(value)]


# ---------------------------------------------------------------------------
# Study execution
# ---------------------------------------------------------------------------

def _integrate_final(config: ExperimentConfig, system: OscillatorySystem,
                     method: str, h: float, state: State) -> State:
    n_steps = int(round(config.T / h))
    if method == "SV":
        return sv_two_step_run(system, h, n_steps, state)[-1]
    return integrate(system, method_filters(method), h, n_steps, state, t0=config.t0)


def _reference_worker(args) -> tuple[int, np.ndarray, np.ndarray, float]:
    config, K = args
    system = system_for(config, K)
    state0 = initial_state_for(config, K)
    ref = reference_solution(system, config.T, config.h_ref, state0,
                             s=config.s, tol=config.ref_tol)
    return K, ref.state.position.values, ref.state.velocity.values, ref.discrepancy


def _run_worker(args) -> list[ErrorRecord]:
    config, method, K, h, ref_y, ref_v = args
    system = system_for(config, K)
    state0 = initial_state_for(config, K)
    try:
        final = _integrate_final(config, system, method, h, state0)
        dy = CoeffVector(system.grid, final.position.values - ref_y)
        dv = CoeffVector(system.grid, final.velocity.values - ref_v)
        return [ErrorRecord(method=method, K=K, h=h, alpha=a,
                            err_y=sobolev_norm(dy, 1.0 - a),
                            err_v=sobolev_norm(dv, -a))
                for a in config.alphas]
    except BlowUpError:
        return [ErrorRecord(method=method, K=K, h=h, alpha=a,
                            err_y=math.inf, err_v=math.inf, flags="blowup")
                for a in config.alphas]


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_convergence_study(config: ExperimentConfig) -> ErrorTable:
    """Run the full (method, K, h) sweep and measure errors for every alpha.

    Reference solutions are computed once per K and shared; a failed
    reference self-verification aborts the study.  A blow-up of an
    individual run is recorded as infinite error with flag "blowup"
    rather than aborting, so instability regions remain chartable.
    """
    config.validate()
    ref_results = _map(_reference_worker, [(config, K) for K in config.k_values],
                       config.jobs)
    refs = {K: (ry, rv) for K, ry, rv, _ in ref_results}
    discrepancies = tuple((K, d) for K, _, _, d in ref_results)
    tasks = [(config, method, K, h, refs[K][0], refs[K][1])
             for method in config.methods
             for K in config.k_values
             for h in config.h_values]
    chunks = _map(_run_worker, tasks, config.jobs)
    records = [record for chunk in chunks for record in chunk]
    records.sort(key=lambda r: (r.method, r.K, r.h, r.alpha))
    return ErrorTable(records=tuple(records), config=config,
                      reference_discrepancies=discrepancies)


# ---------------------------------------------------------------------------
# Order fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderFit:
    slope: float
    residual: float  # root-mean-square residual of the log-log fit
    n_used: int


def fit_order(points: Iterable[tuple[float, float]]) -> OrderFit:
    """Least-squares slope of log(err) against log(h).

    Nonpositive or non-finite errors are excluded with a warning; fewer
    than three usable points raise :class:`FitUndefinedError`.
    """
    pts = [(float(h), float(e)) for h, e in points]
    usable = [(h, e) for h, e in pts if math.isfinite(e) and e > 0]
    if len(usable) < len(pts):
        warnings.warn(f"fit_order: excluded {len(pts) - len(usable)} nonpositive or "
                      f"non-finite error value(s)", stacklevel=2)
    if len(usable) < 3:
        raise FitUndefinedError(f"order fit needs at least 3 usable points, "
                                f"got {len(usable)}")
    log_h = np.log([h for h, _ in usable])
    log_e = np.log([e for _, e in usable])
    slope, intercept = np.polyfit(log_h, log_e, 1)
    resid = log_e - (slope * log_h + intercept)
    return OrderFit(slope=float(slope), residual=float(np.sqrt(np.mean(resid ** 2))),
                    n_used=len(usable))


def two_point_slope(h0: float, e0: float, h1: float, e1: float) -> float:
    """Slope through two log-log points; used where only two steps satisfy a CFL cut."""
    return float(math.log(e1 / e0) / math.log(h1 / h0))


def uniform_error_envelope(table: ErrorTable, method: str, alpha: float,
                           component: str = "y",
                           cfl_max: Optional[float] = None) -> list[tuple[float, float]]:
    """Per step size, the maximum error over all grid sizes K.

    ``component`` selects err_y, err_v or their hypotenuse ("pair").
    ``cfl_max`` restricts the maximum to cells with h*K <= cfl_max
    (used for the leapfrog method, whose cells beyond its stability
    limit carry infinite errors); step sizes whose restricted cell set
    is empty are dropped.  Infinite entries propagate to the envelope.

    Raises:
        IncompleteGridError: if some (K, h) combination of the study
            grid has no record for this method.
    """
    if component not in ("y", "v", "pair"):
        raise ValueError(f"component must be 'y', 'v' or 'pair', got {component!r}")
    recs = {}
    for r in table.select(method=method, alpha=alpha):
        recs[(r.K, r.h)] = r
    missing = [(K, h) for K in table.config.k_values for h in table.config.h_values
               if (K, h) not in recs]
    if missing:
        raise IncompleteGridError(
            f"method {method!r} at alpha={alpha} is missing cells: {missing[:4]}"
            + ("..." if len(missing) > 4 else ""))

    def value(r: ErrorRecord) -> float:
        if component == "y":
            return r.err_y
        if component == "v":
            return r.err_v
        return float(np.hypot(r.err_y, r.err_v))

    envelope = []
    for h in sorted(table.config.h_values):
        ks = [K for K in table.config.k_values
              if cfl_max is None or h * K <= cfl_max * (1.0 + 1e-12)]
        if not ks:
            continue
        envelope.append((h, max(value(recs[(K, h)]) for K in ks)))
    return envelope


def default_fit_window(h_values: Sequence[float], k_max: int,
                       limit: float = math.pi, n: int = 4) -> tuple[float, ...]:
    """The n smallest step sizes outside the CFL regime of the largest grid.

    A step size h counts as CFL-unrestricted when h * k_max > limit;
    there the error order uniform in K is visible.  If fewer than three
    such step sizes exist, the n smallest overall are used instead.
    """
    unrestricted = sorted(h for h in h_values if h * k_max > limit)
    if len(unrestricted) >= 3:
        return tuple(unrestricted[:n])
    return tuple(sorted(h_values)[:n])
