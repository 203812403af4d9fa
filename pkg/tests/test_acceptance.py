"""Acceptance suite: one test per acceptance criterion, with a printed
PASS/FAIL line for each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they are produced.  The shared convergence study uses the documented
seeded data recipe (seed 43, chosen for mild solution growth on [0, 1],
which keeps the finite-energy constant of the quadratic equation small)
and the desk-scale grids K in {2^5, 2^7, 2^9}, h in {2^-4, ..., 2^-9}.

Known desk-scale limitations (analysed in detail, verified against an
independent high-order ODE solver): the maximum-over-K error envelopes
in the strongest norms have not saturated yet at K <= 2^9, so the
fitted envelope slopes at alpha = -1 (all methods) and alpha = -1/2
(method Btilde) exceed the 1+alpha +- 0.25 window, and the initial-data
H^1 norm grows by ~36 percent (not < 5 percent) between K = 2^5 and
K = 2^11 because its defining series converges only like K^(-0.02).
The corresponding assertions are implemented as stated and fail
honestly rather than being loosened.
"""

import math

import numpy as np
import pytest

import trigwave as tw
from trigwave.harness import (ExperimentConfig, InitialDataSpec, default_fit_window,
                              fit_order, generate_initial_data, run_convergence_study,
                              two_point_slope, uniform_error_envelope)
from trigwave.integrators import OscillatorySystem
from trigwave.spectral import CoeffVector, State, pair_norm, to_spectral

SEED = 43
ALPHAS = (1.0, 0.5, 0.0, -0.5, -1.0)
SLOPE_TOL = 0.25


def report(cid, ok, detail):
    print(f"ACCEPTANCE {cid}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


@pytest.fixture(scope="module")
def study():
    config = ExperimentConfig(equation="power", p=2,
                              methods=("B", "C", "E", "G", "Btilde", "SV"),
                              k_values=(32, 128, 512),
                              h_values=(2.0 ** -4, 2.0 ** -5, 2.0 ** -6,
                                        2.0 ** -7, 2.0 ** -8, 2.0 ** -9),
                              alphas=ALPHAS, T=1.0, s=0.0, seed=SEED,
                              h_ref=2.0 ** -12, ref_tol=1e-5, jobs=1)
    return run_convergence_study(config)


def envelope_slopes(study, method):
    """Fitted slope of the maximum-over-K error per alpha and component."""
    window = default_fit_window(study.config.h_values, max(study.config.k_values))
    out = {}
    for alpha in ALPHAS:
        for component in ("y", "v"):
            env = [(h, e) for h, e in uniform_error_envelope(study, method, alpha,
                                                             component=component)
                   if h in window]
            out[(alpha, component)] = fit_order(env).slope
    return out


def check_order_suite(study, method):
    slopes = envelope_slopes(study, method)
    failures = []
    for alpha in ALPHAS:
        sy = slopes[(alpha, "y")]
        sv = slopes[(alpha, "v")]
        ok = abs(sy - (1 + alpha)) <= SLOPE_TOL and abs(sv - (1 + alpha)) <= SLOPE_TOL
        print(f"    method {method:>6} alpha {alpha:+.1f}: slope_y {sy:6.3f} "
              f"slope_v {sv:6.3f} target {1 + alpha:.1f}+-{SLOPE_TOL} "
              f"{'ok' if ok else 'OUT'}")
        if not ok:
            failures.append((alpha, sy, sv))
    return failures


def test_criterion_1_uniform_orders_method_c(study):
    failures = check_order_suite(study, "C")
    ok = report(1, not failures,
                f"method C uniform-in-K envelope slopes vs 1+alpha (+-{SLOPE_TOL})"
                + ("" if not failures else f"; out of window at {failures}"))
    assert ok, f"criterion 1: slopes outside window: {failures}"


def test_criterion_2_other_methods(study):
    all_failures = {}
    for method in ("E", "G", "Btilde"):
        failures = check_order_suite(study, method)
        if failures:
            all_failures[method] = failures
    ok = report(2, not all_failures,
                "methods E, G, Btilde same suite"
                + ("" if not all_failures else f"; out of window: {all_failures}"))
    assert ok, f"criterion 2: slopes outside window: {all_failures}"


def test_criterion_3_cfl_regime(study):
    # Per fixed K, fit only over h with h*K <= pi; order two is expected
    # throughout.  K = 512 leaves two such step sizes, fewer than the
    # three the order fit requires, so its two-point slope is reported
    # for information without an assertion.
    failures = []
    for K in study.config.k_values:
        hs = sorted(h for h in study.config.h_values if h * K <= math.pi)
        worst = math.inf
        for alpha in ALPHAS:
            for component in ("y", "v"):
                pts = [(h, getattr(study.find("C", K, h, alpha), "err_" + component))
                       for h in hs]
                if len(pts) >= 3:
                    slope = fit_order(pts).slope
                else:
                    slope = two_point_slope(*pts[0], *pts[1])
                worst = min(worst, slope)
        if len(hs) >= 3:
            print(f"    K={K}: worst CFL-regime slope {worst:.3f} over {len(hs)} "
                  f"step sizes (need >= 1.75)")
            if worst < 1.75:
                failures.append((K, worst))
        else:
            print(f"    K={K}: only {len(hs)} step sizes with h*K <= pi; "
                  f"two-point slope {worst:.3f} (informational, fit undefined)")
    ok = report(3, not failures,
                "per-K slopes >= 1.75 on the CFL branch (K with a defined fit)"
                + ("" if not failures else f"; below threshold: {failures}"))
    assert ok, f"criterion 3: {failures}"


def test_criterion_4_stoermer_verlet(study):
    env = uniform_error_envelope(study, "SV", 1.0, component="pair", cfl_max=2.0)
    slope = fit_order(env).slope
    unstable = study.unstable_cells()
    slope_ok = abs(slope - 2.0 / 3.0) <= 0.2
    unstable_ok = len(unstable) > 0 and all(h * K > 2.0 for _, K, h in unstable)
    ok = report(4, slope_ok and unstable_ok,
                f"leapfrog H^0 x H^-1 envelope slope {slope:.3f} (target 2/3 +- 0.2); "
                f"{len(unstable)} unstable cells flagged")
    assert ok


def test_criterion_5_filter_bounds():
    xi = tw.default_xi_samples(1e-3, 1e3, 2000)
    bad = []
    for name in tw.METHOD_NAMES:
        fs = tw.method_filters(name)
        for beta in (-1.0, -0.5, 0.0, 0.5, 1.0):
            rep = tw.check_assumption(fs, beta, 2.0, xi)
            if not rep.ok:
                bad.append((name, beta, len(rep.violations)))
    ok = report(5, not bad,
                "filter bounds with c=2 for all five methods and betas on 2000 "
                "log-spaced samples" + ("" if not bad else f"; violations: {bad}"))
    assert ok


def test_criterion_6_structural_properties():
    rng = np.random.default_rng(606)
    problems = []

    # Linear exactness at K = 512 and at an odd K.
    for K in (512, 7):
        g = tw.make_grid(K)
        st = State(to_spectral(rng.normal(size=2 * K), g),
                   to_spectral(rng.normal(size=2 * K), g))
        system = tw.make_system(g, tw.NonlinearitySpec.zero())
        scale = pair_norm(st, 0.0)
        exact = tw.exact_propagator_apply(system.frequencies, 0.31 * 100, st)
        for name in tw.METHOD_NAMES:
            out = tw.integrate(system, tw.method_filters(name), 0.31, 100, st)
            err = max(np.max(np.abs(out.position.values - exact.position.values)),
                      np.max(np.abs(out.velocity.values - exact.velocity.values)))
            if err > 1e-12 * scale:
                problems.append(f"linear exactness {name} K={K}: {err:.2e}")

    # Time-symmetry round trip on recipe data.
    st = generate_initial_data(InitialDataSpec(seed=SEED, K=32))
    system = tw.make_system(st.grid, tw.NonlinearitySpec.power(2))
    for name in tw.METHOD_NAMES:
        fs = tw.method_filters(name)
        back = tw.trig_step(system, fs, -0.11, tw.trig_step(system, fs, 0.11, st))
        err = max(np.max(np.abs(back.position.values - st.position.values)),
                  np.max(np.abs(back.velocity.values - st.velocity.values)))
        if err > 1e-10 * pair_norm(st, 0.0):
            problems.append(f"time symmetry {name}: {err:.2e}")

    # Filter-inside-nonlinearity equivalence over 100 steps.
    h, n = 2.0 ** -7, 100
    fs_c = tw.method_filters("C")
    route_a = tw.integrate(system, fs_c, h, n, st)
    ones = lambda x: np.ones_like(np.asarray(x, dtype=float))
    fs_stripped = tw.FilterSet(name="C-inner", psi=fs_c.psi, phi=ones,
                               psi0=fs_c.psi0, psi1=fs_c.psi1)
    system_b = OscillatorySystem(grid=st.grid, frequencies=system.frequencies,
                                 nonlinearity=system.nonlinearity,
                                 inner_filter=fs_c.phi(h * system.frequencies.omegas))
    route_b = tw.integrate(system_b, fs_stripped, h, n, st)
    err = max(np.max(np.abs(route_a.position.values - route_b.position.values)),
              np.max(np.abs(route_a.velocity.values - route_b.velocity.values)))
    if err > 1e-13:
        problems.append(f"filter equivalence: {err:.2e}")

    # Leapfrog two-step versus one-step reformulation over 100 steps at
    # h*K = 1.  Small-amplitude data keep the quadratic dynamics tame
    # over the run; the identity itself is data independent.
    K = 32
    g = tw.make_grid(K)
    small = State(to_spectral(0.1 * rng.normal(size=2 * K), g),
                  to_spectral(0.1 * rng.normal(size=2 * K), g))
    sys_sv = tw.make_system(g, tw.NonlinearitySpec.power(2))
    sv_states = tw.sv_two_step_run(sys_sv, 1.0 / K, 100, small)
    mod_system, fs_sv, transform = tw.sv_as_trig(sys_sv, 1.0 / K)
    st_mod = State(small.position, CoeffVector(g, transform * small.velocity.values))
    trig = tw.integrate(mod_system, fs_sv, 1.0 / K, 100, st_mod)
    err = max(np.max(np.abs(sv_states[-1].position.values - trig.position.values)),
              np.max(np.abs(sv_states[-1].velocity.values
                            - trig.velocity.values / transform)))
    if err > 1e-11:
        problems.append(f"leapfrog reformulation: {err:.2e}")

    # FFT versus naive convolution at the largest covered grid.
    for K in (64, 512):
        g = tw.make_grid(K)
        y = CoeffVector(g, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))
        z = CoeffVector(g, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))
        scale = max(1.0, tw.sobolev_norm(y, 0.0) * tw.sobolev_norm(z, 0.0))
        diff = np.max(np.abs(tw.cyclic_convolve(y, z).values
                             - tw.cyclic_convolve_naive(y, z).values))
        if diff > 1e-10 * scale:
            problems.append(f"convolution paths K={K}: {diff:.2e}")

    # Reality preservation along trajectories.
    out = tw.integrate(system, tw.method_filters("C"), 2.0 ** -7, 100, st)
    if not out.is_real_in_collocation(1e-12):
        problems.append("reality lost along trigonometric trajectory")
    if not sv_states[-1].is_real_in_collocation(1e-12):
        problems.append("reality lost along leapfrog trajectory")

    ok = report(6, not problems,
                "exactness, symmetry, filter equivalence, leapfrog reformulation, "
                "convolution paths, reality preservation"
                + ("" if not problems else f"; {problems}"))
    assert ok, problems


def test_criterion_7_initial_data_regularity():
    k_range = (32, 128, 512, 2048)
    h1 = {K: tw.sobolev_norm(generate_initial_data(
        InitialDataSpec(seed=SEED, K=K)).position, 1.0) for K in k_range}
    h101 = {K: tw.sobolev_norm(generate_initial_data(
        InitialDataSpec(seed=SEED, K=K)).position, 1.01) for K in k_range}
    growth = h1[2048] / h1[32] - 1.0
    monotone = all(h101[a] < h101[b] for a, b in zip(k_range, k_range[1:]))
    print(f"    H^1 norm: {h1[32]:.4f} at K=2^5 -> {h1[2048]:.4f} at K=2^11 "
          f"(growth {100 * growth:.1f}%)")
    print(f"    H^1.01 norm strictly increasing over K: {monotone}")
    ok = report(7, growth < 0.05 and monotone,
                f"H^1 growth {100 * growth:.1f}% (stated bound 5%), "
                f"H^1.01 monotone growth {monotone}")
    assert ok, (f"criterion 7: H^1 norm grows {100 * growth:.1f}% from K=2^5 to "
                f"K=2^11; the <5% bound is incompatible with the recipe's "
                f"slowly convergent H^1 series (see decisions ledger)")


def test_criterion_8_method_b_observation(study):
    window = default_fit_window(study.config.h_values, max(study.config.k_values))
    env = [(h, e) for h, e in uniform_error_envelope(study, "B", 0.5, component="pair")
           if h in window]
    slope = fit_order(env).slope
    floor = 1.5 - SLOPE_TOL
    print(f"    method B slope in H^1/2 x H^-1/2: {slope:.3f} "
          f"(guaranteed order 1.5; improved behaviour means up to ~2)")
    ok = report(8, slope >= floor,
                f"method B H^1/2 x H^-1/2 envelope slope {slope:.3f} >= {floor}")
    assert ok
