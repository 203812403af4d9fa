"""Trigonometric time integrators for spectral discretisations of
1D semilinear wave equations, with a convergence-study harness.

The package follows the semi-discrete view: a 2*pi-periodic wave
equation u_tt = u_xx + g(u) becomes, after spectral collocation with 2K
modes, the oscillatory system y'' = -Omega^2 y + f(y) for the Fourier
coefficients y.  :mod:`trigwave.spectral` provides the grid, transforms
and fractional Sobolev norms; :mod:`trigwave.nonlinearity` the aliased
convolution nonlinearities; :mod:`trigwave.filters` the filter-function
catalog; :mod:`trigwave.integrators` the exact linear propagator, the
trigonometric one-step methods and the leapfrog scheme; and
:mod:`trigwave.harness` the seeded convergence experiments.
"""

from .exceptions import (BlowUpError, CFLViolationError, ConfigError,
                         FitUndefinedError, IncompleteGridError,
                         ReferenceUnconvergedError)
from .filters import (AssumptionReport, FilterSet, METHOD_NAMES, check_assumption,
                      check_symmetry_symplecticity, default_xi_samples,
                      method_filters, sinc)
from .harness import (ErrorRecord, ErrorTable, ExperimentConfig, InitialDataSpec,
                      OrderFit, SplitMix64, config_from_dict, config_to_dict,
                      default_fit_window, fit_order, generate_initial_data,
                      run_convergence_study, two_point_slope, uniform_error_envelope)
from .integrators import (FrequencySet, OscillatorySystem, ReferenceSolution,
                          exact_propagator_apply, frequencies_finite_difference,
                          frequencies_spectral, integrate, make_system,
                          reference_solution, sv_as_trig, sv_modified_frequencies,
                          sv_two_step_run, trig_step)
from .nonlinearity import (NonlinearitySpec, cyclic_convolve, cyclic_convolve_naive,
                           evaluate, filtered)
from .spectral import (CoeffVector, MAX_K_DEFAULT, SpectralGrid, State, make_grid,
                       pair_norm, project_initial_data, sobolev_norm, to_physical,
                       to_physical_naive, to_spectral, to_spectral_naive)

__version__ = "0.1.0"
