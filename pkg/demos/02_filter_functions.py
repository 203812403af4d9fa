"""The filter-function catalog and its structural checks.

Each trigonometric integrator is defined by four scalar filters
(psi, phi, psi0, psi1) of xi = h*omega.  This script tabulates them,
classifies symmetry and symplecticity, and verifies the decay bounds
that the convergence orders rest on.
"""

import numpy as np

from trigwave import (METHOD_NAMES, check_assumption, check_symmetry_symplecticity,
                      default_xi_samples, method_filters, sinc)

xi_table = np.array([0.0, np.pi / 2, np.pi, 3.5, 2 * np.pi])
print("filter values at selected xi:")
header = "  ".join(f"{x:8.4f}" for x in xi_table)
for name in METHOD_NAMES:
    fs = method_filters(name)
    print(f"\nmethod {name}:        {header}")
    for label, fn in (("psi", fs.psi), ("phi", fs.phi),
                      ("psi0", fs.psi0), ("psi1", fs.psi1)):
        values = "  ".join(f"{v:8.4f}" for v in np.atleast_1d(fn(xi_table)))
        print(f"  {label:>5}: {values}")

print("\nsymmetry / symplecticity on a fine sample grid:")
xi = np.linspace(1e-3, 20.0, 4000)
for name in METHOD_NAMES:
    symmetric, symplectic = check_symmetry_symplecticity(method_filters(name), xi)
    print(f"  {name:>6}: symmetric={symmetric}  symplectic={symplectic}")

print("\ndecay bounds with constant c = 2 on 2000 log-spaced samples:")
samples = default_xi_samples()
for name in METHOD_NAMES:
    fs = method_filters(name)
    verdicts = []
    for beta in (-1.0, -0.5, 0.0, 0.5, 1.0):
        report = check_assumption(fs, beta, 2.0, samples)
        verdicts.append(f"beta {beta:+.1f}: {'ok' if report.ok else 'VIOLATED'}")
    print(f"  {name:>6}: " + "  ".join(verdicts))

# A filter that grows is caught immediately.
from trigwave import FilterSet
bad = FilterSet(name="growing", psi=sinc,
                phi=lambda x: 1.0 + 0.5 * np.asarray(x, dtype=float),
                psi0=np.cos, psi1=lambda x: np.ones_like(np.asarray(x, dtype=float)))
report = check_assumption(bad, 0.0, 1.0, samples)
print(f"\nconstructed counterexample: {len(report.violations)} violations, e.g.")
v = report.violations[len(report.violations) // 2]
print(f"  xi = {v.xi:.4f}: {v.inequality} has lhs {v.lhs:.4f} > rhs {v.rhs:.4f}")
