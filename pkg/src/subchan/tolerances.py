"""Numerical tolerances used across the package.

Two tiers: identities that hold in exact arithmetic (norms, hermiticity,
binomial sums) are checked at STRUCTURAL_TOL; anything routed through an
eigen- or singular-value solver gets the looser SPECTRAL_TOL. Every check
that uses one of these constants accepts a per-call override.
"""

# Exact-arithmetic identities (unit norms, hermiticity, closed-form sums).
STRUCTURAL_TOL = 1e-12

# Eigen/SVD-based checks (positivity, projector spectra).
SPECTRAL_TOL = 1e-10

# Invariant-hull leakage threshold (operator norm of the out-of-subspace block).
HULL_TOL = 1e-9

# Unitality / trace-preservation verdicts for restricted maps.
UNITALITY_TOL = 1e-9

# Singular-value cutoff for the fixed-operator subspace of a channel.
FIXED_POINT_TOL = 1e-8

# Largest coherent-state truncation deficit accepted by the closed-form
# coherent action; above this the truncated outer product is too lossy.
COHERENT_DEFICIT_TOL = 1e-8

# Per-entry tail target when truncating an infinite Kraus family. Chosen a
# decade under the 1e-12 trace-preservation goal to leave accumulation margin.
KRAUS_TAIL_TARGET = 1e-13

# Agreement required between the moment-contraction fidelity and the
# quadrature oracle.
CROSS_CHECK_TOL = 1e-10
