"""Numerical tolerances and guard constants shared across the toolkit.

Every threshold that a solver or verifier applies is pinned here, so that
the CLI can expose them as overridable knobs and the test suite can assert
against the exact shipped values.
"""

# Manifold invariant |q.q - sigma| after any projection / renormalization.
EPS_MANIFOLD = 1e-9

# Class-identity gap: two configurations closer than this (after the
# symmetry sweep) are the same class.
EPS_CLASS = 1e-6

# Minimum pair separation: below this, potential evaluations raise instead
# of returning huge floats that would poison Hessian conditioning.
D_MIN = 1e-8

# Scaled residual ||grad U - lambda grad I|| / max(1, ||grad U||) below
# which a configuration is accepted as an ordinary central configuration.
EPS_CC = 1e-8

# Constraint satisfaction |I - c| / max(1, c) for solved configurations.
EPS_CONSTRAINT = 1e-10

# Newton iteration cap for the geodesic ordering solver.
MAX_ITER = 200

# Finite-difference steps used by the test oracles (gradients / Hessians)
# and the matching relative / absolute acceptance floors.
H_FD_GRAD = 1e-5
H_FD_HESS = 1e-4
EPS_FD_REL = 1e-6
EPS_FD_ABS = 1e-9

# Zero-eigenvalue classification: |mu| < TOL_ZERO_FACTOR * spectral radius
# counts as zero; strict-ordering assertions require at least GAP_MIN.
TOL_ZERO_FACTOR = 1e-7
GAP_MIN = 1e-9

# Planar multistart Newton: step-norm convergence threshold and the
# default number of starts per body.
NEWTON_TOL = 1e-12
STARTS_PER_BODY = 500

# Dynamics verification: integrator step and trajectory match tolerance.
DT_DEFAULT = 1e-3
EPS_DYN = 1e-6

# Compactness probes: samples per radius and the radius grid span (decades).
EXCLUSION_SAMPLES = 10_000
EXCLUSION_DECADES = 3

# CLI tolerance overrides may not stray more than this factor from the
# defaults in either direction.
OVERRIDE_FACTOR = 1e3

# Chart guard for the spherical solver: keep strictly inside the open cap.
CHART_MARGIN = 1e-6
