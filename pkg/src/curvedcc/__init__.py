"""curvedcc: ordinary central configurations of the curved n-body problem.

Numerical solvers, spectral (Morse inertia) analysis, relative-equilibrium
verification and compactness probes for point masses under the cotangent
potential on S^3 and H^3.
"""

__version__ = "0.1.0"

from .geometry import (
    Curvature,
    HYPERBOLIC,
    SPHERICAL,
    SymmetryElement,
    angles_to_point,
    apply_symmetry,
    class_gap,
    distance,
    geodesic_distance_1d,
    point_to_angles,
    signed_dot,
)
from .potentials import (
    CCResidual,
    PotentialEval,
    gradients,
    hessian,
    inertia,
    multiplier_and_residual,
    multiplier_and_residual_ambient,
    potential,
    theorem_mc_values,
)
from .geodesic import (
    GeodesicCC,
    OrderingProblem,
    enumerate_geodesic_ccs,
    solve_ordering,
    spherical_regime_check,
)
from .spectral import (
    InertiaTriple,
    SpectralReport,
    build_A,
    build_blocks,
    inertia_triple,
    spectral_report,
)
from .planar import (
    CCCatalog,
    CCSolution,
    PlanarSearchConfig,
    critical_values_inertia,
    degenerate_two_body_probe,
    multistart_solve,
    three_body_criterion,
)
from .dynamics import (
    REFamily,
    State,
    Trajectory,
    eom_rhs,
    integrate,
    re_families_from_cc,
    verify_re,
)
from .compactness import (
    ExclusionProbe,
    SingularFamily,
    collision_antipodal_family,
    exclusion_scan,
    multiplier_divergence_scan,
    polygon_family,
)

__all__ = [name for name in dir() if not name.startswith("_")]
