"""Ambient 4-vector geometry for S^3 and H^3 and their planar submanifolds.

Both manifolds are realized as unit "spheres" of the signed inner product

    a . b = ax*bx + ay*by + az*bz + sigma * aw*bw,

with sigma = +1 (round sphere in R^4) or sigma = -1 (hyperboloid in R^{3,1},
w >= 1).  Distances come from cos d = a.b on the sphere and cosh d = -a.b on
the hyperboloid.  The planar work happens in an angle chart (theta, phi):

    sigma = -1:  (x, y, z, w) = (sinh t, cosh t sinh p, 0, cosh t cosh p)
    sigma = +1:  (x, y, z, w) = (sin t,  cos t sin p,  cos t cos p,  0)

so the geodesic phi = 0 is the xw-hyperbola (hyperbolic) or the xz great
circle (spherical).  The symmetry group acting on configurations is
SO(2)_xy x SO(2)_zw (spherical) or SO(2)_xy x SO+(1,1)_zw (hyperbolic),
optionally composed with the coordinate swap tau(x,y,z,w) = (z,w,x,y) on
the sphere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ChartDomainError, ManifoldError
from .params import EPS_CLASS, EPS_MANIFOLD


@dataclass(frozen=True)
class Curvature:
    """Curvature sign selecting the manifold and all trig branches."""

    sigma: int

    def __post_init__(self):
        if self.sigma not in (+1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")

    @property
    def spherical(self) -> bool:
        return self.sigma > 0

    @property
    def hyperbolic(self) -> bool:
        return self.sigma < 0

    # Generalized trig: sn/cs obey sn' = cs, cs' = -sigma*sn and
    # cs^2 + sigma*sn^2 = 1 in both branches.
    def sn(self, x):
        return np.sin(x) if self.spherical else np.sinh(x)

    def cs(self, x):
        return np.cos(x) if self.spherical else np.cosh(x)

    def arcsn(self, x):
        return np.arcsin(x) if self.spherical else np.arcsinh(x)

    def __str__(self):
        return "S" if self.spherical else "H"


SPHERICAL = Curvature(+1)
HYPERBOLIC = Curvature(-1)


def as_masses(m) -> np.ndarray:
    m = np.atleast_1d(np.asarray(m, dtype=float))
    if m.ndim != 1 or m.size < 2:
        raise ValueError("need at least two masses")
    if not np.all(m > 0):
        raise ValueError("masses must be positive")
    return m


def signed_dot(a, b, kappa: Curvature):
    """Signed 4-vector inner product; broadcasts over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]
    return s + kappa.sigma * a[..., 3] * b[..., 3]


def on_manifold(q, kappa: Curvature, tol: float = EPS_MANIFOLD) -> bool:
    q = np.asarray(q, dtype=float)
    ok = np.abs(signed_dot(q, q, kappa) - kappa.sigma) < tol
    if kappa.hyperbolic:
        ok = ok & (q[..., 3] > 0)
    return bool(np.all(ok))


def assert_on_manifold(q, kappa: Curvature, tol: float = EPS_MANIFOLD):
    if not on_manifold(q, kappa, tol):
        raise ManifoldError("point(s) violate q.q = sigma within tolerance")


def project_to_manifold(q, kappa: Curvature):
    """Rescale ambient points back onto q.q = sigma (sheet-preserving)."""
    q = np.asarray(q, dtype=float)
    nrm2 = kappa.sigma * signed_dot(q, q, kappa)
    if np.any(nrm2 <= 0):
        raise ManifoldError("cannot project: wrong causal type")
    return q / np.sqrt(nrm2)[..., None]


def distance(a, b, kappa: Curvature):
    """Geodesic distance between manifold points; broadcasts."""
    p = signed_dot(a, b, kappa)
    if kappa.spherical:
        over = np.abs(p) - 1.0
        if np.any(over > EPS_MANIFOLD):
            raise ManifoldError("|a.b| exceeds 1 beyond tolerance on S^3")
        return np.arccos(np.clip(p, -1.0, 1.0))
    c = -p
    under = 1.0 - c
    if np.any(under > EPS_MANIFOLD):
        raise ManifoldError("-a.b below 1 beyond tolerance on H^3")
    return np.arccosh(np.maximum(c, 1.0))


def pairwise_distance_matrix(q, kappa: Curvature):
    q = np.asarray(q, dtype=float)
    d = distance(q[:, None, :], q[None, :, :], kappa)
    np.fill_diagonal(d, 0.0)
    return d


def angles_to_point(theta, phi, kappa: Curvature):
    """Map chart coordinates to ambient 4-vectors (planar embedding).

    Broadcasts: scalar inputs give a (4,) point, arrays give (..., 4).
    The spherical chart is the open cap z > 0, i.e. |theta|, |phi| < pi/2.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if kappa.spherical:
        lim = np.pi / 2
        if np.any(np.abs(theta) >= lim) or np.any(np.abs(phi) >= lim):
            raise ChartDomainError("spherical chart requires |theta|,|phi| < pi/2")
        x = np.sin(theta)
        y = np.cos(theta) * np.sin(phi)
        z = np.cos(theta) * np.cos(phi)
        w = np.zeros_like(x)
        return np.stack([x, y, z, w], axis=-1)
    x = np.sinh(theta)
    y = np.cosh(theta) * np.sinh(phi)
    z = np.zeros_like(x)
    w = np.cosh(theta) * np.cosh(phi)
    return np.stack([x, y, z, w], axis=-1)


def point_to_angles(q, kappa: Curvature):
    """Invert the planar chart. Requires the point to lie in the chart image."""
    q = np.asarray(q, dtype=float)
    if kappa.spherical:
        if np.any(np.abs(q[..., 3]) > EPS_MANIFOLD):
            raise ChartDomainError("spherical chart point must have w = 0")
        if np.any(q[..., 2] <= 0):
            raise ChartDomainError("spherical chart covers z > 0 only")
        theta = np.arcsin(np.clip(q[..., 0], -1.0, 1.0))
        phi = np.arctan2(q[..., 1], q[..., 2])
        return theta, phi
    if np.any(np.abs(q[..., 2]) > EPS_MANIFOLD):
        raise ChartDomainError("hyperbolic chart point must have z = 0")
    theta = np.arcsinh(q[..., 0])
    phi = np.arctanh(q[..., 1] / q[..., 3])
    return theta, phi


def geodesic_points(theta, kappa: Curvature):
    """Ambient points of a geodesic configuration (phi = 0)."""
    theta = np.asarray(theta, dtype=float)
    return angles_to_point(theta, np.zeros_like(theta), kappa)


def geodesic_distance_1d(theta_i, theta_j, kappa: Curvature):
    """On the geodesic chart the distance is plainly |theta_i - theta_j|."""
    d = np.abs(np.asarray(theta_i, dtype=float) - np.asarray(theta_j, dtype=float))
    if kappa.spherical and np.any(d >= np.pi):
        raise ChartDomainError("spherical geodesic separation must stay below pi")
    return d


# ---------------------------------------------------------------------------
# symmetry group
# ---------------------------------------------------------------------------

def _rot2(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def _boost2(s):
    c, h = np.cosh(s), np.sinh(s)
    return np.array([[c, h], [h, c]])


TAU = np.array([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class SymmetryElement:
    """Element of the configuration symmetry group.

    ``angle1`` rotates the xy-plane; ``param2`` rotates the zw-plane
    (spherical) or boosts it (hyperbolic); ``tau_flag`` post-composes with
    the coordinate swap tau, which is only available on the sphere.
    """

    angle1: float
    param2: float = 0.0
    tau_flag: bool = False

    def matrix(self, kappa: Curvature) -> np.ndarray:
        if self.tau_flag and not kappa.spherical:
            raise ValueError("tau is a spherical isometry only")
        g = np.zeros((4, 4))
        g[:2, :2] = _rot2(self.angle1)
        g[2:, 2:] = _rot2(self.param2) if kappa.spherical else _boost2(self.param2)
        if self.tau_flag:
            g = TAU @ g
        return g


IDENTITY = SymmetryElement(0.0)


def compose(g1: SymmetryElement, g2: SymmetryElement, kappa: Curvature) -> SymmetryElement:
    """Group composition g1 * g2 in the (angle1, param2, tau) parametrization.

    tau * blockdiag(A, B) * tau = blockdiag(B, A), so the parameters of g2
    swap whenever g1 carries a tau.
    """
    if (g1.tau_flag or g2.tau_flag) and not kappa.spherical:
        raise ValueError("tau is a spherical isometry only")
    a2, p2 = g2.angle1, g2.param2
    if g1.tau_flag:
        a2, p2 = p2, a2
    return SymmetryElement(g1.angle1 + a2, g1.param2 + p2, g1.tau_flag ^ g2.tau_flag)


def apply_symmetry(g: SymmetryElement, q, kappa: Curvature) -> np.ndarray:
    """Apply a symmetry element to an (n, 4) configuration."""
    q = np.asarray(q, dtype=float)
    return q @ g.matrix(kappa).T


# ---------------------------------------------------------------------------
# class identification modulo the symmetry group
# ---------------------------------------------------------------------------

def _max_pointwise_gap(qa, qb):
    return float(np.max(np.linalg.norm(qa - qb, axis=-1)))


def boost_normalize(q, m, kappa: Curvature):
    """Normalize the noncompact boost direction (hyperbolic only).

    Applies the unique zw-boost that zeroes the first moment
    sum_i m_i z_i w_i.  Under a boost by s that moment becomes
    A cosh 2s + B sinh 2s with B = sum m_i (z_i^2 + w_i^2)/2 > |A|,
    so s = -artanh(A/B)/2 in closed form.  Planar (z = 0) configurations
    are already normalized.  Returns (q_normalized, s).
    """
    if kappa.spherical:
        return np.asarray(q, dtype=float), 0.0
    q = np.asarray(q, dtype=float)
    m = np.asarray(m, dtype=float)
    a = float(np.sum(m * q[:, 2] * q[:, 3]))
    b = float(np.sum(m * (q[:, 2] ** 2 + q[:, 3] ** 2)) / 2.0)
    s = -0.5 * np.arctanh(a / b)
    return apply_symmetry(SymmetryElement(0.0, s), q, kappa), s


def class_gap(qa, qb, m, kappa: Curvature, *, coarse: int = 240) -> float:
    """Distance between configuration classes modulo the symmetry group.

    Sweeps the group parameters on a coarse grid (golden-section style
    refinement via Nelder-Mead around the best cell) and returns the
    infimum of the max pointwise ambient gap.  Zero (below EPS_CLASS)
    means the same class.  Hyperbolic configurations are boost-normalized
    first since SO+(1,1) is noncompact.
    """
    qa = np.asarray(qa, dtype=float)
    qb = np.asarray(qb, dtype=float)
    if qa.shape != qb.shape:
        raise ValueError("configurations must have equal size")
    m = as_masses(m)

    if kappa.hyperbolic:
        qa, _ = boost_normalize(qa, m, kappa)
        qb, _ = boost_normalize(qb, m, kappa)

    ts = np.linspace(0.0, 2 * np.pi, coarse, endpoint=False)

    def gap_of(params):
        g = SymmetryElement(float(params[0]), float(params[1]))
        return _max_pointwise_gap(qa, apply_symmetry(g, qb, kappa))

    best = np.inf
    best_params = (0.0, 0.0)
    if kappa.spherical:
        # zw-rotation restricted to {0, pi} suffices for planar (w = 0)
        # configurations; do the full sweep only when w is active.
        planar = np.max(np.abs(qa[:, 3])) < 1e-12 and np.max(np.abs(qb[:, 3])) < 1e-12
        second = (0.0, np.pi) if planar else np.linspace(0.0, 2 * np.pi, 36, endpoint=False)
        for u in second:
            for t in ts:
                v = gap_of((t, u))
                if v < best:
                    best, best_params = v, (t, u)
    else:
        for t in ts:
            v = gap_of((t, 0.0))
            if v < best:
                best, best_params = v, (t, 0.0)

    res = minimize(gap_of, np.array(best_params), method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 400})
    return float(min(best, res.fun))


def same_class(qa, qb, m, kappa: Curvature, tol: float = EPS_CLASS) -> bool:
    return class_gap(qa, qb, m, kappa) < tol


def mass_orderings(n: int):
    """All n! orderings of n labels (tuples of particle indices)."""
    return list(itertools.permutations(range(n)))
