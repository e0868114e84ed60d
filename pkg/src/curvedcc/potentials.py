"""Cotangent potential, moment of inertia, gradients, Hessians, residuals.

All planar work happens in the angle chart (theta, phi) of geometry.py.
Writing S = sn(theta), C = cs(theta) and psi = phi_i - phi_j, the signed
inner product of two chart points is

    p_ij = S_i S_j + sigma * C_i C_j * cs(psi),

and the pair distance satisfies cs(d) = sigma * p, sn(d)^2 = sigma*(1 - p^2).
Derivatives of the pair term ct(d) = cot d (sphere) / coth d (hyperboloid)
then reduce to derivatives of p:

    d ct / da      = p_a / sn(d)^3
    d^2 ct / da db = p_ab / sn(d)^3 + 3 sigma p p_a p_b / sn(d)^5.

The Hessian is assembled from these closed forms; finite differences exist
only as a test oracle.  Everything broadcasts over leading batch axes except
the Hessian, which is per-configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradientError, SingularConfigurationError
from .geometry import Curvature, as_masses, signed_dot
from .params import D_MIN, EPS_CC


@dataclass(frozen=True)
class PotentialEval:
    """Potential, inertia and their chart gradients at one configuration."""

    U: float
    I: float
    grad_U: np.ndarray  # (2n,): theta block then phi block
    grad_I: np.ndarray


@dataclass(frozen=True)
class CCResidual:
    """Least-squares multiplier and central-configuration residual."""

    multiplier: float
    residual_norm: float          # ||grad U - lambda grad I||
    residual_scaled: float        # residual_norm / max(1, ||grad U||)
    per_particle: np.ndarray      # (n, 2) chart rows or (n, 4) ambient rows
    grad_u_norm: float

    def is_cc(self, tol: float = EPS_CC) -> bool:
        return self.residual_scaled < tol


def _pair_tables(theta, phi, kappa: Curvature, guard: bool = True):
    """Per-pair quantities; inputs shaped (..., n).

    Returns (p, inv_sn3, S, C, cs_psi, sn_psi) with pair arrays shaped
    (..., n, n) and diagonal entries zeroed out of inv_sn3.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = theta.shape[-1]
    S = kappa.sn(theta)
    C = kappa.cs(theta)
    psi = phi[..., :, None] - phi[..., None, :]
    cs_psi = kappa.cs(psi)
    sn_psi = kappa.sn(psi)
    p = (S[..., :, None] * S[..., None, :]
         + kappa.sigma * C[..., :, None] * C[..., None, :] * cs_psi)
    sn2 = kappa.sigma * (1.0 - p * p)
    eye = np.eye(n, dtype=bool)
    sn2 = np.where(eye, 1.0, sn2)
    if guard:
        # sn(d)^2 <= sn(d_min)^2 covers collisions in both geometries and
        # antipodal pairs on the sphere in one branch-free test.
        if np.any(sn2[..., ~eye] <= kappa.sn(D_MIN) ** 2):
            raise SingularConfigurationError(
                "pair separation below d_min = %g (or antipodal)" % D_MIN)
    inv_sn3 = np.where(eye, 0.0, sn2 ** -1.5)
    return p, inv_sn3, S, C, cs_psi, sn_psi


def pair_distances(theta, phi, kappa: Curvature):
    """Chart pair-distance matrix (..., n, n)."""
    p, _, _, _, _, _ = _pair_tables(theta, phi, kappa, guard=False)
    n = np.shape(theta)[-1]
    if kappa.spherical:
        d = np.arccos(np.clip(p, -1.0, 1.0))
    else:
        d = np.arccosh(np.maximum(-p, 1.0))
    eye = np.eye(n, dtype=bool)
    return np.where(eye, 0.0, d)


def potential(theta, phi, m, kappa: Curvature):
    """U = sum_{i<j} m_i m_j ct(d_ij); batched over leading axes."""
    m = as_masses(m)
    p, inv_sn3, *_ = _pair_tables(theta, phi, kappa)
    # ct(d) = cs(d)/sn(d) = sigma p / sn(d)
    sn2 = kappa.sigma * (1.0 - p * p)
    n = m.size
    eye = np.eye(n, dtype=bool)
    ct = np.where(eye, 0.0, kappa.sigma * p * np.where(eye, 1.0, sn2) ** -0.5)
    mm = m[:, None] * m[None, :]
    return 0.5 * np.sum(mm * ct, axis=(-2, -1))


def inertia(theta, phi, m, kappa: Curvature):
    """I = sum_i m_i (x_i^2 + y_i^2) in chart form; batched."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    m = as_masses(m)
    val = kappa.sn(theta) ** 2 + kappa.cs(theta) ** 2 * kappa.sn(phi) ** 2
    return np.sum(m * val, axis=-1)


def gradients(theta, phi, m, kappa: Curvature):
    """Chart gradients of U and I, batched; returns (gU, gI) of shape (..., 2n)."""
    m = as_masses(m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p, inv_sn3, S, C, cs_psi, sn_psi = _pair_tables(theta, phi, kappa)
    mm = m[:, None] * m[None, :]

    p_ti = C[..., :, None] * S[..., None, :] - S[..., :, None] * C[..., None, :] * cs_psi
    p_fi = -C[..., :, None] * C[..., None, :] * sn_psi

    gU_t = np.sum(mm * p_ti * inv_sn3, axis=-1)
    gU_f = np.sum(mm * p_fi * inv_sn3, axis=-1)

    Sf = kappa.sn(phi)
    gI_t = m * kappa.sn(2.0 * theta) * (1.0 - kappa.sigma * Sf ** 2)
    gI_f = m * C ** 2 * kappa.sn(2.0 * phi)

    gU = np.concatenate([gU_t, gU_f], axis=-1)
    gI = np.concatenate([gI_t, gI_f], axis=-1)
    return gU, gI


def evaluate(theta, phi, m, kappa: Curvature) -> PotentialEval:
    gU, gI = gradients(theta, phi, m, kappa)
    return PotentialEval(
        U=float(potential(theta, phi, m, kappa)),
        I=float(inertia(theta, phi, m, kappa)),
        grad_U=gU,
        grad_I=gI,
    )


def multiplier_and_residual(theta, phi, m, kappa: Curvature) -> CCResidual:
    """Least-squares multiplier lambda = <gU, gI>/<gI, gI> and CC residual."""
    gU, gI = gradients(theta, phi, m, kappa)
    gi2 = float(gI @ gI)
    gu_norm = float(np.linalg.norm(gU))
    if gi2 < 1e-28 * max(1.0, gu_norm) ** 2:
        raise DegenerateGradientError(
            "grad I vanishes: special-configuration locus, no multiplier")
    lam = float(gU @ gI) / gi2
    r = gU - lam * gI
    rn = float(np.linalg.norm(r))
    n = np.shape(theta)[-1]
    return CCResidual(
        multiplier=lam,
        residual_norm=rn,
        residual_scaled=rn / max(1.0, gu_norm),
        per_particle=np.stack([r[:n], r[n:]], axis=1),
        grad_u_norm=gu_norm,
    )


def hessian(theta, phi, m, kappa: Curvature, lam: float) -> np.ndarray:
    """Analytic 2n x 2n Hessian of U - lam*I in chart coordinates.

    Ordering is (theta_1..theta_n, phi_1..phi_n).  Exactly symmetric by
    construction; at geodesic points (all phi = 0) the theta-phi cross
    block vanishes identically.
    """
    m = as_masses(m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if theta.ndim != 1:
        raise ValueError("hessian is per-configuration")
    n = theta.size
    sig = kappa.sigma
    p, inv_sn3, S, C, cs_psi, sn_psi = _pair_tables(theta, phi, kappa)
    inv_sn5 = inv_sn3 ** (5.0 / 3.0)
    mm = m[:, None] * m[None, :]

    Si, Sj = S[:, None], S[None, :]
    Ci, Cj = C[:, None], C[None, :]

    p_ti = Ci * Sj - Si * Cj * cs_psi
    p_tj = Si * Cj - Ci * Sj * cs_psi
    p_fi = -Ci * Cj * sn_psi
    p_fj = Ci * Cj * sn_psi

    p_titi = -sig * p
    p_titj = Ci * Cj + sig * Si * Sj * cs_psi
    p_tifi = sig * Si * Cj * sn_psi
    p_tifj = -sig * Si * Cj * sn_psi
    p_tjfi = sig * Ci * Sj * sn_psi
    p_fifi = -Ci * Cj * cs_psi
    p_fifj = Ci * Cj * cs_psi

    def second(p_ab, p_a, p_b):
        return mm * (p_ab * inv_sn3 + 3.0 * sig * p * p_a * p_b * inv_sn5)

    H = np.zeros((2 * n, 2 * n))

    # off-diagonal body pairs
    tt = second(p_titj, p_ti, p_tj)
    tf = second(p_tifj, p_ti, p_fj)   # d2/d theta_i d phi_j
    ft = second(p_tjfi, p_fi, p_tj)   # d2/d phi_i d theta_j
    ff = second(p_fifj, p_fi, p_fj)
    od = ~np.eye(n, dtype=bool)
    H[:n, :n][od] = tt[od]
    H[:n, n:][od] = tf[od]
    H[n:, :n][od] = ft[od]
    H[n:, n:][od] = ff[od]

    # same-body second derivatives accumulate over partners
    H[:n, :n][np.diag_indices(n)] = np.sum(second(p_titi, p_ti, p_ti), axis=1)
    H[n:, n:][np.diag_indices(n)] = np.sum(second(p_fifi, p_fi, p_fi), axis=1)
    same_tf = np.sum(second(p_tifi, p_ti, p_fi), axis=1)
    H[:n, n:][np.diag_indices(n)] = same_tf
    H[n:, :n][np.diag_indices(n)] = same_tf

    # inertia part, diagonal per particle
    Sf = kappa.sn(phi)
    I_tt = 2.0 * m * kappa.cs(2.0 * theta) * (1.0 - sig * Sf ** 2)
    I_tf = -sig * m * kappa.sn(2.0 * theta) * kappa.sn(2.0 * phi)
    I_ff = 2.0 * m * C ** 2 * kappa.cs(2.0 * phi)
    H[:n, :n][np.diag_indices(n)] -= lam * I_tt
    H[n:, n:][np.diag_indices(n)] -= lam * I_ff
    H[:n, n:][np.diag_indices(n)] -= lam * I_tf
    H[n:, :n][np.diag_indices(n)] -= lam * I_tf

    return 0.5 * (H + H.T)   # returned matrix is exactly symmetric


# ---------------------------------------------------------------------------
# ambient (chart-free) evaluation, for configurations outside the planar chart
# ---------------------------------------------------------------------------

def _ambient_pair(q, kappa: Curvature, guard: bool = True):
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    p = signed_dot(q[:, None, :], q[None, :, :], kappa)
    sn2 = kappa.sigma * (1.0 - p * p)
    eye = np.eye(n, dtype=bool)
    sn2 = np.where(eye, 1.0, sn2)
    if guard and np.any(sn2[~eye] <= kappa.sn(D_MIN) ** 2):
        raise SingularConfigurationError(
            "pair separation below d_min = %g (or antipodal)" % D_MIN)
    return p, np.where(eye, 0.0, sn2 ** -1.5)


def potential_ambient(q, m, kappa: Curvature) -> float:
    m = as_masses(m)
    p, _ = _ambient_pair(q, kappa)
    n = m.size
    eye = np.eye(n, dtype=bool)
    sn2 = np.where(eye, 1.0, kappa.sigma * (1.0 - p * p))
    ct = np.where(eye, 0.0, kappa.sigma * p * sn2 ** -0.5)
    mm = m[:, None] * m[None, :]
    return float(0.5 * np.sum(mm * ct))


def inertia_ambient(q, m, kappa: Curvature) -> float:
    q = np.asarray(q, dtype=float)
    m = as_masses(m)
    return float(np.sum(m * (q[:, 0] ** 2 + q[:, 1] ** 2)))


def _tangential(v, q, kappa: Curvature):
    return v - kappa.sigma * signed_dot(v, q, kappa)[..., None] * q


def gradients_ambient(q, m, kappa: Curvature):
    """Tangential signed-metric gradients of U and I, shape (n, 4) each.

    grad U at body i is the mutual-force sum
    sum_j m_i m_j (q_j - cs(d_ij) q_i) / sn(d_ij)^3, which is already
    tangent; grad I is the tangential projection of 2 m_i (x_i, y_i, 0, 0).
    """
    q = np.asarray(q, dtype=float)
    m = as_masses(m)
    p, inv_sn3 = _ambient_pair(q, kappa)
    cs_d = kappa.sigma * p
    w = (m[:, None] * m[None, :]) * inv_sn3
    gU = np.einsum("ij,jk->ik", w, q) - np.sum(w * cs_d, axis=1)[:, None] * q
    gI = 2.0 * m[:, None] * np.concatenate(
        [q[:, :2], np.zeros((q.shape[0], 2))], axis=1)
    gI = _tangential(gI, q, kappa)
    return gU, gI


def multiplier_and_residual_ambient(q, m, kappa: Curvature) -> CCResidual:
    """Ambient-coordinates analogue of multiplier_and_residual.

    Inner products are taken with the signed metric, which is positive
    definite on the tangent spaces of both manifolds.
    """
    gU, gI = gradients_ambient(q, m, kappa)
    q = np.asarray(q, dtype=float)
    gi2 = float(np.sum(signed_dot(gI, gI, kappa)))
    gu2 = float(np.sum(signed_dot(gU, gU, kappa)))
    gu_norm = np.sqrt(max(gu2, 0.0))
    if gi2 < 1e-28 * max(1.0, gu_norm) ** 2:
        raise DegenerateGradientError(
            "grad I vanishes: special-configuration locus, no multiplier")
    lam = float(np.sum(signed_dot(gU, gI, kappa))) / gi2
    r = gU - lam * gI
    rn = float(np.sqrt(max(np.sum(signed_dot(r, r, kappa)), 0.0)))
    return CCResidual(
        multiplier=lam,
        residual_norm=rn,
        residual_scaled=rn / max(1.0, gu_norm),
        per_particle=r,
        grad_u_norm=gu_norm,
    )


def theorem_mc_values(q, m) -> np.ndarray:
    """The four mixed first moments that vanish at every ordinary central
    configuration: sum m x z, sum m x w, sum m y z, sum m y w."""
    q = np.asarray(q, dtype=float)
    m = as_masses(m)
    x, y, z, w = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    return np.array([
        float(np.sum(m * x * z)),
        float(np.sum(m * x * w)),
        float(np.sum(m * y * z)),
        float(np.sum(m * y * w)),
    ])
