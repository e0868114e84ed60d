"""Geodesic ordinary central configurations, one per mass ordering.

On the geodesic (phi = 0) the problem reduces to n angles theta_1..theta_n
with pair distances |theta_i - theta_j|.  For each strict ordering of the
masses the sought configuration is the unique minimum of U on that ordered
component of the level set {I = c}; it satisfies

    sum_{j != i} m_i m_j sn(theta_j - theta_i) / sn(d_ij)^3
        = lambda * m_i * sn(2 theta_i)

with a negative multiplier.  The solver is a line-searched Newton iteration
on the augmented system (grad U - lambda grad I, I - c), seeded from the
flat-space collinear configuration of the same masses (solved by the same
Newton with flat kernels) rescaled onto {I = c}, with a log-barrier descent
fallback if the Newton iteration stalls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import ConvergenceError, NoSolutionError
from .geometry import SPHERICAL, Curvature, as_masses, geodesic_points, mass_orderings
from .params import (
    CHART_MARGIN,
    D_MIN,
    EPS_CC,
    EPS_CONSTRAINT,
    MAX_ITER,
)
from . import potentials


@dataclass(frozen=True)
class OrderingProblem:
    """One mass ordering along the geodesic at inertia level c."""

    masses: np.ndarray
    c: float
    kappa: Curvature
    ordering: tuple

    def __post_init__(self):
        object.__setattr__(self, "masses", as_masses(self.masses))
        n = self.masses.size
        if sorted(self.ordering) != list(range(n)):
            raise ValueError("ordering must be a permutation of 0..n-1")
        if self.c <= 0:
            raise ValueError("c must be positive")

    @property
    def in_guaranteed_regime(self) -> bool:
        if self.kappa.hyperbolic:
            return True
        return self.c < float(np.min(self.masses)) / 2.0


@dataclass(frozen=True)
class GeodesicCC:
    """A solved geodesic ordinary central configuration.

    ``theta[i]`` is the angle of particle i; theta[list(ordering)] is
    strictly increasing.  ``residual`` is the scaled CC residual.
    """

    theta: np.ndarray
    multiplier: float
    residual: float
    ordering: tuple
    c_achieved: float
    kappa: Curvature = field(repr=False, default=HYPERBOLIC_DEFAULT := None)

    def sorted_theta(self) -> np.ndarray:
        return self.theta[list(self.ordering)]

    def ambient(self) -> np.ndarray:
        return geodesic_points(self.theta, self.kappa)

    def masses_view(self, masses) -> np.ndarray:
        return as_masses(masses)


def reversed_ordering(ordering: tuple) -> tuple:
    return tuple(reversed(ordering))


# ---------------------------------------------------------------------------
# 1-d kernels: curved (sn/cs) and flat (the seed problem)
# ---------------------------------------------------------------------------

class _CurvedKernel:
    def __init__(self, kappa: Curvature):
        self.kappa = kappa

    def inertia(self, mm, s):
        return float(np.sum(mm * self.kappa.sn(s) ** 2))

    def grad_inertia(self, mm, s):
        return mm * self.kappa.sn(2.0 * s)

    def hess_inertia(self, mm, s):
        return np.diag(2.0 * mm * self.kappa.cs(2.0 * s))

    def _gaps(self, s):
        return s[:, None] - s[None, :]

    def grad_potential(self, mm, s):
        t = self._gaps(s)
        sn = self.kappa.sn(np.abs(t))
        np.fill_diagonal(sn, 1.0)
        mmij = mm[:, None] * mm[None, :]
        g = mmij * self.kappa.sn(-t) / sn ** 3
        np.fill_diagonal(g, 0.0)
        return np.sum(g, axis=1)

    def hess_potential(self, mm, s):
        t = np.abs(self._gaps(s))
        sn = self.kappa.sn(t)
        np.fill_diagonal(sn, 1.0)
        mmij = mm[:, None] * mm[None, :]
        off = -2.0 * mmij * self.kappa.cs(t) / sn ** 3
        np.fill_diagonal(off, 0.0)
        h = off.copy()
        np.fill_diagonal(h, -np.sum(off, axis=1))
        return h

    def potential(self, mm, s):
        t = np.abs(self._gaps(s))
        iu = np.triu_indices(s.size, k=1)
        mmij = (mm[:, None] * mm[None, :])[iu]
        return float(np.sum(mmij * self.kappa.cs(t[iu]) / self.kappa.sn(t[iu])))


class _FlatKernel:
    """Newtonian collinear kernel used only to build the Moulton seed."""

    def inertia(self, mm, s):
        return float(np.sum(mm * s ** 2))

    def grad_inertia(self, mm, s):
        return 2.0 * mm * s

    def hess_inertia(self, mm, s):
        return np.diag(2.0 * mm)

    def grad_potential(self, mm, s):
        t = s[:, None] - s[None, :]
        np.fill_diagonal(t, 1.0)
        mmij = mm[:, None] * mm[None, :]
        g = mmij * np.sign(t) / t ** 2
        np.fill_diagonal(g, 0.0)
        return np.sum(g, axis=1)

    def hess_potential(self, mm, s):
        t = np.abs(s[:, None] - s[None, :])
        np.fill_diagonal(t, 1.0)
        mmij = mm[:, None] * mm[None, :]
        off = -2.0 * mmij / t ** 3
        np.fill_diagonal(off, 0.0)
        h = off.copy()
        np.fill_diagonal(h, -np.sum(off, axis=1))
        return h

    def potential(self, mm, s):
        t = np.abs(s[:, None] - s[None, :])
        iu = np.triu_indices(s.size, k=1)
        mmij = (mm[:, None] * mm[None, :])[iu]
        return float(np.sum(mmij / t[iu]))


def _admissible(s, kappa, cap):
    if np.any(np.diff(s) < 2.0 * D_MIN):
        return False
    if cap is not None and np.max(np.abs(s)) >= cap:
        return False
    return True


def _newton_ordered(kernel, mm, c, s0, lam0, kappa=None, cap=None,
                    max_iter=MAX_ITER, tol=1e-13):
    """Line-searched Newton on F = (gU - lam gI, I - c), preserving order."""
    n = s0.size
    s = s0.copy()
    lam = lam0

    def residual(s, lam):
        gU = kernel.grad_potential(mm, s)
        gI = kernel.grad_inertia(mm, s)
        return np.concatenate([gU - lam * gI, [kernel.inertia(mm, s) - c]]), gU, gI

    F, gU, gI = residual(s, lam)
    scale = max(1.0, float(np.linalg.norm(gU)))
    merit = float(F @ F)

    for _ in range(max_iter):
        if np.sqrt(merit) < tol * scale:
            return s, lam, True
        J = np.zeros((n + 1, n + 1))
        J[:n, :n] = kernel.hess_potential(mm, s) - lam * kernel.hess_inertia(mm, s)
        J[:n, n] = -gI
        J[n, :n] = gI
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return s, lam, False
        alpha = 1.0
        improved = False
        while alpha > 1e-12:
            s_new = s + alpha * step[:n]
            lam_new = lam + alpha * step[n]
            if _admissible(s_new, kappa, cap):
                F_new, gU_new, gI_new = residual(s_new, lam_new)
                m_new = float(F_new @ F_new)
                if m_new < merit * (1.0 - 1e-4 * alpha) or m_new < (tol * scale) ** 2:
                    s, lam, F, gU, gI, merit = s_new, lam_new, F_new, gU_new, gI_new, m_new
                    scale = max(1.0, float(np.linalg.norm(gU)))
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            return s, lam, False
    return s, lam, np.sqrt(merit) < tol * scale


def _equal_spacing_seed(mm, c, kernel, cap):
    n = mm.size
    s = np.arange(n, dtype=float) - (n - 1) / 2.0
    s -= np.sum(mm * s) / np.sum(mm)
    if isinstance(kernel, _FlatKernel):
        return s * math.sqrt(c / float(np.sum(mm * s ** 2)))
    return _rescale_to_level(s, mm, c, kernel, cap)


def _rescale_to_level(s, mm, c, kernel, cap):
    """Scale s -> t*s so that I(t*s) = c (monotone in t on the admissible range)."""
    smax = float(np.max(np.abs(s)))
    t_hi = 1.0
    if cap is not None:
        t_cap = (cap - CHART_MARGIN) / smax
        f = lambda t: kernel.inertia(mm, t * s) - c
        if f(t_cap) <= 0:
            return s * t_cap * 0.999
        t_hi = t_cap
    else:
        f = lambda t: kernel.inertia(mm, t * s) - c
        while f(t_hi) < 0:
            t_hi *= 2.0
    t = brentq(f, 1e-12, t_hi)
    return s * t


def _moulton_seed(mm, c, kappa: Curvature, cap):
    """Flat-space collinear configuration of the same masses, curved-rescaled."""
    flat = _FlatKernel()
    s0 = _equal_spacing_seed(mm, c, flat, None)
    gI = flat.grad_inertia(mm, s0)
    lam0 = float(flat.grad_potential(mm, s0) @ gI / (gI @ gI))
    s, lam, ok = _newton_ordered(flat, mm, c, s0, lam0)
    if not ok:
        s = s0
    return _rescale_to_level(s, mm, c, _CurvedKernel(kappa), cap)


def _barrier_fallback(kernel, mm, c, s0, cap):
    """Minimize U with a log-barrier on the ordering gaps, on {I = c}."""
    s = s0.copy()
    bounds = None
    if cap is not None:
        bounds = [(-cap + CHART_MARGIN, cap - CHART_MARGIN)] * s.size
    for mu in (1e-2, 1e-4, 1e-6):
        def objective(x):
            gaps = np.diff(x)
            if np.any(gaps <= 0):
                return 1e12
            return kernel.potential(mm, x) - mu * float(np.sum(np.log(gaps)))
        res = minimize(
            objective, s, method="SLSQP", bounds=bounds,
            constraints=[{"type": "eq",
                          "fun": lambda x: kernel.inertia(mm, x) - c}],
            options={"maxiter": 300, "ftol": 1e-14})
        if np.all(np.diff(res.x) > 0):
            s = res.x
    return s


def solve_ordering(problem: OrderingProblem, *, max_iter: int = MAX_ITER) -> GeodesicCC:
    """Solve one ordering.  Raises NoSolutionError when the iterates are
    pushed against the spherical chart cap (empirical no-solution regime),
    ConvergenceError on a stall elsewhere."""
    m = problem.masses
    kappa = problem.kappa
    order = list(problem.ordering)
    mm = m[order]
    cap = (np.pi / 2 - CHART_MARGIN) if kappa.spherical else None
    kernel = _CurvedKernel(kappa)

    s0 = _moulton_seed(mm, problem.c, kappa, cap)
    gI = kernel.grad_inertia(mm, s0)
    lam0 = float(kernel.grad_potential(mm, s0) @ gI / (gI @ gI))

    s, lam, ok = _newton_ordered(kernel, mm, problem.c, s0, lam0,
                                 kappa=kappa, cap=cap, max_iter=max_iter)
    if not ok:
        s_b = _barrier_fallback(kernel, mm, problem.c, s, cap)
        gI = kernel.grad_inertia(mm, s_b)
        lam_b = float(kernel.grad_potential(mm, s_b) @ gI / (gI @ gI))
        s, lam, ok = _newton_ordered(kernel, mm, problem.c, s_b, lam_b,
                                     kappa=kappa, cap=cap, max_iter=max_iter)
    if not ok:
        if cap is not None and np.max(np.abs(s)) > np.pi / 2 - 1e-3:
            raise NoSolutionError(
                "iterates exit the spherical chart cap: no ordered geodesic "
                "solution found at c = %g" % problem.c)
        raise ConvergenceError(
            "geodesic Newton failed for ordering %s" % (problem.ordering,))

    theta = np.empty(m.size)
    theta[order] = s
    res = potentials.multiplier_and_residual(theta, np.zeros_like(theta), m, kappa)
    c_got = float(potentials.inertia(theta, np.zeros_like(theta), m, kappa))

    if res.residual_scaled > EPS_CC:
        raise ConvergenceError("residual %.3e above acceptance" % res.residual_scaled)
    if abs(c_got - problem.c) / max(1.0, problem.c) > EPS_CONSTRAINT:
        raise ConvergenceError("constraint violation |I - c| = %.3e" % abs(c_got - problem.c))
    if np.any(np.diff(s) <= 0):
        raise ConvergenceError("ordering lost during solve")

    # positive definiteness of the ordered-component Hessian at the solution
    H = kernel.hess_potential(mm, s) - res.multiplier * kernel.hess_inertia(mm, s)
    gI = kernel.grad_inertia(mm, s)
    basis = _orthocomplement(gI)
    eigs = np.linalg.eigvalsh(basis.T @ H @ basis)
    if eigs.size and eigs.min() <= 0:
        raise ConvergenceError("converged to a non-minimum of the ordered component")

    return GeodesicCC(theta=theta, multiplier=res.multiplier,
                      residual=res.residual_scaled, ordering=problem.ordering,
                      c_achieved=c_got, kappa=kappa)


def _orthocomplement(v):
    """Orthonormal basis of the complement of span{v} (columns)."""
    v = np.asarray(v, dtype=float)
    n = v.size
    q, _ = np.linalg.qr(np.concatenate([v[:, None], np.eye(n)], axis=1))
    return q[:, 1:n]


def solve_all_orderings(masses, c, kappa: Curvature) -> dict:
    """Solve every one of the n! orderings; returns {ordering: GeodesicCC}."""
    m = as_masses(masses)
    out = {}
    for ordering in mass_orderings(m.size):
        out[ordering] = solve_ordering(OrderingProblem(m, c, kappa, ordering))
    return out


def enumerate_geodesic_ccs(masses, c, kappa: Curvature) -> list[GeodesicCC]:
    """All geodesic ordinary central configuration classes: n!/2 of them.

    Every ordering is solved; an ordering and its reversal give the same
    class (the half-turn of the rotation maps theta -> -theta), so one
    representative (the lexicographically smaller ordering) is kept per
    pair.  Reversal consistency is checked on the way.
    """
    m = as_masses(masses)
    solutions = solve_all_orderings(m, c, kappa)
    classes = []
    for ordering, cc in sorted(solutions.items()):
        rev = reversed_ordering(ordering)
        if ordering > rev:
            continue
        partner = solutions[rev]
        mismatch = float(np.max(np.abs(partner.theta + cc.theta)))
        if mismatch > 1e-7:
            raise ConvergenceError(
                "reversal pairing failed for %s (mismatch %.2e)" % (ordering, mismatch))
        classes.append(cc)
    return classes


@dataclass(frozen=True)
class RegimeDiagnostic:
    """Outcome of the spherical-arc regime probe at one value of c."""

    c: float
    bound: float | None            # pi/4, pi/6, or None outside the regimes
    solutions: dict
    failures: dict                 # ordering -> error message
    violations: list               # (ordering, max |theta|) beyond the bound
    all_within_bound: bool
    no_solution: bool


def spherical_regime_check(masses, c) -> RegimeDiagnostic:
    """Probe the spherical existence regimes.

    For c < m_min/2 all solutions must satisfy |theta| < pi/4, for
    c < m_min/4 even |theta| < pi/6; above the guaranteed regime the
    probe records which orderings fail to solve instead of asserting.
    """
    m = as_masses(masses)
    m_min = float(np.min(m))
    if c < m_min / 4.0:
        bound = np.pi / 6
    elif c < m_min / 2.0:
        bound = np.pi / 4
    else:
        bound = None

    solutions, failures = {}, {}
    for ordering in mass_orderings(m.size):
        try:
            solutions[ordering] = solve_ordering(
                OrderingProblem(m, c, SPHERICAL_SINGLETON, ordering))
        except (NoSolutionError, ConvergenceError) as exc:
            failures[ordering] = str(exc)

    violations = []
    if bound is not None:
        for ordering, cc in solutions.items():
            tmax = float(np.max(np.abs(cc.theta)))
            if tmax >= bound:
                violations.append((ordering, tmax))
    return RegimeDiagnostic(
        c=c, bound=bound, solutions=solutions, failures=failures,
        violations=violations,
        all_within_bound=(bound is None or not violations),
        no_solution=(not solutions),
    )


# resolved late to avoid a circular import at module load
from .geometry import SPHERICAL as SPHERICAL_SINGLETON  # noqa: E402
