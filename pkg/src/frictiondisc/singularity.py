"""Two-fold singularity tooling: placement, search, and classification.

A two-fold point is a surface state where both one-sided stick-field
limits are tangent to the switching surface: the normal velocities of the
friction-free field and of the force direction vanish together. Around
such a point the sliding flow reduces to a planar normal form with a
2x2 matrix built from four curvature constants; the two invariants
j1, j2 and the determinant sign sort the local dynamics into the three
classical cases.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import (
    State,
    SystemParams,
    friction_decomposition,
    friction_lever,
    lateral_velocity,
    lateral_velocity_gradient,
    normal_rate,
    normal_rate_gradient,
)

__all__ = [
    "SearchGrid",
    "SingularityReport",
    "DesignResult",
    "CASE1",
    "CASE2",
    "CASE3",
    "NOT_TEIXEIRA",
    "DEGENERATE",
    "design_singularity",
    "find_singularities",
    "tangency_curvatures",
    "eigensystem",
    "normal_form",
    "normal_form_flow",
]

CASE1 = "case1"
CASE2 = "case2"
CASE3 = "case3"
NOT_TEIXEIRA = "not-teixeira"
DEGENERATE = "degenerate"

_DESIGN_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class SearchGrid:
    """Seed window for the two-fold search.

    The surface is parameterized by (r, omega) with v eliminated through
    h = 0; when sin(gamma) = 0 that elimination degenerates and the
    search runs over (r, v) on the branch omega = omega0 instead, using
    ``v_range``.
    """

    r_range: tuple[float, float] = (-1.0, 1.0)
    omega_range: tuple[float, float] = (-3.0, 1.0)
    v_range: tuple[float, float] = (-2.0, 2.0)
    n: int = 12


@dataclass(frozen=True)
class DesignResult:
    """Output of the singularity designer: completed parameters and residuals."""

    v_star: float
    kappa: float
    k2: float
    params: SystemParams
    x_star: State
    residuals: dict


@dataclass(frozen=True)
class SingularityReport:
    """Local data of a two-fold point.

    kpp/kpm/kmp/kmm are the four tangency curvatures (upper/lower flow
    derivative paired with upper/lower flow); j1, j2 the normal-form
    invariants; eig/evec the eigensystem of the normal-form matrix.
    """

    x_star: State
    kpp: float
    kpm: float
    kmp: float
    kmm: float
    j1: float | None
    j2: float | None
    eig1: float | None
    eig2: float | None
    evec1: tuple[float, float] | None
    evec2: tuple[float, float] | None
    case_tag: str


def design_singularity(r_star: float, omega_star: float, base: SystemParams) -> DesignResult:
    """Place a two-fold point at (r*, omega*) by choosing v*, kappa, and k2.

    ``base`` supplies every constant except kappa and k2, whose incoming
    values are ignored. The closed forms solve h = 0 together with the
    two tangency conditions; the result is verified by evaluating both
    one-sided normal velocities at the constructed point.
    """
    p = base
    sg, cg = math.sin(p.gamma), math.cos(p.gamma)
    if abs(cg) < 1e-14:
        raise ValueError("designer requires cos(gamma) != 0")
    if abs(sg) < 1e-14:
        raise ValueError("designer requires sin(gamma) != 0 (v elimination)")
    if r_star == 0.0:
        raise ValueError("designer requires r* != 0 (kappa denominator)")
    if abs(r_star - p.r0) < 1e-14:
        raise ValueError("designer requires r* != r0 (k2 denominator)")

    cot_g = cg / sg
    v_star = (omega_star - p.omega0) * (p.d - r_star * cot_g)
    kappa = -(2.0 * r_star**2 + p.beta**2 * (1.0 - math.cos(2.0 * p.gamma))) / (2.0 * r_star * cg)
    lever = friction_lever(r_star, p)
    if abs(lever) < 1e-14:
        raise ValueError("designer requires the friction lever p2(r*) != 0 (k2 denominator)")
    num = sg * (p.beta**2 + r_star**2) * (p.m * r_star * omega_star**2 - p.c2 * v_star) - cg * (
        p.c1 * r_star * omega_star
        + p.c2 * p.d * r_star * v_star
        + p.m
        * (
            r_star**2 * (v_star * (omega_star + p.omega0) - p.d * omega_star**2)
            + p.beta**2 * v_star * (p.omega0 - omega_star)
        )
    )
    k2 = num / ((r_star - p.r0) * lever)

    full = p.replace(kappa=kappa, k2=k2)
    x_star = State(r_star, v_star, omega_star)
    res = {
        "h": lateral_velocity(x_star, full),
        "normal_rate_plus": normal_rate(x_star, +full.mu, full),
        "normal_rate_minus": normal_rate(x_star, -full.mu, full),
    }
    worst = max(abs(v) for v in res.values())
    if worst > _DESIGN_RESIDUAL_TOL:
        raise ArithmeticError(
            f"designed point failed verification: max residual {worst:.3e} > {_DESIGN_RESIDUAL_TOL}"
        )
    return DesignResult(v_star, kappa, k2, full, x_star, res)


def _two_fold_residual(u: np.ndarray, p: SystemParams, on_branch: bool) -> np.ndarray:
    """Residual pair (h_x.f0, h_x.f_dir) on the surface parameterization."""
    x = _surface_point(u, p, on_branch)
    hx = lateral_velocity_gradient(x, p)
    f0, fdir = friction_decomposition(x, p)
    return np.array([hx @ f0, hx @ fdir])


def _surface_point(u: np.ndarray, p: SystemParams, on_branch: bool) -> np.ndarray:
    if on_branch:
        r, v = u
        return np.array([r, v, p.omega0])
    r, w = u
    cot_g = math.cos(p.gamma) / math.sin(p.gamma)
    v = (w - p.omega0) * (p.d - r * cot_g)
    return np.array([r, v, w])


def _newton2(u0: np.ndarray, p: SystemParams, on_branch: bool,
             tol: float = 1e-12, max_iter: int = 60) -> np.ndarray | None:
    """Damped Newton with backtracking on the two-fold residual pair."""
    u = np.array(u0, dtype=float)
    res = _two_fold_residual(u, p, on_branch)
    norm = float(np.max(np.abs(res)))
    for _ in range(max_iter):
        if norm <= tol:
            return u
        jac = np.zeros((2, 2))
        for j in range(2):
            step = 1e-7 * (1.0 + abs(u[j]))
            up, um = u.copy(), u.copy()
            up[j] += step
            um[j] -= step
            jac[:, j] = (_two_fold_residual(up, p, on_branch)
                         - _two_fold_residual(um, p, on_branch)) / (2.0 * step)
        try:
            du = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(du)):
            return None
        alpha = 1.0
        for _ in range(30):
            u_try = u + alpha * du
            res_try = _two_fold_residual(u_try, p, on_branch)
            norm_try = float(np.max(np.abs(res_try)))
            if norm_try < norm:
                u, res, norm = u_try, res_try, norm_try
                break
            alpha *= 0.5
        else:
            return None
    return u if norm <= tol else None


def find_singularities(p: SystemParams, grid: SearchGrid | None = None) -> list[State]:
    """All distinct two-fold points found from grid-seeded Newton runs.

    Non-convergent seeds are dropped; roots with a vanishing surface
    gradient (the degenerate crease of the surface when sin(gamma) = 0)
    are filtered out. More than four survivors would contradict the
    quadratic structure of the conditions and only raises a warning.
    """
    grid = grid or SearchGrid()
    on_branch = abs(math.sin(p.gamma)) < 1e-12
    if on_branch:
        ax1 = np.linspace(*grid.r_range, grid.n)
        ax2 = np.linspace(*grid.v_range, grid.n)
    else:
        ax1 = np.linspace(*grid.r_range, grid.n)
        ax2 = np.linspace(*grid.omega_range, grid.n)
    roots: list[np.ndarray] = []
    for s1 in ax1:
        for s2 in ax2:
            u = _newton2(np.array([s1, s2]), p, on_branch)
            if u is None:
                continue
            x = _surface_point(u, p, on_branch)
            if not np.all(np.isfinite(x)):
                continue
            if np.linalg.norm(lateral_velocity_gradient(x, p)) < 1e-8:
                continue
            if not (grid.r_range[0] - 1e-6 <= x[0] <= grid.r_range[1] + 1e-6):
                continue
            second = (x[1], grid.v_range) if on_branch else (x[2], grid.omega_range)
            if not (second[1][0] - 1e-6 <= second[0] <= second[1][1] + 1e-6):
                continue
            if any(np.linalg.norm(x - r) < 1e-8 for r in roots):
                continue
            roots.append(x)
    roots.sort(key=lambda x: (x[0], x[2], x[1]))
    if len(roots) > 4:
        warnings.warn(f"found {len(roots)} two-fold candidates; at most four expected")
    return [State.from_array(x) for x in roots]


def tangency_curvatures(x_star, p: SystemParams) -> tuple[float, float, float, float]:
    """The four curvature constants (kpp, kpm, kmp, kmm) at a two-fold point.

    Each is the spatial derivative of one one-sided normal velocity
    contracted with one one-sided flow, evaluated with the closed-form
    gradient. The first sign picks the differentiated flow, the second
    the contracted flow.
    """
    x = x_star.as_array() if isinstance(x_star, State) else np.asarray(x_star, dtype=float)
    f0, fdir = friction_decomposition(x, p)
    f_plus = f0 + p.mu * fdir
    f_minus = f0 - p.mu * fdir
    grad_plus = normal_rate_gradient(x, +p.mu, p)
    grad_minus = normal_rate_gradient(x, -p.mu, p)
    return (
        float(grad_plus @ f_plus),
        float(grad_plus @ f_minus),
        float(grad_minus @ f_plus),
        float(grad_minus @ f_minus),
    )


def eigensystem(j1: float, j2: float):
    """Eigenvalues and eigenvectors of the normal-form matrix [[j1, 1], [1, j2]].

    The discriminant (j1 - j2)^2 + 4 is positive, so the eigenvalues are
    always real; eigenvectors are reported as (eig - j2, 1).
    """
    disc = math.sqrt((j1 - j2) ** 2 + 4.0)
    eig1 = 0.5 * (j1 + j2 + disc)
    eig2 = 0.5 * (j1 + j2 - disc)
    return eig1, eig2, (eig1 - j2, 1.0), (eig2 - j2, 1.0)


def normal_form(x_star, p: SystemParams) -> SingularityReport:
    """Full local report at a candidate two-fold point.

    The Teixeira configuration requires kpp < 0 < kmm (both flows curving
    toward the surface); the case tag is decided by the signs of j1, j2
    and of the determinant j1*j2 - 1. A vanishing determinant is tagged
    degenerate rather than forced into a case.
    """
    xs = x_star if isinstance(x_star, State) else State.from_array(np.asarray(x_star, dtype=float))
    kpp, kpm, kmp, kmm = tangency_curvatures(xs, p)
    prod = -kpp * kmm
    if prod <= 0.0:
        return SingularityReport(xs, kpp, kpm, kmp, kmm,
                                 None, None, None, None, None, None, NOT_TEIXEIRA)
    den = math.sqrt(prod)
    j1 = kmp / den
    j2 = -kpm / den
    eig1, eig2, v1, v2 = eigensystem(j1, j2)
    if not (kpp < 0.0 < kmm):
        tag = NOT_TEIXEIRA
    else:
        det = j1 * j2 - 1.0
        if det == 0.0:
            tag = DEGENERATE
        elif det < 0.0:
            tag = CASE3
        elif j1 < 0.0:
            tag = CASE1
        else:
            tag = CASE2
    return SingularityReport(xs, kpp, kpm, kmp, kmm, j1, j2, eig1, eig2, v1, v2, tag)


def normal_form_flow(xi: float, eta: float, j1: float, j2: float) -> tuple[float, float]:
    """Local sliding flow in normal-form coordinates, time-rescaled.

    The sliding quadrant maps to xi > 0, eta > 0; the flow is homogeneous
    of degree zero and undefined on the fold line xi + eta = 0.
    """
    s = xi + eta
    if s == 0.0:
        raise ValueError("normal-form flow undefined on the fold line xi + eta = 0")
    return ((j1 * xi + eta) / s, (xi + j2 * eta) / s)
