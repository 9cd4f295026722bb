"""Stretched-string tyre contact law.

A contact line of half-length ``a`` deforms laterally against a linear
pressure distribution p(x) = k*q(x). Rolling at slip angle ``phi`` gives
the steady deformation q(x) = (a + sigma - x) * tan(phi), capped where the
pressure would exceed the static bound ``delta``; the capped part slides
at the dynamic pressure ``rho * delta``. Integrating pressure over the
patch yields the lateral force F and the aligning moment M in three
regimes: full adhesion, partial slip, and complete slip.

The scaled law used by the dynamics replaces the adhesion regime by a
discontinuity: the slip angle is remapped onto [arccot(6*kappa), pi/2]
and the specialized patch (sigma = 0, rho = 2/3, a = 3*kappa,
k = delta = 1/(3*kappa)) turns the integrals into the closed forms

    F = sign(h) * mu * (4/3 - cot(psi) / (18*kappa))
    M = sign(g) * sign(h) * (mu / 6) * cot(psi)

with psi built from the contact-velocity ratio |h/g|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import SystemParams

__all__ = [
    "TyreParams",
    "TyreOutput",
    "NO_SLIP",
    "PARTIAL_SLIP",
    "COMPLETE_SLIP",
    "deformation_profile",
    "slip_boundary",
    "force_moment_raw",
    "force_moment_scaled",
    "slip_angle_rescale",
    "specialized_params",
]

NO_SLIP = "no-slip"
PARTIAL_SLIP = "partial-slip"
COMPLETE_SLIP = "complete-slip"


@dataclass(frozen=True)
class TyreParams:
    """Stretched-string patch constants.

    k: lateral stiffness, a: patch half-length, sigma: relaxation length,
    delta: maximal static lateral pressure, rho: dynamic/static ratio.
    """

    k: float
    a: float
    sigma: float
    delta: float
    rho: float

    def __post_init__(self):
        if not (self.k > 0 and self.a > 0 and self.delta > 0):
            raise ValueError("k, a, delta must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if not (0.0 < self.rho <= 1.0):
            raise ValueError("rho must lie in (0, 1]")


@dataclass(frozen=True)
class TyreOutput:
    force: float
    moment: float
    regime: str


def deformation_profile(x: float, phi: float, tp: TyreParams) -> float:
    """Steady rolling deformation at patch coordinate x, capped at delta/k."""
    if not 0.0 <= phi < math.pi / 2:
        raise ValueError("phi must lie in [0, pi/2)")
    q = (tp.a + tp.sigma - x) * math.tan(phi)
    cap = tp.delta / tp.k
    return math.copysign(min(abs(q), cap), q)


def slip_boundary(phi: float, tp: TyreParams) -> float:
    """Patch coordinate where the deformation saturates.

    Solves k*q(x_s) = delta: x_s = a + sigma - (delta/k)*cot(phi). May lie
    outside [-a, a]; the caller branches on that to pick the regime.
    """
    if not 0.0 < phi < math.pi / 2:
        raise ValueError("phi must lie strictly inside (0, pi/2)")
    return tp.a + tp.sigma - (tp.delta / tp.k) / math.tan(phi)


def force_moment_raw(phi: float, tp: TyreParams) -> TyreOutput:
    """Patch-integrated force and moment at slip angle phi in [0, pi/2].

    Magnitudes are positive for phi > 0; the caller applies the sign of
    the lateral contact velocity. The three regime formulas agree at both
    regime boundaries by construction (they integrate one continuous
    pressure distribution).
    """
    if not 0.0 <= phi <= math.pi / 2:
        raise ValueError("phi must lie in [0, pi/2]")
    a, s, k, delta, rho = tp.a, tp.sigma, tp.k, tp.delta, tp.rho
    if phi == 0.0:
        return TyreOutput(0.0, 0.0, NO_SLIP)
    if phi >= math.pi / 2:
        return TyreOutput(2.0 * a * rho * delta, 0.0, COMPLETE_SLIP)
    t = math.tan(phi)
    xs = slip_boundary(phi, tp)
    if xs <= -a:
        F = 2.0 * a * k * (a + s) * t
        M = (2.0 / 3.0) * a**3 * k * t
        return TyreOutput(F, M, NO_SLIP)
    if xs >= a:
        return TyreOutput(2.0 * a * rho * delta, 0.0, COMPLETE_SLIP)
    # partial slip: sliding pressure rho*delta on [-a, xs], adhesion on [xs, a]
    F = rho * delta * (xs + a) + k * t * ((a + s) * (a - xs) - 0.5 * (a * a - xs * xs))
    M = -0.5 * rho * delta * (xs * xs - a * a) - k * t * (
        0.5 * (a + s) * (a * a - xs * xs) - (a**3 - xs**3) / 3.0
    )
    return TyreOutput(F, M, PARTIAL_SLIP)


def slip_angle_rescale(phi: float, kappa: float) -> float:
    """Map phi in [0, pi/2] onto [arccot(6*kappa), pi/2].

    Squeezing the adhesion regime to a point turns the steep initial rise
    of the raw law into a jump at zero slip.
    """
    acot = math.atan2(1.0, 6.0 * kappa)
    return acot + abs(1.0 - 2.0 / math.pi * acot) * phi


def specialized_params(kappa: float) -> TyreParams:
    """Patch constants reducing the raw law to the closed scaled form.

    No relaxation, dynamic/static ratio 2/3, and stiffness equal to the
    static pressure bound, with a and delta normalized so force and moment
    reach (1, kappa) at the adhesion boundary.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return TyreParams(k=1.0 / (3.0 * kappa), a=3.0 * kappa, sigma=0.0,
                      delta=1.0 / (3.0 * kappa), rho=2.0 / 3.0)


def force_moment_scaled(h: float, g: float, p: SystemParams, side: int | None = None) -> tuple[float, float]:
    """Discontinuous contact law in the two relative velocities.

    Parameters
    ----------
    h, g : float
        Lateral and rolling contact velocities.
    p : SystemParams
        Supplies mu and kappa.
    side : int, optional
        Fixed sign of h for one-sided evaluation on the surface itself
        (used by the slip integrator). Defaults to sign(h).

    Returns
    -------
    (F, M) : tuple of float
    """
    if side is None:
        if h == 0.0 and g == 0.0:
            raise ValueError("contact law undefined at h = g = 0; use the stick mode")
        s_h = math.copysign(1.0, h) if h != 0.0 else 0.0
    else:
        s_h = float(side)
        if g == 0.0 and h == 0.0 and s_h == 0.0:
            raise ValueError("contact law undefined at h = g = 0")
    psi = slip_angle_rescale(math.atan2(abs(h), abs(g)), p.kappa)
    cot_psi = math.cos(psi) / math.sin(psi)
    F = s_h * p.mu * (4.0 / 3.0 - cot_psi / (18.0 * p.kappa))
    s_g = math.copysign(1.0, g) if g != 0.0 else 0.0
    M = s_g * s_h * (p.mu / 6.0) * cot_psi
    return F, M
