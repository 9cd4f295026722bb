"""Physical parameters, state, and the reduced equations of motion.

The device is a slider-mounted wheel inside a top disc that rides on a
bottom disc spinning at constant rate. After eliminating the cyclic
rotation angle the state is (r, v, omega): slider displacement, slider
speed, and top-disc angular speed. Time is rescaled so that the factor
m*(beta^2 + r^2) multiplies the right-hand side instead of dividing it;
:func:`to_physical_time` converts back.

The contact force enters linearly: during slip the tyre law supplies the
lateral force F and aligning moment M as functions of the two relative
contact velocities; during stick both are tied to a single static force
``lam`` via F = lam, M = kappa * lam.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Iterable

import numpy as np

__all__ = [
    "SystemParams",
    "State",
    "ContactMode",
    "SLIP_POS",
    "SLIP_NEG",
    "STICK",
    "lateral_velocity",
    "rolling_velocity",
    "lateral_velocity_gradient",
    "rolling_velocity_gradient",
    "slider_force",
    "friction_lever",
    "forced_field",
    "vector_field",
    "friction_decomposition",
    "slip_field",
    "normal_rate",
    "normal_rate_gradient",
    "to_physical_time",
]

SLIP_POS = "slip+"
SLIP_NEG = "slip-"
STICK = "stick"

_PARAM_KEYS = ("d", "m", "beta", "c1", "c2", "k2", "r0", "omega0", "mu", "gamma", "kappa")


@dataclass(frozen=True)
class SystemParams:
    """All physical constants of the device.

    Parameters
    ----------
    d : float
        Offset of the slider axis from the disc axis.
    m : float
        Slider mass.
    beta : float
        Radius of gyration of the top disc (inertia = beta**2 * m).
    c1 : float
        Viscous coupling between the two discs.
    c2 : float
        Slider damping.
    k2 : float
        Slider spring stiffness.
    r0 : float
        Spring equilibrium offset.
    omega0 : float
        Constant angular speed of the bottom disc.
    mu : float
        Kinetic friction force magnitude.
    gamma : float
        Wheel mounting angle, in (-pi, pi].
    kappa : float
        Friction-moment arm tying moment to force during stick.
    """

    d: float
    m: float
    beta: float
    c1: float
    c2: float
    k2: float
    r0: float
    omega0: float
    mu: float
    gamma: float
    kappa: float

    def __post_init__(self):
        if not (self.m > 0 and self.beta > 0 and self.mu > 0):
            raise ValueError("m, beta and mu must be strictly positive")
        if not (-math.pi < self.gamma <= math.pi):
            raise ValueError("gamma must lie in (-pi, pi]")
        for k in _PARAM_KEYS:
            if not math.isfinite(getattr(self, k)):
                raise ValueError(f"parameter {k} is not finite")

    def replace(self, **kw) -> "SystemParams":
        data = asdict(self)
        data.update(kw)
        return SystemParams(**data)

    def to_json(self) -> str:
        return json.dumps({k: getattr(self, k) for k in _PARAM_KEYS}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SystemParams":
        data = json.loads(text)
        missing = [k for k in _PARAM_KEYS if k not in data]
        if missing:
            raise ValueError(f"missing parameter keys: {missing}")
        extra = [k for k in data if k not in _PARAM_KEYS]
        if extra:
            raise ValueError(f"unknown parameter keys: {extra}")
        return cls(**{k: float(data[k]) for k in _PARAM_KEYS})


@dataclass(frozen=True)
class State:
    """Reduced phase point (r, v, omega), with an optional time stamp."""

    r: float
    v: float
    omega: float
    t: float | None = None

    def __post_init__(self):
        if not all(map(math.isfinite, (self.r, self.v, self.omega))):
            raise ValueError("state components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.v, self.omega])

    @classmethod
    def from_array(cls, x, t: float | None = None) -> "State":
        r, v, omega = (float(c) for c in x)
        return cls(r, v, omega, t)


@dataclass(frozen=True)
class ContactMode:
    """Contact regime tag: slip on either side of the surface, or stick.

    In stick the static friction force ``lam`` is carried along; the
    moment is kappa * lam.
    """

    tag: str
    lam: float | None = None

    def __post_init__(self):
        if self.tag not in (SLIP_POS, SLIP_NEG, STICK):
            raise ValueError(f"unknown contact mode tag {self.tag!r}")
        if self.tag == STICK and self.lam is None:
            raise ValueError("stick mode requires a friction force value")
        if self.tag != STICK and self.lam is not None:
            raise ValueError("slip modes carry no static friction force")

    @classmethod
    def slip_positive(cls) -> "ContactMode":
        return cls(SLIP_POS)

    @classmethod
    def slip_negative(cls) -> "ContactMode":
        return cls(SLIP_NEG)

    @classmethod
    def stick(cls, lam: float) -> "ContactMode":
        return cls(STICK, float(lam))

    @property
    def sign(self) -> int:
        """+1 / -1 for the slip modes, 0 for stick."""
        return {SLIP_POS: 1, SLIP_NEG: -1, STICK: 0}[self.tag]


def _as_array(s) -> np.ndarray:
    if isinstance(s, State):
        return s.as_array()
    x = np.asarray(s, dtype=float)
    if x.shape != (3,):
        raise ValueError("state must have exactly three components (r, v, omega)")
    return x


def lateral_velocity(s, p: SystemParams) -> float:
    """Contact velocity across the wheel plane; the friction law switches sign here."""
    r, v, w = _as_array(s)
    dw = w - p.omega0
    return -(v - p.d * dw) * math.sin(p.gamma) - r * dw * math.cos(p.gamma)


def rolling_velocity(s, p: SystemParams) -> float:
    """Contact velocity along the rolling direction of the wheel."""
    r, v, w = _as_array(s)
    dw = w - p.omega0
    return -(v - p.d * dw) * math.cos(p.gamma) + r * dw * math.sin(p.gamma)


def lateral_velocity_gradient(s, p: SystemParams) -> np.ndarray:
    """Gradient of the switching function with respect to (r, v, omega)."""
    r, _, w = _as_array(s)
    return np.array(
        [
            -(w - p.omega0) * math.cos(p.gamma),
            -math.sin(p.gamma),
            p.d * math.sin(p.gamma) - r * math.cos(p.gamma),
        ]
    )


def rolling_velocity_gradient(s, p: SystemParams) -> np.ndarray:
    r, _, w = _as_array(s)
    return np.array(
        [
            (w - p.omega0) * math.sin(p.gamma),
            -math.cos(p.gamma),
            p.d * math.cos(p.gamma) + r * math.sin(p.gamma),
        ]
    )


def slider_force(s, p: SystemParams) -> float:
    """Net spring + damper + centrifugal force acting on the slider."""
    r, v, w = _as_array(s)
    return p.k2 * (p.r0 - r) - p.c2 * v + p.m * r * w * w


def friction_lever(r: float, p: SystemParams) -> float:
    """Geometric lever arm multiplying the friction force in the v-equation."""
    return p.d * r * math.cos(p.gamma) + (p.beta**2 + r * r) * math.sin(p.gamma)


def forced_field(s, F: float, M: float, p: SystemParams) -> np.ndarray:
    """Right-hand side of the reduced equations for given contact force and moment.

    Rescaled time convention: the positive factor m*(beta^2 + r^2) sits in
    the numerator of the r-equation rather than dividing the others.
    """
    r, v, w = _as_array(s)
    p1 = slider_force((r, v, w), p)
    cg = math.cos(p.gamma)
    coupling = p.c1 + 2.0 * p.m * r * v
    return np.array(
        [
            p.m * (p.beta**2 + r * r) * v,
            (p.beta**2 + p.d**2 + r * r) * p1 - p.d * coupling * w + F * friction_lever(r, p) + p.d * M,
            p.d * p1 - coupling * w + F * r * cg + M,
        ]
    )


def friction_decomposition(s, p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Split the stick-mode field into a friction-free part and the force direction.

    Returns ``(f0, f_dir)`` such that the field with static friction force
    ``lam`` equals ``f0 + lam * f_dir`` exactly. ``f_dir`` is constant in
    ``lam`` with components (0, lever + d*kappa, r*cos(gamma) + kappa).
    """
    x = _as_array(s)
    f0 = forced_field(x, 0.0, 0.0, p)
    f_dir = np.array(
        [
            0.0,
            friction_lever(x[0], p) + p.d * p.kappa,
            x[0] * math.cos(p.gamma) + p.kappa,
        ]
    )
    return f0, f_dir


def vector_field(s, mode: ContactMode, p: SystemParams) -> np.ndarray:
    """Evaluate the reduced field in the given contact mode.

    Slip modes use the tyre force/moment law with the mode's fixed sign of
    the lateral velocity (one-sided evaluation is valid on the surface
    itself). Stick uses F = lam, M = kappa * lam.
    """
    if mode.tag == STICK:
        if abs(mode.lam) > p.mu * (1.0 + 1e-12):
            raise ValueError(f"static friction force {mode.lam} exceeds the bound mu={p.mu}")
        f0, f_dir = friction_decomposition(s, p)
        return f0 + mode.lam * f_dir
    return slip_field(s, mode.sign, p)


def slip_field(s, side: int, p: SystemParams) -> np.ndarray:
    """Reduced field during slip on the given side of the switching surface."""
    from .tyre import force_moment_scaled

    x = _as_array(s)
    h = lateral_velocity(x, p)
    g = rolling_velocity(x, p)
    F, M = force_moment_scaled(h, g, p, side=side)
    return forced_field(x, F, M, p)


def normal_rate(s, lam: float, p: SystemParams) -> float:
    """Surface-normal velocity h_x . f(x, lam) of the stick-mode field."""
    x = _as_array(s)
    f0, f_dir = friction_decomposition(x, p)
    hx = lateral_velocity_gradient(x, p)
    return float(hx @ (f0 + lam * f_dir))


def normal_rate_gradient(s, lam: float, p: SystemParams) -> np.ndarray:
    """Spatial gradient of the surface-normal velocity, in closed form.

    With A(x) = h_x . f(x, 0) and B(r) = h_x . f_dir, the normal rate is
    A + lam * B where

        A = -p1 * lever - m*(beta^2 + r^2) * v * (w - w0) * cos(g)
            + r * w * (c1 + 2 m r v) * cos(g)
        B = -(r^2 + beta^2 sin(g)^2 + kappa * r * cos(g))
    """
    r, v, w = _as_array(s)
    sg, cg = math.sin(p.gamma), math.cos(p.gamma)
    w0 = p.omega0
    p1 = slider_force((r, v, w), p)
    lever = friction_lever(r, p)
    dp1_dr = -p.k2 + p.m * w * w
    dp1_dv = -p.c2
    dp1_dw = 2.0 * p.m * r * w
    dlever_dr = p.d * cg + 2.0 * r * sg
    coupling = p.c1 + 2.0 * p.m * r * v

    dA_dr = (
        -dp1_dr * lever
        - p1 * dlever_dr
        - 2.0 * p.m * r * v * (w - w0) * cg
        + w * coupling * cg
        + 2.0 * p.m * r * v * w * cg
    )
    dA_dv = (
        -dp1_dv * lever
        - p.m * (p.beta**2 + r * r) * (w - w0) * cg
        + 2.0 * p.m * r * r * w * cg
    )
    dA_dw = (
        -dp1_dw * lever
        - p.m * (p.beta**2 + r * r) * v * cg
        + r * coupling * cg
    )
    dB_dr = -(2.0 * r + p.kappa * cg)
    return np.array([dA_dr + lam * dB_dr, dA_dv, dA_dw])


def to_physical_time(times: Iterable[float], r_values: Iterable[float], p: SystemParams) -> np.ndarray:
    """Convert rescaled sample times to physical time.

    The rescale satisfies dt_physical = m*(beta^2 + r^2) dt_rescaled, so
    physical time is the cumulative integral of that factor along the
    trajectory (trapezoid rule on the samples).
    """
    t = np.asarray(list(times), dtype=float)
    r = np.asarray(list(r_values), dtype=float)
    if t.shape != r.shape:
        raise ValueError("times and r_values must have matching shapes")
    factor = p.m * (p.beta**2 + r * r)
    out = np.zeros_like(t)
    if len(t) > 1:
        dt = np.diff(t)
        out[1:] = np.cumsum(0.5 * (factor[1:] + factor[:-1]) * dt)
    return out
