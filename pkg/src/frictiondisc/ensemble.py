"""Seeded re-injection ensembles around a funneling two-fold point.

A trajectory reaching the two-fold point has a continuum of admissible
futures, all of which pass through the adjacent repulsive surface patch.
The ensemble samples that patch uniformly inside a small ball around the
point, nudges each sample just off the surface so slip integration can
start, and follows every member until it either returns (re-enters a
small ball around the point, or hits the two-fold itself) or is lost
(time limit, blowup, stall).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ContactMode, State, SystemParams, lateral_velocity
from .singularity import CASE1, normal_form
from .solver import (
    CROSSING,
    ESCAPING,
    Event,
    IntegratorOptions,
    SINGULARITY_HIT,
    SURFACE_HIT,
    TrajectorySegment,
    classify,
    integrate,
)

__all__ = ["EnsembleConfig", "EnsembleOutcome", "inject", "run_ensemble"]

_REJECTION_LIMIT = 10_000


@dataclass(frozen=True)
class EnsembleConfig:
    """Ensemble controls: size, injection radius, seed, budgets."""

    n: int = 32
    eps: float = 1e-3
    seed: int = 0
    t_max: float = 500.0
    return_radius: float = 1e-4

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.eps <= 0 or self.return_radius <= 0:
            raise ValueError("eps and return_radius must be positive")


@dataclass
class EnsembleOutcome:
    member_id: int
    injected_state: State
    events: list[Event]
    returned: bool
    return_time: float | None
    singularity_return: bool = False
    n_crossings: int = 0
    n_stick_segments: int = 0
    segments: list[TrajectorySegment] = field(default_factory=list)
    error: str | None = None


def _member_rng(seed: int, member_id: int) -> np.random.Generator:
    return np.random.default_rng([seed, member_id])


def _surface_state(r: float, w: float, p: SystemParams, h_target: float = 0.0) -> np.ndarray:
    """Solve the surface condition for v at (r, omega), offset to h = h_target."""
    sg = math.sin(p.gamma)
    cot_g = math.cos(p.gamma) / sg
    v = (w - p.omega0) * (p.d - r * cot_g) - h_target / sg
    return np.array([r, v, w])


def inject(x_star: State, p: SystemParams, cfg: EnsembleConfig) -> list[State]:
    """Draw reproducible slip starting points beside the repulsive patch.

    Each member samples (r, omega) offsets uniformly until the on-surface
    point lies inside the eps-ball around the two-fold and classifies as
    escaping, then receives a surface-normal offset of +-eps/100 with
    equal probability. Per-member generators are derived from
    (seed, member_id), so results do not depend on evaluation order.
    """
    report = normal_form(x_star, p)
    if report.case_tag != CASE1:
        raise ValueError(f"injection requires a case-1 two-fold point, got {report.case_tag}")
    if abs(math.sin(p.gamma)) < 1e-12:
        raise ValueError("injection requires sin(gamma) != 0")
    xs = x_star.as_array()
    states = []
    for member_id in range(cfg.n):
        rng = _member_rng(cfg.seed, member_id)
        for attempt in range(_REJECTION_LIMIT):
            dr, dw = rng.uniform(-cfg.eps, cfg.eps, 2)
            x_on = _surface_state(xs[0] + dr, xs[2] + dw, p)
            if np.linalg.norm(x_on - xs) > cfg.eps:
                continue
            if classify(x_on, p).tag == ESCAPING:
                break
        else:
            raise RuntimeError(
                "rejection sampling failed: no escaping patch inside the "
                "eps-ball (wrong case or radius)"
            )
        side = 1.0 if rng.uniform() < 0.5 else -1.0
        x_off = _surface_state(x_on[0], x_on[2], p, h_target=side * cfg.eps / 100.0)
        states.append(State.from_array(x_off))
    return states


def _scan_return(segments: list[TrajectorySegment], xs: np.ndarray,
                 radius: float, departure_radius: float) -> float | None:
    """First sample time inside the return ball after a decisive departure.

    Members are injected next to the target point, so plain ball entry
    would fire immediately; the excursion must first exceed
    ``departure_radius`` for a subsequent ball entry to count.
    """
    left = False
    for seg in segments:
        d = np.linalg.norm(seg.states - xs, axis=1)
        for t, di in zip(seg.times, d):
            if di > departure_radius:
                left = True
            elif left and di <= radius:
                return float(t)
    return None


def run_ensemble(x_star: State, p: SystemParams, cfg: EnsembleConfig,
                 opts: IntegratorOptions | None = None) -> list[EnsembleOutcome]:
    """Integrate every injected member and record its recurrence record.

    Members run with escaping-region sticking enabled (the repulsive
    patch is part of the recurrent structure). A member counts as
    returned when it re-enters the return ball after leaving it, or hits
    the two-fold itself; the latter is flagged separately. Failures stay
    in the outcome rather than propagating.
    """
    base = opts or IntegratorOptions()
    opts = IntegratorOptions(**{**base.to_dict(),
                                "t_max": cfg.t_max,
                                "allow_escaping_stick": True,
                                "blowup_bound": min(base.blowup_bound, 1e3)})
    xs = x_star.as_array()
    outcomes = []
    for member_id, injected in enumerate(inject(x_star, p, cfg)):
        mode = (ContactMode.slip_positive() if lateral_velocity(injected, p) > 0
                else ContactMode.slip_negative())
        out = EnsembleOutcome(member_id, injected, [], False, None)
        try:
            segments = integrate(injected, mode, p, opts)
        except Exception as exc:  # member-level failures recorded, not raised
            out.error = f"{type(exc).__name__}: {exc}"
            outcomes.append(out)
            continue
        out.segments = segments
        out.events = [seg.terminal for seg in segments]
        out.n_crossings = sum(
            1 for ev in out.events
            if ev.tag == SURFACE_HIT and ev.detail.get("classification") == CROSSING
        )
        out.n_stick_segments = sum(1 for seg in segments if seg.mode.tag == "stick")
        hit = next((ev for ev in out.events if ev.tag == SINGULARITY_HIT), None)
        departure = max(2.0 * cfg.eps, 4.0 * cfg.return_radius)
        t_ball = _scan_return(segments, xs, cfg.return_radius, departure)
        if hit is not None:
            out.returned = True
            out.singularity_return = True
            out.return_time = t_ball if t_ball is not None and t_ball < hit.time else hit.time
        elif t_ball is not None:
            out.returned = True
            out.return_time = t_ball
        outcomes.append(out)
    return outcomes
