"""Event-driven integration of the piecewise-smooth contact dynamics.

Slip phases integrate the tyre-forced field on one side of the switching
surface h = 0 and watch for surface hits; stick phases integrate the
sliding field (the friction force chosen to keep the flow tangent) with a
per-step projection back onto the surface, and watch for the static bound
|lam*| = mu, for two-fold proximity, and for the time limit.

Event localization works on the integrator's dense output: each accepted
step is scanned on a subgrid, sign changes are bracketed and polished by
Brent's method, and near-tangent passes get an explicit minimum hunt so
grazing surface approaches are resolved down to interpolation accuracy.

Two safety rails handle situations outside the clean Filippov picture,
both caused by the kinetic force (up to 4*mu/3) exceeding the static
bound mu near the co-dimension-two set h = g = 0: crossing sequences that
accumulate in zero time (Zeno) are stopped, and a state pinned on the
rolling line with the static force/moment rectangle able to hold it is
reported as a rolling equilibrium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq, minimize_scalar

from .model import (
    ContactMode,
    State,
    SystemParams,
    SLIP_POS,
    SLIP_NEG,
    friction_decomposition,
    lateral_velocity,
    lateral_velocity_gradient,
    normal_rate_gradient,
    slider_force,
    slip_field,
)

__all__ = [
    "RegionClass",
    "Event",
    "TrajectorySegment",
    "IntegratorOptions",
    "TwoFoldProximityError",
    "CROSSING",
    "SLIDING",
    "ESCAPING",
    "TWO_FOLD",
    "SURFACE_HIT",
    "SLIDING_EXIT",
    "SINGULARITY_HIT",
    "TIME_LIMIT",
    "BLOWUP",
    "STALL",
    "classify",
    "lambda_star",
    "sliding_field",
    "tangency_curvature",
    "integrate",
]

CROSSING = "crossing"
SLIDING = "sliding"
ESCAPING = "escaping"
TWO_FOLD = "two-fold"

SURFACE_HIT = "surface-hit"
SLIDING_EXIT = "sliding-exit"
SINGULARITY_HIT = "singularity-hit"
TIME_LIMIT = "time-limit"
BLOWUP = "blowup"
STALL = "stall"


class TwoFoldProximityError(ValueError):
    """Sliding-field request too close to a two-fold point."""

    def __init__(self, state: State):
        super().__init__("state is within two-fold proximity; the sliding field is ill-defined")
        self.state = state


@dataclass(frozen=True)
class RegionClass:
    """Classification of a switching-surface point."""

    tag: str
    lambda_star: float | None


@dataclass(frozen=True)
class Event:
    tag: str
    time: float
    state: State
    detail: dict = field(default_factory=dict)


@dataclass
class TrajectorySegment:
    """A single-mode stretch of trajectory ending in an event.

    ``times`` and ``states`` hold the accepted integrator steps plus the
    localized event point; ``lambdas`` carries the static friction force
    along stick segments (None during slip). ``escaping`` flags stick
    segments started in a repulsive region.
    """

    mode: ContactMode
    times: np.ndarray
    states: np.ndarray
    lambdas: np.ndarray | None
    terminal: Event
    escaping: bool = False

    @property
    def samples(self) -> list[tuple[float, State]]:
        return [(float(t), State.from_array(x, float(t))) for t, x in zip(self.times, self.states)]


@dataclass(frozen=True)
class IntegratorOptions:
    """Tolerances and budgets; all values land in the run metadata."""

    t_max: float = 100.0
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    n_scan: int = 17
    tol_event: float = 1e-12
    tol_lambda: float = 1e-9
    tol_sing: float = 1e-7
    on_surface_tol: float = 1e-8
    blowup_bound: float = 1e6
    max_events: int = 2000
    max_steps: int = 1_000_000
    allow_escaping_stick: bool = False
    zeno_dt: float = 1e-7
    zeno_count: int = 6
    graze_frac: float = 0.05
    max_grazes: int = 5

    def to_dict(self) -> dict:
        return asdict(self)


_TINY = 1e-300


def _coerce(s) -> np.ndarray:
    if isinstance(s, State):
        return s.as_array()
    return np.asarray(s, dtype=float)


def _normal_pair(x: np.ndarray, p: SystemParams) -> tuple[float, float, float, float]:
    """(a, b) = normal velocities of the free and force-direction fields, with scales."""
    hx = lateral_velocity_gradient(x, p)
    f0, fdir = friction_decomposition(x, p)
    a = float(hx @ f0)
    b = float(hx @ fdir)
    nh = float(np.linalg.norm(hx))
    return a, b, nh * float(np.linalg.norm(f0)), nh * float(np.linalg.norm(fdir))


def lambda_star(s, p: SystemParams) -> float:
    """Static friction force that keeps the stick field tangent to the surface."""
    a, b, _, _ = _normal_pair(_coerce(s), p)
    return -a / b


def classify(s, p: SystemParams, opts: IntegratorOptions | None = None) -> RegionClass:
    """Classify an on-surface point as crossing, sliding, escaping, or two-fold.

    Sliding: the tangency force lies in [-mu, mu] and both one-sided
    stick-field limits push toward the surface. Escaping: admissible force
    but both limits push away. Crossing: no admissible force. Two-fold
    candidate: both normal velocities vanish to tolerance.
    """
    opts = opts or IntegratorOptions()
    x = _coerce(s)
    h = lateral_velocity(x, p)
    if abs(h) > opts.on_surface_tol:
        raise ValueError(f"point is off the switching surface (|h| = {abs(h):.3e})")
    a, b, sa, sb = _normal_pair(x, p)
    if abs(a) <= opts.tol_sing * max(sa, _TINY) and abs(b) <= opts.tol_sing * max(sb, _TINY):
        return RegionClass(TWO_FOLD, None)
    lam = -a / b if b != 0.0 else math.copysign(math.inf, -a)
    if abs(lam) > p.mu:
        return RegionClass(CROSSING, lam)
    return RegionClass(SLIDING if b < 0.0 else ESCAPING, lam)


def sliding_field(s, p: SystemParams, opts: IntegratorOptions | None = None) -> np.ndarray:
    """Stick-phase field: friction chosen to annihilate the normal velocity."""
    opts = opts or IntegratorOptions()
    x = _coerce(s)
    a, b, sa, sb = _normal_pair(x, p)
    if abs(a) <= opts.tol_sing * max(sa, _TINY) and abs(b) <= opts.tol_sing * max(sb, _TINY):
        raise TwoFoldProximityError(State.from_array(x))
    f0, fdir = friction_decomposition(x, p)
    return f0 - (a / b) * fdir


def tangency_curvature(s, side: int, p: SystemParams) -> float:
    """Second surface derivative along the one-sided stick field f(., side*mu).

    Positive for side=+1 means the upper field curves away from the
    surface (a visible tangency from above); the sign decides whether a
    stick trajectory reaching the static bound can lift off.
    """
    x = _coerce(s)
    lam = side * p.mu
    f0, fdir = friction_decomposition(x, p)
    return float(normal_rate_gradient(x, lam, p) @ (f0 + lam * fdir))


def _rolling_equilibrium(x: np.ndarray, p: SystemParams) -> tuple[bool, float, float]:
    """Force/moment pair holding the pure-rolling state, and its admissibility.

    Only meaningful on the rolling line v = 0, omega = omega0; elsewhere
    returns not-parkable. Admissible set is the static rectangle
    |F| <= mu, |M| <= |kappa|*mu.
    """
    r, v, w = x
    sg = math.sin(p.gamma)
    if abs(v) > 1e-4 or abs(w - p.omega0) > 1e-4 or abs(sg) < 1e-12:
        return False, 0.0, 0.0
    p1 = slider_force((r, 0.0, p.omega0), p)
    F = -p1 / sg
    M = p.c1 * p.omega0 - p.d * p1 - F * r * math.cos(p.gamma)
    ok = abs(F) <= p.mu and abs(M) <= abs(p.kappa) * p.mu
    return ok, F, M


class _Run:
    """One trajectory integration; single-use."""

    def __init__(self, p: SystemParams, opts: IntegratorOptions):
        self.p = p
        self.opts = opts
        self.segments: list[TrajectorySegment] = []
        self.mode = 0  # +1 / -1 slip side, 0 stick
        self.t = 0.0
        self.x = np.zeros(3)
        self.n_steps = 0
        self.zeno_run = 0
        self.graze_run = 0
        self.done = False

    # -- helpers -------------------------------------------------------

    def _project(self, x: np.ndarray) -> np.ndarray:
        hx = lateral_velocity_gradient(x, self.p)
        return x - lateral_velocity(x, self.p) * hx / float(hx @ hx)

    def _event(self, tag: str, detail: dict | None = None) -> Event:
        return Event(tag, self.t, State.from_array(self.x, self.t), detail or {})

    def _finish_segment(self, mode: ContactMode, times, states, lambdas, terminal: Event,
                        escaping: bool = False):
        self.segments.append(
            TrajectorySegment(
                mode=mode,
                times=np.asarray(times, dtype=float),
                states=np.asarray(states, dtype=float),
                lambdas=None if lambdas is None else np.asarray(lambdas, dtype=float),
                terminal=terminal,
                escaping=escaping,
            )
        )
        if terminal.tag in (SINGULARITY_HIT, TIME_LIMIT, BLOWUP, STALL):
            self.done = True

    def _bad_state(self, y: np.ndarray) -> bool:
        return not np.all(np.isfinite(y)) or float(np.linalg.norm(y)) > self.opts.blowup_bound

    # -- main loop -----------------------------------------------------

    def run(self, x0: np.ndarray, mode0: ContactMode):
        self.x = np.array(x0, dtype=float)
        self.t = 0.0
        if mode0.tag == SLIP_POS:
            self.mode = 1
        elif mode0.tag == SLIP_NEG:
            self.mode = -1
        else:
            h0 = lateral_velocity(self.x, self.p)
            if abs(h0) > self.opts.on_surface_tol:
                raise ValueError(f"stick start requires a point on the surface (|h| = {abs(h0):.3e})")
            self.x = self._project(self.x)
            cls = classify(self.x, self.p, self.opts)
            if cls.tag == TWO_FOLD:
                self._finish_segment(mode0, [self.t], [self.x], [np.nan],
                                     self._event(SINGULARITY_HIT, {"at": "start"}))
                return self.segments
            if cls.tag == CROSSING:
                raise ValueError("stick start at a crossing point: no admissible friction force")
            if cls.tag == ESCAPING and not self.opts.allow_escaping_stick:
                raise ValueError("stick start in the escaping region requires allow_escaping_stick")
            self.mode = 0
        while not self.done and len(self.segments) < self.opts.max_events:
            if self.t >= self.opts.t_max:
                self._finish_segment(self._mode_obj(), [self.t], [self.x],
                                     [np.nan] if self.mode == 0 else None,
                                     self._event(TIME_LIMIT))
                break
            if self.n_steps >= self.opts.max_steps:
                self._finish_segment(self._mode_obj(), [self.t], [self.x],
                                     [np.nan] if self.mode == 0 else None,
                                     self._event(STALL, {"reason": "step-budget"}))
                break
            if self.mode == 0:
                self._stick_segment()
            else:
                self._slip_segment()
        if not self.done and len(self.segments) >= self.opts.max_events:
            self._finish_segment(self._mode_obj(), [self.t], [self.x],
                                 [np.nan] if self.mode == 0 else None,
                                 self._event(STALL, {"reason": "event-budget"}))
        return self.segments

    def _mode_obj(self) -> ContactMode:
        if self.mode == 1:
            return ContactMode.slip_positive()
        if self.mode == -1:
            return ContactMode.slip_negative()
        return ContactMode.stick(lambda_star(self.x, self.p))

    # -- slip ----------------------------------------------------------

    def _slip_segment(self):
        p, opts = self.p, self.opts
        side = self.mode
        mode_obj = ContactMode.slip_positive() if side > 0 else ContactMode.slip_negative()
        t_start = self.t
        rhs = lambda t, y: slip_field(y, side, p)
        solver = RK45(rhs, self.t, self.x, opts.t_max, rtol=opts.rtol, atol=opts.atol,
                      max_step=opts.max_step)
        times = [self.t]
        states = [self.x.copy()]
        phi_scale = 0.0
        while True:
            if solver.status == "finished":
                self.t, self.x = solver.t, solver.y
                if self.t > times[-1]:
                    times.append(self.t)
                    states.append(self.x.copy())
                self._finish_segment(mode_obj, times, states, None, self._event(TIME_LIMIT))
                return
            if solver.status == "failed":
                self.t, self.x = solver.t, solver.y
                self._finish_segment(mode_obj, times, states, None,
                                     self._event(STALL, {"reason": "step-failure"}))
                return
            solver.step()
            self.n_steps += 1
            if self._bad_state(solver.y):
                self.t, self.x = solver.t, solver.y
                ev = self._event(BLOWUP) if np.all(np.isfinite(solver.y)) else Event(
                    BLOWUP, solver.t, State.from_array(states[-1], times[-1]),
                    {"reason": "non-finite"})
                self._finish_segment(mode_obj, times, states, None, ev)
                return
            if self.n_steps >= opts.max_steps:
                self.t, self.x = solver.t, solver.y
                times.append(self.t)
                states.append(self.x.copy())
                self._finish_segment(mode_obj, times, states, None,
                                     self._event(STALL, {"reason": "step-budget"}))
                return
            dense = solver.dense_output()
            ts = np.linspace(solver.t_old, solver.t, opts.n_scan)
            phi = side * np.array([lateral_velocity(dense(tt), p) for tt in ts])
            phi_scale = max(phi_scale, float(np.max(np.abs(phi))))
            bracket = self._surface_bracket(ts, phi, dense, side, phi_scale)
            if bracket is not None:
                t_ev = brentq(lambda tt: side * lateral_velocity(dense(tt), p),
                              bracket[0], bracket[1], xtol=1e-15, rtol=8.9e-16)
                self.t = t_ev
                self.x = self._project(dense(t_ev))
                keep = [i for i, t in enumerate(times) if t < t_ev]
                times = [times[i] for i in keep] + [t_ev]
                states = [states[i] for i in keep] + [self.x.copy()]
                self.zeno_run = self.zeno_run + 1 if (t_ev - t_start) < opts.zeno_dt else 0
                self._arrival(mode_obj, times, states)
                return
            times.append(solver.t)
            states.append(solver.y.copy())

    def _surface_bracket(self, ts, phi, dense, side, phi_scale):
        """Bracket the first surface hit in this step, grazes included."""
        p = self.p
        bad = np.where(phi < -1e-14)[0]
        if len(bad):
            pos = np.where(phi[: bad[0]] > 1e-14)[0]
            if len(pos):
                return ts[pos[-1]], ts[bad[0]]
        # graze hunt: resolve small interior local minima of the margin
        thr = self.opts.graze_frac * max(phi_scale, 1e-12)
        n = len(phi)
        for j in range(n):
            is_min = (j == 0 or phi[j] <= phi[j - 1]) and (j == n - 1 or phi[j] <= phi[j + 1])
            if not is_min or phi[j] > thr:
                continue
            lo = ts[max(j - 1, 0)]
            hi = ts[min(j + 1, n - 1)]
            if hi <= lo:
                continue
            res = minimize_scalar(lambda tt: side * lateral_velocity(dense(tt), p),
                                  bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-15})
            if res.fun < -1e-14:
                k = max(j - 1, 0)
                while phi[k] <= 1e-14 and k > 0:
                    k -= 1
                if phi[k] > 1e-14:
                    return ts[k], float(res.x)
        return None

    def _arrival(self, mode_obj, times, states):
        """Decide the continuation at a localized surface hit."""
        p, opts = self.p, self.opts
        x = self.x
        a, b, sa, sb = _normal_pair(x, p)
        if abs(a) <= opts.tol_sing * max(sa, _TINY) and abs(b) <= opts.tol_sing * max(sb, _TINY):
            self._finish_segment(mode_obj, times, states, None,
                                 self._event(SINGULARITY_HIT, {"at": "surface-hit"}))
            return
        lam = -a / b if b != 0.0 else math.copysign(math.inf, -a)
        if abs(lam) <= p.mu and (b < 0.0 or opts.allow_escaping_stick):
            detail = {"classification": SLIDING if b < 0.0 else ESCAPING, "lambda_star": lam}
            self._finish_segment(mode_obj, times, states, None, self._event(SURFACE_HIT, detail))
            self.zeno_run = 0
            self.graze_run = 0
            self.mode = 0
            return
        # crossing (or escaping passage with stick disabled)
        if self.zeno_run >= opts.zeno_count:
            parked, F, M = _rolling_equilibrium(x, p)
            reason = "rolling-equilibrium" if parked else "zeno-chatter"
            detail = {"reason": reason}
            if parked:
                detail.update({"hold_force": F, "hold_moment": M})
            self._finish_segment(mode_obj, times, states, None, self._event(STALL, detail))
            return
        detail = {"classification": CROSSING if abs(lam) > p.mu else ESCAPING, "lambda_star": lam}
        self._finish_segment(mode_obj, times, states, None, self._event(SURFACE_HIT, detail))
        self.mode = -self.mode

    # -- stick ---------------------------------------------------------

    def _stick_segment(self):
        p, opts = self.p, self.opts
        self.x = self._project(self.x)
        a, b, sa, sb = _normal_pair(self.x, p)
        lam0 = -a / b
        region = SLIDING if b < 0.0 else ESCAPING
        mode_obj = ContactMode.stick(float(np.clip(lam0, -p.mu, p.mu)))
        escaping = region == ESCAPING
        # the entry point may already sit on the static bound
        for s in (1, -1):
            if s * lam0 >= p.mu - 1e-12:
                exited, ev = self._try_exit(s)
                if exited:
                    self._finish_segment(mode_obj, [self.t], [self.x], [lam0], ev, escaping)
                    return
        field_opts = IntegratorOptions(**{**opts.to_dict(), "tol_sing": opts.tol_sing * 1e-2})
        rhs = lambda t, y: sliding_field(y, p, field_opts)
        solver = RK45(rhs, self.t, self.x, opts.t_max, rtol=opts.rtol, atol=opts.atol,
                      max_step=opts.max_step)
        times = [self.t]
        states = [self.x.copy()]
        lams = [lam0]
        amax, bmax = abs(a) + _TINY, abs(b) + _TINY
        while True:
            if solver.status == "finished":
                self.t, self.x = solver.t, self._project(solver.y)
                if self.t > times[-1]:
                    times.append(self.t)
                    states.append(self.x.copy())
                    lams.append(lambda_star(self.x, p))
                self._finish_segment(mode_obj, times, states, lams, self._event(TIME_LIMIT), escaping)
                return
            if solver.status == "failed":
                self.t, self.x = solver.t, solver.y
                self._finish_segment(mode_obj, times, states, lams,
                                     self._event(STALL, {"reason": "step-failure"}), escaping)
                return
            try:
                solver.step()
            except TwoFoldProximityError:
                self.t, self.x = float(times[-1]), np.array(states[-1])
                self._finish_segment(mode_obj, times, states, lams,
                                     self._event(SINGULARITY_HIT, {"at": "field-singular"}), escaping)
                return
            self.n_steps += 1
            solver.y = self._project(solver.y)
            if self._bad_state(solver.y):
                self.t, self.x = solver.t, solver.y
                self._finish_segment(mode_obj, times, states, lams, self._event(BLOWUP), escaping)
                return
            if self.n_steps >= opts.max_steps:
                self.t, self.x = solver.t, solver.y
                self._finish_segment(mode_obj, times, states, lams,
                                     self._event(STALL, {"reason": "step-budget"}), escaping)
                return
            dense = solver.dense_output()
            ts = np.linspace(solver.t_old, solver.t, opts.n_scan)
            ys = [self._project(dense(tt)) for tt in ts]
            pairs = [_normal_pair(y, p) for y in ys]
            # two-fold trigger: both normal velocities small against running maxima
            trig = None
            am, bm = amax, bmax
            for i, (aa, bb, _, _) in enumerate(pairs):
                if abs(aa) < opts.tol_sing * am and abs(bb) < opts.tol_sing * bm:
                    trig = i
                    break
                am, bm = max(am, abs(aa)), max(bm, abs(bb))
            # static-bound crossings, pole-safe
            lam_list = [-aa / bb for aa, bb, _, _ in pairs]
            hit = None
            for s in (1, -1):
                e = [s * l - p.mu for l in lam_list]
                for i in range(len(e) - 1):
                    if e[i] < 0 < e[i + 1]:
                        if hit is None or i < hit[0]:
                            hit = (i, s)
                        break
            if trig is not None and (hit is None or trig <= hit[0]):
                self.t, self.x = float(ts[trig]), ys[trig]
                times.append(self.t)
                states.append(self.x.copy())
                lams.append(lam_list[trig])
                self._finish_segment(mode_obj, times, states, lams,
                                     self._event(SINGULARITY_HIT), escaping)
                return
            if hit is not None:
                i, s = hit
                t_ev = self._locate_bound(dense, ts[i], ts[i + 1], s)
                self.t = t_ev
                self.x = self._project(dense(t_ev))
                times.append(self.t)
                states.append(self.x.copy())
                lams.append(lambda_star(self.x, p))
                exited, ev = self._try_exit(s)
                if exited:
                    self._finish_segment(mode_obj, times, states, lams, ev, escaping)
                    return
                # tangency cannot break: graze and restart the stick segment
                self.graze_run += 1
                if self.graze_run > opts.max_grazes:
                    parked, F, M = _rolling_equilibrium(self.x, p)
                    reason = "rolling-equilibrium" if parked else "degenerate-exit"
                    detail = {"reason": reason}
                    if parked:
                        detail.update({"hold_force": F, "hold_moment": M})
                    self._finish_segment(mode_obj, times, states, lams,
                                         self._event(STALL, detail), escaping)
                    return
                self._finish_segment(mode_obj, times, states, lams,
                                     self._event(SURFACE_HIT,
                                                 {"classification": "graze", "side": s}), escaping)
                self.mode = 0
                return
            amax, bmax = am, bm
            times.append(solver.t)
            states.append(solver.y.copy())
            lams.append(lam_list[-1])

    def _locate_bound(self, dense, ta, tb, s):
        """Brent on lam* - s*mu; re-bracket if the root finder latched onto a pole."""
        p = self.p

        def ef(tt):
            y = self._project(dense(tt))
            aa, bb, _, _ = _normal_pair(y, p)
            return s * (-aa / bb) - p.mu

        t_ev = brentq(ef, ta, tb, xtol=1e-15, rtol=8.9e-16)
        for _ in range(40):
            y_ev = self._project(dense(t_ev))
            aa, bb, _, _ = _normal_pair(y_ev, p)
            if abs(s * (-aa / bb) - p.mu) < 1e-6 * max(1.0, p.mu):
                break
            tb_new = t_ev - max(1e-15, 1e-12 * abs(t_ev))
            if tb_new <= ta or ef(tb_new) <= 0:
                break
            t_ev = brentq(ef, ta, tb_new, xtol=1e-15, rtol=8.9e-16)
        return t_ev

    def _try_exit(self, s: int) -> tuple[bool, Event | None]:
        """Departure test at lam* = s*mu.

        The bound-side flow is tangent here; it can lift off if it curves
        away from the surface. Failing that, in a repulsive region the
        opposite flow leaves transversally.
        """
        p = self.p
        c = tangency_curvature(self.x, s, p)
        if s * c > 1e-14:
            ev = self._event(SLIDING_EXIT, {"bound": s, "side": s, "kind": "liftoff"})
            self.mode = s
            self.graze_run = 0
            return True, ev
        hx = lateral_velocity_gradient(self.x, p)
        f0, fdir = friction_decomposition(self.x, p)
        n_opp = float(hx @ (f0 - s * p.mu * fdir))
        if -s * n_opp > 1e-13:
            ev = self._event(SLIDING_EXIT, {"bound": s, "side": -s, "kind": "transversal"})
            self.mode = -s
            self.graze_run = 0
            return True, ev
        return False, None


def integrate(s0, mode0: ContactMode, p: SystemParams,
              opts: IntegratorOptions | None = None) -> list[TrajectorySegment]:
    """Integrate the piecewise-smooth system from a state and contact mode.

    Returns the list of single-mode trajectory segments; the last
    segment's terminal event ends the trajectory (time limit, two-fold
    hit, blowup, or a stall diagnostic). Identical inputs and options
    produce identical output.
    """
    opts = opts or IntegratorOptions()
    x0 = _coerce(s0)
    if not np.all(np.isfinite(x0)):
        return [
            TrajectorySegment(
                mode=mode0,
                times=np.array([0.0]),
                states=np.array([[np.nan, np.nan, np.nan]]),
                lambdas=None,
                terminal=Event(BLOWUP, 0.0, State(0.0, 0.0, 0.0, 0.0), {"reason": "non-finite"}),
            )
        ]
    return _Run(p, opts).run(x0, mode0)
