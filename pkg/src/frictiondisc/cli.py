"""Command-line front end.

Subcommands: simulate, scan, design, classify, tyre-curve, ensemble.
System parameters come from a JSON config file (flat keys d, m, beta,
c1, c2, k2, r0, omega0, mu, gamma, kappa); repeated --set key=value
flags override individual entries. Every run writes its outputs plus a
JSON metadata sidecar; identical invocations produce byte-identical CSV
bodies. Environment variables are never consulted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import EnsembleConfig, run_ensemble
from .io import fmt, write_ensemble, write_metadata, write_scan, write_trajectory
from .model import ContactMode, State, SystemParams, lateral_velocity
from .scan import DEFAULT_WINDOW, scan
from .singularity import design_singularity, normal_form
from .solver import IntegratorOptions, classify, integrate
from .tyre import TyreParams, force_moment_raw, specialized_params


class CliError(Exception):
    pass


def _load_params(args) -> SystemParams:
    if args.config is None:
        raise CliError("config: --config FILE is required")
    path = Path(args.config)
    if not path.exists():
        raise CliError(f"config: file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"config: malformed JSON: {exc}") from exc
    for item in args.set or []:
        if "=" not in item:
            raise CliError(f"config: --set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        try:
            data[key.strip()] = float(value)
        except ValueError as exc:
            raise CliError(f"config: non-numeric value in --set {item!r}") from exc
    try:
        return SystemParams.from_json(json.dumps(data))
    except (ValueError, TypeError) as exc:
        raise CliError(f"config: {exc}") from exc


def _parse_state(text: str) -> State:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliError("state: expected three comma-separated numbers r,v,omega")
    try:
        r, v, w = (float(c) for c in parts)
    except ValueError as exc:
        raise CliError(f"state: non-numeric component in {text!r}") from exc
    return State(r, v, w)


def _integrator_options(args, **overrides) -> IntegratorOptions:
    kw = {}
    if getattr(args, "t_max", None) is not None:
        kw["t_max"] = args.t_max
    if getattr(args, "rtol", None) is not None:
        kw["rtol"] = args.rtol
    if getattr(args, "atol", None) is not None:
        kw["atol"] = args.atol
    kw.update(overrides)
    return IntegratorOptions(**kw)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------------- simulate

def _cmd_simulate(args) -> int:
    p = _load_params(args)
    s0 = _parse_state(args.state)
    opts = _integrator_options(args)
    h0 = lateral_velocity(s0, p)
    if args.mode == "auto":
        if abs(h0) <= opts.on_surface_tol:
            mode = ContactMode.stick(0.0)
        else:
            mode = ContactMode.slip_positive() if h0 > 0 else ContactMode.slip_negative()
    elif args.mode == "stick":
        mode = ContactMode.stick(0.0)
    else:
        mode = ContactMode(args.mode)
    if mode.tag == "stick":
        from .solver import lambda_star

        mode = ContactMode.stick(float(np.clip(lambda_star(s0, p), -p.mu, p.mu)))
    t0 = time.perf_counter()
    segments = integrate(s0, mode, p, opts)
    wall = time.perf_counter() - t0
    out = _outdir(args)
    traj = out / "trajectory.csv"
    write_trajectory(traj, segments, p)
    write_metadata(out / "trajectory.meta.json", p, "simulate", opts.to_dict(), wall,
                   {"n_segments": len(segments),
                    "terminal": segments[-1].terminal.tag})
    print(f"wrote {traj} ({len(segments)} segments, terminal {segments[-1].terminal.tag})")
    return 0


# --------------------------------------------------------------------- scan

def _cmd_scan(args) -> int:
    p = _load_params(args)
    window = ((args.r_min, args.r_max), (args.omega_min, args.omega_max))
    t0 = time.perf_counter()
    result = scan(p, window, args.grid)
    wall = time.perf_counter() - t0
    out = _outdir(args)
    paths = write_scan(out, result)
    write_metadata(out / "scan.meta.json", p, "scan",
                   {"window": window, "grid": args.grid}, wall,
                   {"n_combined": int(result.combined.sum()),
                    "n_invalid": int(result.invalid.sum())})
    print(f"wrote {len(paths)} mask files to {out} "
          f"({int(result.combined.sum())}/{args.grid * args.grid} cells combined)")
    return 0


# ------------------------------------------------------------------- design

def _cmd_design(args) -> int:
    p = _load_params(args)
    t0 = time.perf_counter()
    try:
        result = design_singularity(args.r_star, args.omega_star, p)
    except (ValueError, ArithmeticError) as exc:
        raise CliError(f"design: {exc}") from exc
    wall = time.perf_counter() - t0
    payload = {
        "r_star": args.r_star,
        "omega_star": args.omega_star,
        "v_star": result.v_star,
        "kappa": result.kappa,
        "k2": result.k2,
        "residuals": result.residuals,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    out = _outdir(args)
    (out / "design.json").write_text(text + "\n", encoding="utf-8")
    write_metadata(out / "design.meta.json", result.params, "design",
                   {"r_star": args.r_star, "omega_star": args.omega_star}, wall)
    return 0


# ----------------------------------------------------------------- classify

def _cmd_classify(args) -> int:
    p = _load_params(args)
    s = _parse_state(args.state)
    t0 = time.perf_counter()
    report = normal_form(s, p)
    try:
        region = classify(s, p)
        region_payload = {"tag": region.tag, "lambda_star": region.lambda_star}
    except ValueError as exc:
        region_payload = {"error": str(exc)}
    wall = time.perf_counter() - t0
    payload = {
        "x_star": {"r": s.r, "v": s.v, "omega": s.omega},
        "region": region_payload,
        "kpp": report.kpp,
        "kpm": report.kpm,
        "kmp": report.kmp,
        "kmm": report.kmm,
        "j1": report.j1,
        "j2": report.j2,
        "eig1": report.eig1,
        "eig2": report.eig2,
        "evec1": report.evec1,
        "evec2": report.evec2,
        "case_tag": report.case_tag,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    out = _outdir(args)
    (out / "classify.json").write_text(text + "\n", encoding="utf-8")
    write_metadata(out / "classify.meta.json", p, "classify", {"state": args.state}, wall)
    return 0


# --------------------------------------------------------------- tyre-curve

def _cmd_tyre_curve(args) -> int:
    if args.kappa is not None:
        tp = specialized_params(args.kappa)
    else:
        missing = [n for n in ("k", "a", "sigma", "delta", "rho") if getattr(args, n) is None]
        if missing:
            raise CliError(f"tyre-curve: missing patch constants {missing} (or pass --kappa)")
        tp = TyreParams(args.k, args.a, args.sigma, args.delta, args.rho)
    t0 = time.perf_counter()
    phis = np.linspace(0.0, args.phi_max, args.n)
    lines = ["phi,F,M,regime"]
    for phi in phis:
        outp = force_moment_raw(float(phi), tp)
        lines.append(f"{fmt(phi)},{fmt(outp.force)},{fmt(outp.moment)},{outp.regime}")
    wall = time.perf_counter() - t0
    out = _outdir(args)
    path = out / "tyre_curve.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_metadata(out / "tyre_curve.meta.json", None, "tyre-curve",
                   {"params": vars(tp) if hasattr(tp, "__dict__") else tp.__dict__,
                    "n": args.n, "phi_max": args.phi_max}, wall)
    print(f"wrote {path} ({args.n} rows)")
    return 0


# ----------------------------------------------------------------- ensemble

def _cmd_ensemble(args) -> int:
    p = _load_params(args)
    x_star = _parse_state(args.state)
    cfg = EnsembleConfig(n=args.n, eps=args.eps, seed=args.seed,
                         t_max=args.t_max, return_radius=args.return_radius)
    t0 = time.perf_counter()
    try:
        outcomes = run_ensemble(x_star, p, cfg)
    except (ValueError, RuntimeError) as exc:
        raise CliError(f"ensemble: {exc}") from exc
    wall = time.perf_counter() - t0
    out = _outdir(args)
    paths = write_ensemble(out, outcomes, p)
    n_ret = sum(1 for o in outcomes if o.returned)
    write_metadata(out / "ensemble.meta.json", p, "ensemble",
                   {"n": cfg.n, "eps": cfg.eps, "seed": cfg.seed,
                    "t_max": cfg.t_max, "return_radius": cfg.return_radius}, wall,
                   {"n_returned": n_ret})
    print(f"wrote {len(paths)} files to {out} ({n_ret}/{cfg.n} members returned)")
    return 0


# --------------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="frictiondisc",
        description="Simulate a friction-driven wheel on a turntable and analyze its two-fold singularities.",
    )
    ap.add_argument("--version", action="version", version=f"frictiondisc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, config=True):
        if config:
            sp.add_argument("--config", help="JSON file with the system parameters")
            sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                            help="override a parameter from the config (repeatable)")
        sp.add_argument("--out", default=".", help="output directory (default: current)")

    sp = sub.add_parser("simulate", help="integrate one trajectory and write a CSV")
    add_common(sp)
    sp.add_argument("--state", required=True, metavar="R,V,OMEGA", help="initial state")
    sp.add_argument("--mode", default="auto", choices=["auto", "slip+", "slip-", "stick"],
                    help="initial contact mode (default: auto from the surface side)")
    sp.add_argument("--t-max", type=float, default=100.0, dest="t_max")
    sp.add_argument("--rtol", type=float, default=None)
    sp.add_argument("--atol", type=float, default=None)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("scan", help="evaluate the design-condition masks over a grid")
    add_common(sp)
    sp.add_argument("--grid", type=int, default=8, help="grid points per axis")
    sp.add_argument("--r-min", type=float, default=DEFAULT_WINDOW[0][0])
    sp.add_argument("--r-max", type=float, default=DEFAULT_WINDOW[0][1])
    sp.add_argument("--omega-min", type=float, default=DEFAULT_WINDOW[1][0])
    sp.add_argument("--omega-max", type=float, default=DEFAULT_WINDOW[1][1])
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("design", help="place a two-fold point and print v*, kappa, k2")
    add_common(sp)
    sp.add_argument("--r-star", type=float, required=True)
    sp.add_argument("--omega-star", type=float, required=True)
    sp.set_defaults(func=_cmd_design)

    sp = sub.add_parser("classify", help="print the local two-fold report at a state")
    add_common(sp)
    sp.add_argument("--state", required=True, metavar="R,V,OMEGA")
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("tyre-curve", help="tabulate the contact force/moment law")
    add_common(sp, config=False)
    sp.add_argument("--kappa", type=float, default=None,
                    help="use the specialized patch for this moment arm")
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--sigma", type=float, default=None)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--phi-max", type=float, default=math.pi / 2, dest="phi_max")
    sp.set_defaults(func=_cmd_tyre_curve)

    sp = sub.add_parser("ensemble", help="run a seeded re-injection ensemble")
    add_common(sp)
    sp.add_argument("--state", required=True, metavar="R,V,OMEGA", help="the two-fold point")
    sp.add_argument("--n", type=int, default=32)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t-max", type=float, default=500.0, dest="t_max")
    sp.add_argument("--return-radius", type=float, default=1e-4, dest="return_radius")
    sp.set_defaults(func=_cmd_ensemble)

    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # keep the one-line machine-parsable contract
        print(f"error: internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
