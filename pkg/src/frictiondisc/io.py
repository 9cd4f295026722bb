"""CSV and metadata output.

All numeric values print with 17 significant digits so files round-trip
to the exact binary doubles. CSV bodies contain no timestamps; wall time
and run provenance live in a JSON sidecar next to each output file.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import EnsembleOutcome
from .model import SystemParams, lateral_velocity, rolling_velocity
from .scan import MASK_NAMES, ScanResult
from .solver import TrajectorySegment

__all__ = [
    "fmt",
    "params_hash",
    "write_metadata",
    "trajectory_csv",
    "write_trajectory",
    "write_scan",
    "write_ensemble",
]


def fmt(x) -> str:
    return f"{float(x):.17g}"


def params_hash(p: SystemParams) -> str:
    return hashlib.sha256(p.to_json().encode()).hexdigest()[:16]


def write_metadata(path: Path, p: SystemParams | None, command: str,
                   options: dict, wall_time_s: float, extra: dict | None = None) -> None:
    meta = {
        "tool": "frictiondisc",
        "version": __version__,
        "command": command,
        "params_hash": params_hash(p) if p is not None else None,
        "params": json.loads(p.to_json()) if p is not None else None,
        "options": options,
        "wall_time_s": wall_time_s,
    }
    if extra:
        meta.update(extra)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def trajectory_csv(segments: list[TrajectorySegment], p: SystemParams) -> str:
    """Render a trajectory as CSV with a trailing commented event log.

    Columns: t, r, v, omega, h, g, mode, lambda (lambda empty during
    slip). Each segment's terminal event appears as a '# event,...' line
    after the data rows.
    """
    lines = ["t,r,v,omega,h,g,mode,lambda"]
    for seg in segments:
        lams = seg.lambdas
        for i, (t, x) in enumerate(zip(seg.times, seg.states)):
            h = lateral_velocity(x, p)
            g = rolling_velocity(x, p)
            lam = "" if lams is None or not np.isfinite(lams[i]) else fmt(lams[i])
            lines.append(
                f"{fmt(t)},{fmt(x[0])},{fmt(x[1])},{fmt(x[2])},{fmt(h)},{fmt(g)},{seg.mode.tag},{lam}"
            )
    lines.append("# events")
    for seg in segments:
        ev = seg.terminal
        detail = json.dumps(ev.detail, sort_keys=True) if ev.detail else ""
        lines.append(
            f"# event,{ev.tag},{fmt(ev.time)},{fmt(ev.state.r)},{fmt(ev.state.v)},"
            f"{fmt(ev.state.omega)},{detail.replace(',', ';')}"
        )
    return "\n".join(lines) + "\n"


def write_trajectory(path: Path, segments: list[TrajectorySegment], p: SystemParams) -> None:
    path.write_text(trajectory_csv(segments, p), encoding="utf-8")


def write_scan(outdir: Path, result: ScanResult) -> list[Path]:
    """One CSV per condition mask plus the combined mask; rows r*, omega*, value."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    grids = dict(result.masks)
    grids["combined"] = result.combined
    for name, grid in grids.items():
        lines = ["r_star,omega_star,value"]
        for i, rs in enumerate(result.r_values):
            for j, ws in enumerate(result.omega_values):
                lines.append(f"{fmt(rs)},{fmt(ws)},{int(grid[i, j])}")
        path = outdir / f"mask_{name}.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


def write_ensemble(outdir: Path, outcomes: list[EnsembleOutcome], p: SystemParams) -> list[Path]:
    """Per-member trajectory CSVs plus a summary CSV."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    lines = ["member_id,returned,return_time,singularity_return,n_crossings,n_stick_segments,error"]
    for out in outcomes:
        rt = "" if out.return_time is None else fmt(out.return_time)
        err = out.error or ""
        lines.append(
            f"{out.member_id},{int(out.returned)},{rt},{int(out.singularity_return)},"
            f"{out.n_crossings},{out.n_stick_segments},{err}"
        )
        if out.segments:
            path = outdir / f"member_{out.member_id:03d}.csv"
            write_trajectory(path, out.segments, p)
            written.append(path)
    summary = outdir / "summary.csv"
    summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(summary)
    return written
