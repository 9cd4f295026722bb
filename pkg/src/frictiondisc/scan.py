"""Parameter-region scan: where does the designer produce the funneling case?

For every grid point (r*, omega*) the designer completes the parameter
set, the local report is computed, and seven boolean conditions are
recorded; their conjunction marks the region with a case-1 two-fold
(negative invariants, determinant above one, both curvatures of the
right sign, and positive spring stiffness and moment arm).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import SystemParams
from .singularity import CASE1, design_singularity, normal_form

__all__ = ["MASK_NAMES", "ScanResult", "scan", "DEFAULT_WINDOW"]

MASK_NAMES = ("kmm_pos", "kpp_neg", "j1_neg", "j2_neg", "det_pos", "k2_pos", "kappa_pos")

DEFAULT_WINDOW = ((0.01, 0.6), (-2.0, 0.0))


@dataclass
class ScanResult:
    """Grid axes, per-condition boolean masks, and per-cell validity."""

    r_values: np.ndarray
    omega_values: np.ndarray
    masks: dict[str, np.ndarray]
    invalid: np.ndarray
    case_tags: list[list[str | None]] = field(default_factory=list)

    @property
    def combined(self) -> np.ndarray:
        out = np.ones_like(self.invalid, dtype=bool)
        for name in MASK_NAMES:
            out &= self.masks[name]
        out &= ~self.invalid
        return out

    def nearest_cell(self, r_star: float, omega_star: float) -> tuple[int, int]:
        i = int(np.argmin(np.abs(self.r_values - r_star)))
        j = int(np.argmin(np.abs(self.omega_values - omega_star)))
        return i, j


def scan(base: SystemParams, window=DEFAULT_WINDOW, n: int = 8) -> ScanResult:
    """Evaluate the seven design conditions over an n-by-n grid.

    Cells where the designer is singular (r* = 0, r* = r0, vanishing
    lever) or fails verification are flagged invalid instead of aborting
    the scan. Cells are independent, so results do not depend on
    evaluation order.
    """
    (r_lo, r_hi), (w_lo, w_hi) = window
    r_values = np.linspace(r_lo, r_hi, n)
    omega_values = np.linspace(w_lo, w_hi, n)
    masks = {name: np.zeros((n, n), dtype=bool) for name in MASK_NAMES}
    invalid = np.zeros((n, n), dtype=bool)
    case_tags: list[list[str | None]] = [[None] * n for _ in range(n)]
    for i, rs in enumerate(r_values):
        for j, ws in enumerate(omega_values):
            try:
                design = design_singularity(float(rs), float(ws), base)
                report = normal_form(design.x_star, design.params)
            except (ValueError, ArithmeticError):
                invalid[i, j] = True
                continue
            case_tags[i][j] = report.case_tag
            masks["kmm_pos"][i, j] = report.kmm > 0.0
            masks["kpp_neg"][i, j] = report.kpp < 0.0
            masks["k2_pos"][i, j] = design.k2 > 0.0
            masks["kappa_pos"][i, j] = design.kappa > 0.0
            if report.j1 is not None:
                masks["j1_neg"][i, j] = report.j1 < 0.0
                masks["j2_neg"][i, j] = report.j2 < 0.0
                masks["det_pos"][i, j] = report.j1 * report.j2 - 1.0 > 0.0
    return ScanResult(r_values, omega_values, masks, invalid, case_tags)
