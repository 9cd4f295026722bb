"""Independent free-body formulation used as a test oracle.

Newton's law for the slider in the two slit directions plus the angular
balance of the top disc, with the slit reaction force R1 kept as an
unknown and eliminated numerically. The friction force acts normal to
the wheel plane: components -F*cos(gamma) across the slit and
+F*sin(gamma) along it. Solving the linear system for the accelerations
and applying the time rescale must reproduce the reduced field.
"""

import math

import numpy as np


def freebody_field(x, F, M, p):
    """Reduced rescaled field obtained by numeric elimination of R1."""
    r, v, w = x
    sg, cg = math.sin(p.gamma), math.cos(p.gamma)
    R2 = -p.k2 * (r - p.r0) - p.c2 * v
    # unknowns: (r_dd, phi_dd, R1)
    A = np.array(
        [
            [0.0, -p.m * r, -1.0],
            [p.m, -p.m * p.d, 0.0],
            [0.0, p.beta**2 * p.m, -r],
        ]
    )
    b = np.array(
        [
            -p.m * p.d * w * w + 2.0 * p.m * v * w - F * cg,
            p.m * r * w * w + R2 + F * sg,
            -p.c1 * w + p.d * R2 + M,
        ]
    )
    r_dd, phi_dd, _R1 = np.linalg.solve(A, b)
    scale = p.m * (p.beta**2 + r * r)
    return np.array([scale * v, scale * r_dd, scale * phi_dd])
