"""Decaying vortex solution of the 2D incompressible Navier-Stokes equations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class ExactSolution:
    re: float

    def decay(self, t):
        return np.exp(-2.0 * t / self.re)

    def eval(self, which: str, x, y, t):
        if which == "u":
            return -self.decay(t) * np.cos(x) * np.sin(y)
        if which == "v":
            return self.decay(t) * np.sin(x) * np.cos(y)
        if which == "p":
            return -self.decay(t) ** 2 * (np.cos(2 * x) + np.cos(2 * y)) / 4
        raise ValueError(f"unknown field {which!r}")

    def derivatives(self, x, y, t) -> dict[str, float]:
        """Hand-derived partial derivatives needed by the four residuals."""
        E = self.decay(t)
        cx, sx, cy, sy = np.cos(x), np.sin(x), np.cos(y), np.sin(y)
        d = {
            "u": -E * cx * sy, "v": E * sx * cy,
            "u_x": E * sx * sy, "u_y": -E * cx * cy,
            "v_x": E * cx * cy, "v_y": -E * sx * sy,
            "u_xx": E * cx * sy, "u_yy": E * cx * sy,
            "v_xx": -E * sx * cy, "v_yy": -E * sx * cy,
            "u_t": (2.0 / self.re) * E * cx * sy,
            "v_t": -(2.0 / self.re) * E * sx * cy,
            "p_x": E * E * np.sin(2 * x) / 2, "p_y": E * E * np.sin(2 * y) / 2,
            "p_xx": E * E * np.cos(2 * x), "p_yy": E * E * np.cos(2 * y),
        }
        return d

    def residuals(self, x, y, t) -> tuple[float, float, float, float]:
        d = self.derivatives(x, y, t)
        r = 1.0 / self.re
        f1 = d["u_x"] + d["v_y"]
        f2 = d["u_t"] + d["u"] * d["u_x"] + d["v"] * d["u_y"] + d["p_x"] - r * (d["u_xx"] + d["u_yy"])
        f3 = d["v_t"] + d["u"] * d["v_x"] + d["v"] * d["v_y"] + d["p_y"] - r * (d["v_xx"] + d["v_yy"])
        f4 = d["u_x"] ** 2 + 2 * d["v_x"] * d["u_y"] + d["v_y"] ** 2 + d["p_xx"] + d["p_yy"]
        return f1, f2, f3, f4


def residual_check(sol: ExactSolution, sample_points: Iterable[tuple[float, float, float]]) -> float:
    """Max |f_i| over the sample points; 0 for an empty sample."""
    pts = np.asarray(list(sample_points), dtype=float)
    if pts.size == 0:
        return 0.0
    res = sol.residuals(pts[:, 0], pts[:, 1], pts[:, 2])
    return float(max(np.max(np.abs(r)) for r in res))
