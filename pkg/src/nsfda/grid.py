"""Uniform grid on [0, pi]^2, ghosted scalar fields and time-level state."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

GHOST = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    m: int
    h: float
    tau: float
    n_steps: int
    t_f: float
    re: float
    advisories: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        """Array extent per direction: nodes -1 .. m+2."""
        return self.m + 2 * GHOST

    @property
    def lo(self) -> int:
        return 1 - GHOST

    @property
    def hi(self) -> int:
        return self.m + GHOST

    def node_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """x, y of every ghosted node as (size, size) arrays indexed [j, k]."""
        idx = np.arange(self.lo, self.hi + 1) * self.h
        return np.meshgrid(idx, idx, indexing="ij")

    @property
    def interior(self) -> tuple[slice, slice]:
        s = slice(GHOST, GHOST + self.m)
        return s, s


def make_grid(m: int, n_steps: int, t_f: float, re: float, tau: Optional[float] = None) -> GridSpec:
    """Grid with h = pi/(m+1) and tau = t_f/n_steps unless ``tau`` is given.

    ``n_steps == 0`` is accepted for the degenerate run that never steps.
    """
    if not isinstance(m, (int, np.integer)) or m < 3:
        raise ConfigError(f"m={m!r}: need an integer m >= 3 for the 5x5 stencil")
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 0:
        raise ConfigError(f"n_steps={n_steps!r}: need a nonnegative integer")
    if not (re > 0 and math.isfinite(re)):
        raise ConfigError(f"re={re!r}: need a positive Reynolds number")
    if not (t_f >= 0 and math.isfinite(t_f)):
        raise ConfigError(f"t_f={t_f!r}: need a nonnegative final time")
    h = math.pi / (m + 1)
    if tau is None:
        if n_steps == 0:
            tau = 0.0
        else:
            if t_f <= 0:
                raise ConfigError("t_f must be positive when stepping")
            tau = t_f / n_steps
    elif not (tau > 0 and math.isfinite(tau)):
        raise ConfigError(f"tau={tau!r}: need a positive time step")
    else:
        t_f = tau * n_steps
    notes = []
    if tau > re * h * h / 4:
        notes.append(f"tau={tau:g} exceeds the diffusive bound Re*h^2/4={re * h * h / 4:g}")
    if tau > h:
        notes.append(f"tau={tau:g} exceeds the advective bound h={h:g}")
    return GridSpec(int(m), h, float(tau), int(n_steps), float(t_f), float(re), tuple(notes))


def coords(spec: GridSpec, j: int, k: int, n: int) -> tuple[float, float, float]:
    if not (spec.lo <= j <= spec.hi and spec.lo <= k <= spec.hi):
        raise IndexError(f"node ({j}, {k}) outside the ghosted range {spec.lo}..{spec.hi}")
    if n < 0:
        raise IndexError(f"time level {n} is negative")
    return j * spec.h, k * spec.h, n * spec.tau


@dataclass
class Field:
    """One grid function with two ghost rings; ``field[j, k]`` uses grid indices."""

    spec: GridSpec
    values: np.ndarray = None

    def __post_init__(self):
        if self.values is None:
            self.values = np.zeros((self.spec.size, self.spec.size))
        elif self.values.shape != (self.spec.size, self.spec.size):
            raise ValueError(f"values shape {self.values.shape} does not match the grid")

    def _index(self, j, k):
        lo, hi = self.spec.lo, self.spec.hi
        if not (lo <= j <= hi and lo <= k <= hi):
            raise IndexError(f"node ({j}, {k}) outside {lo}..{hi}")
        return j - lo, k - lo

    def __getitem__(self, jk):
        return self.values[self._index(*jk)]

    def __setitem__(self, jk, value):
        self.values[self._index(*jk)] = value

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.spec.interior]

    def copy(self) -> "Field":
        return Field(self.spec, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())


def boundary_mask(spec: GridSpec) -> np.ndarray:
    """True on ghost and boundary nodes, False on the m x m interior."""
    mask = np.ones((spec.size, spec.size), dtype=bool)
    mask[spec.interior] = False
    return mask


@dataclass
class State:
    u: Field
    v: Field
    p: Field
    level: int = 0

    def __post_init__(self):
        if not (self.u.spec is self.v.spec is self.p.spec):
            if not (self.u.spec == self.v.spec == self.p.spec):
                raise ValueError("u, v, p must share one grid")

    @property
    def spec(self) -> GridSpec:
        return self.u.spec

    def field(self, which: str) -> Field:
        return {"u": self.u, "v": self.v, "p": self.p}[which]

    @property
    def time(self) -> float:
        return self.level * self.spec.tau

    def copy(self) -> "State":
        return State(self.u.copy(), self.v.copy(), self.p.copy(), self.level)


def fill_exact(fld: Field, which: str, t: float, sol, region: str = "boundary") -> Field:
    """Overwrite ghost+boundary (``region="boundary"``) or all (``"everywhere"``) entries."""
    x, y = fld.spec.node_coords()
    exact = sol.eval(which, x, y, t)
    if region == "everywhere":
        fld.values[...] = exact
    elif region == "boundary":
        mask = boundary_mask(fld.spec)
        fld.values[mask] = exact[mask]
    else:
        raise ValueError(f"unknown region {region!r}")
    return fld


def exact_state(spec: GridSpec, sol, level: int = 0) -> State:
    t = level * spec.tau
    fields = [fill_exact(Field(spec), w, t, sol, "everywhere") for w in "uvp"]
    return State(*fields, level=level)
