"""Time stepping driver, error metrics, sweeps and figure presets."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .exact import ExactSolution
from .grid import Field, State, exact_state, fill_exact, make_grid
from .pressure import SolverError, SparseSystem, normalize_sign, solve
from .schemes import assemble_pressure, check_finite, residual_e1_field, step_velocity
from .stencils import SchemeId

log = logging.getLogger(__name__)

CSV_HEADER = ("fda,m,n_steps,tau,re,tf,err_u,err_v,err_p,res_e1,runtime_s,solver_max_residual")


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: SchemeId
    m: int
    n_steps: int
    t_f: float = 1.0
    re: float = 1e5
    tau_override: Optional[float] = None
    solver_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "scheme", SchemeId.parse(self.scheme))

    def grid(self):
        return make_grid(self.m, self.n_steps, self.t_f, self.re, self.tau_override)


@dataclass
class SolverStep:
    step: int
    iterations: int
    residual: float


@dataclass
class ErrorReport:
    config: ExperimentConfig
    err_u: float
    err_v: float
    err_p: float
    res_e1: float
    runtime_s: float
    solver_stats: list[SolverStep] = field(default_factory=list)
    tau: float = 0.0
    t_f: float = 0.0
    error: Optional[str] = None     # set when a sweep row failed

    @property
    def max_error(self) -> float:
        return max(self.err_u, self.err_v, self.err_p)

    @property
    def solver_max_residual(self) -> float:
        return max((s.residual for s in self.solver_stats), default=0.0)

    def csv_row(self) -> list[str]:
        c = self.config
        vals = [c.scheme.value, c.m, c.n_steps, self.tau, c.re, self.t_f, self.err_u, self.err_v,
                self.err_p, self.res_e1, self.runtime_s, self.solver_max_residual]
        return [str(v) if isinstance(v, int) else repr(float(v)) for v in vals]


@dataclass
class RunResult:
    report: ErrorReport
    state: State
    sol: ExactSolution


def relative_error(fld: Field, which: str, t: float, sol: ExactSolution) -> np.ndarray:
    exact = fill_exact(Field(fld.spec), which, t, sol, "everywhere").values
    return np.abs(fld.values - exact) / (1.0 + np.abs(exact))


def error_field(state: State, sol: ExactSolution) -> tuple[Field, Field, Field]:
    """Pointwise |g - g_exact| / (1 + |g_exact|) for g = u, v, p."""
    return tuple(Field(state.spec, relative_error(state.field(w), w, state.time, sol)) for w in "uvp")


def pressure_step(scheme, u: Field, v: Field, t: float, sol: ExactSolution, previous: Field,
                  tol: float = 1e-12, step: int = 0):
    spec = u.spec
    A, b = assemble_pressure(scheme, u, v, t, sol)
    check_finite(b.reshape(spec.m, spec.m), scheme, step)
    system = normalize_sign(SparseSystem(A, b), spec.h)
    x, stats = solve(system, tol=tol, max_iter=10 * spec.m ** 2, x0=previous.interior.ravel())
    p = Field(spec)
    p.values[spec.interior] = x.reshape(spec.m, spec.m)
    fill_exact(p, "p", t, sol, "boundary")
    return p, stats


def simulate(config: ExperimentConfig) -> RunResult:
    spec = config.grid()
    for note in spec.advisories:
        log.info("%s m=%d: %s", config.scheme.name, config.m, note)
    sol = ExactSolution(spec.re)
    start = time.perf_counter()
    state = exact_state(spec, sol, 0)
    stats = []
    for n in range(spec.n_steps):
        u, v = step_velocity(config.scheme, state, sol)
        t_next = (n + 1) * spec.tau
        try:
            p, st = pressure_step(config.scheme, u, v, t_next, sol, state.p, config.solver_tol, n)
        except SolverError as exc:
            raise SolverError(f"{config.scheme.name} pressure solve at step {n}",
                              exc.residual, exc.iterations, step=n) from exc
        stats.append(SolverStep(n, st.iterations, st.residual))
        state = State(u, v, p, n + 1)
    errs = [float(e.interior.max()) for e in error_field(state, sol)]
    res = float(np.abs(residual_e1_field(config.scheme, state)).max())
    runtime = time.perf_counter() - start
    report = ErrorReport(config, *errs, res, runtime, stats, spec.tau, spec.n_steps * spec.tau)
    return RunResult(report, state, sol)


def run(config: ExperimentConfig) -> ErrorReport:
    return simulate(config).report


def _run_row(config: ExperimentConfig) -> ErrorReport:
    try:
        return run(config)
    except Exception as exc:       # recorded per row, the sweep keeps going
        nan = math.nan
        tau = config.tau_override or (config.t_f / config.n_steps if config.n_steps else 0.0)
        return ErrorReport(config, nan, nan, nan, nan, 0.0, [], tau, config.t_f,
                           error=f"{type(exc).__name__}: {exc}")


def sweep(configs: Sequence[ExperimentConfig], workers: int = 1) -> list[ErrorReport]:
    """One report per config in input order; failures are recorded in ``error``."""
    configs = list(configs)
    if not configs:
        raise ValueError("sweep needs at least one config")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_row, configs))
    return [_run_row(c) for c in configs]


def write_csv(reports: Sequence[ErrorReport], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        w = csv.writer(fh, lineterminator="\n")
        for r in reports:
            w.writerow(r.csv_row())


def grid_configs(schemes, ms, n_steps, t_f, re, tau=None) -> list[ExperimentConfig]:
    return [ExperimentConfig(SchemeId.parse(s), m, n_steps, t_f, re, tau) for s in schemes for m in ms]


def write_grid_csv(fld: Field, path) -> None:
    """Interior values, one row per j, columns k = 1..m."""
    np.savetxt(path, fld.interior, delimiter=",", fmt="%.17g")


def write_svg_heatmap(fld: Field, path, cell: int = 4, title: str = "") -> None:
    """Grey-scale raster of the interior; darker means larger. y points up."""
    data = fld.interior
    m = data.shape[0]
    hi = float(data.max()) if data.size else 0.0
    scale = (data / hi) if hi > 0 else np.zeros_like(data)
    w = m * cell
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w + 20}">',
             f'<text x="2" y="14" font-size="12">{title} max={hi:.3e}</text>']
    for j in range(m):
        for k in range(m):
            g = int(round(255 * (1.0 - scale[j, k])))
            y = 20 + (m - 1 - k) * cell
            parts.append(f'<rect x="{j * cell}" y="{y}" width="{cell}" height="{cell}" '
                         f'fill="rgb({g},{g},{g})"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


FIGURES = {
    1: dict(schemes=(1, 2, 3), ms=range(5, 55, 5), n_steps=10, t_f=1.0, re=1e5),
    2: dict(schemes=(1, 2, 3), ms=range(5, 55, 5), n_steps=10, t_f=1.0, re=1e5),
    3: dict(schemes=(1, 2, 3), ms=range(10, 110, 10), n_steps=40, t_f=1.0, re=100.0),
    4: dict(schemes=(1,), ms=(100,), n_steps=40, t_f=1.0, re=100.0),
}


def figure_configs(number: int) -> list[ExperimentConfig]:
    if number not in FIGURES:
        raise ValueError(f"no figure {number}")
    return grid_configs(**FIGURES[number])


def reproduce_figure(number: int, out_dir, workers: int = 1) -> list[ErrorReport]:
    """Write ``figureN.csv``; figure 4 also writes per-field error grids and SVGs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if number == 4:
        res = simulate(figure_configs(4)[0])
        for name, fld in zip("uvp", error_field(res.state, res.sol)):
            write_grid_csv(fld, out / f"figure4_err_{name}.csv")
            write_svg_heatmap(fld, out / f"figure4_err_{name}.svg", title=f"FDA1 error in {name}")
        reports = [res.report]
    else:
        reports = sweep(figure_configs(number), workers)
    write_csv(reports, out / f"figure{number}.csv")
    return reports


def convergence_slope(reports: Sequence[ErrorReport], last: int = 3) -> float:
    """Least-squares slope of log(max error) against log(h) over the last rows."""
    rows = sorted(reports, key=lambda r: r.config.m)[-last:]
    h = np.array([math.pi / (r.config.m + 1) for r in rows])
    e = np.array([r.max_error for r in rows])
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


def with_scheme(config: ExperimentConfig, scheme) -> ExperimentConfig:
    return replace(config, scheme=SchemeId.parse(scheme))
