"""Numeric evaluation of the FDA stencils: continuity residual, explicit velocity
update and pressure-equation assembly."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exact import ExactSolution
from .grid import GHOST, Field, GridSpec, State, fill_exact
from .stencils import SchemeId, Stencil, scheme_def


class InstabilityError(RuntimeError):
    def __init__(self, scheme: SchemeId, n: int, j: int, k: int):
        self.scheme, self.n, self.j, self.k = scheme, n, j, k
        super().__init__(f"{scheme.name}: non-finite value at step {n}, node ({j}, {k})")


@dataclass(frozen=True)
class CompiledTerm:
    coeff: float
    factors: tuple[tuple[str, tuple[int, int, int]], ...]


def compile_stencil(stencil: Stencil, spec: GridSpec) -> list[CompiledTerm]:
    return [CompiledTerm(t.coefficient_value(spec.h, spec.tau, spec.re), t.factors) for t in stencil]


def _window(spec: GridSpec, dj: int, dk: int):
    m = spec.m
    return slice(GHOST + dj, GHOST + dj + m), slice(GHOST + dk, GHOST + dk + m)


def evaluate(terms, spec: GridSpec, levels: dict[int, State]) -> np.ndarray:
    """Sum of the compiled terms on the m x m interior."""
    out = np.zeros((spec.m, spec.m))
    with np.errstate(over="ignore", invalid="ignore"):
        _accumulate(out, terms, spec, levels)
    return out


def _accumulate(out, terms, spec, levels):
    for t in terms:
        val = np.full((spec.m, spec.m), t.coeff)
        for which, (dj, dk, dn) in t.factors:
            val = val * levels[dn].field(which).values[_window(spec, dj, dk)]
        out += val


def residual_e1_field(scheme, state: State) -> np.ndarray:
    sdef = scheme_def(scheme)
    return evaluate(compile_stencil(sdef.e1, state.spec), state.spec, {0: state})


def residual_e1(scheme, state: State, j: int, k: int) -> float:
    m = state.spec.m
    if not (1 <= j <= m and 1 <= k <= m):
        raise IndexError(f"({j}, {k}) is not an interior node")
    return float(residual_e1_field(scheme, state)[j - 1, k - 1])


def _split_unknown(stencil: Stencil, which: str):
    """Separate the coefficient of ``which`` at (0, 0, n+1) from the rest."""
    lead, rest = [], []
    for t in stencil:
        if any(off[2] == 1 for _, off in t.factors):
            if t.factors != ((which, (0, 0, 1)),):
                raise ValueError(f"level n+1 enters nonlinearly or off-node: {t}")
            lead.append(t)
        else:
            rest.append(t)
    if not lead:
        raise ValueError(f"no level n+1 term for {which}")
    return Stencil(lead), Stencil(rest)


def step_velocity(scheme, state: State, sol: ExactSolution) -> tuple[Field, Field]:
    """Advance u, v one step by solving e2 = 0 and e3 = 0 for the level n+1 values."""
    scheme = SchemeId.parse(scheme)
    sdef = scheme_def(scheme)
    spec = state.spec
    t_next = (state.level + 1) * spec.tau
    out = []
    for which, eq in (("u", sdef.e2), ("v", sdef.e3)):
        lead, rest = _split_unknown(eq, which)
        a = sum(t.coefficient_value(spec.h, spec.tau, spec.re) for t in lead)
        r = evaluate(compile_stencil(rest, spec), spec, {0: state})
        nxt = state.field(which).copy()
        nxt.values[spec.interior] = -r / a
        _check_finite(nxt, scheme, state.level)
        fill_exact(nxt, which, t_next, sol, "boundary")
        out.append(nxt)
    return out[0], out[1]


def _check_finite(fld: Field, scheme: SchemeId, n: int):
    check_finite(fld.interior, scheme, n)


def check_finite(interior: np.ndarray, scheme, n: int):
    """Raise InstabilityError at the first non-finite interior entry."""
    bad = ~np.isfinite(interior)
    if bad.any():
        j, k = np.argwhere(bad)[0]
        raise InstabilityError(SchemeId.parse(scheme), n, int(j) + 1, int(k) + 1)


def assemble_pressure(scheme, u: Field, v: Field, t: float,
                      sol: ExactSolution) -> tuple[sp.csr_matrix, np.ndarray]:
    """Matrix and right-hand side of e4 = 0 for the interior pressures at time t.

    Row ``(j-1)*m + (k-1)`` is node (j, k). Pressure references outside the
    interior and every velocity-only term go to the right-hand side.
    """
    sdef = scheme_def(scheme)
    spec = u.spec
    m = spec.m
    p_terms, v_terms = [], []
    for term in sdef.e4:
        whichs = [w for w, _ in term.factors]
        if "p" in whichs:
            if term.factors[0][0] != "p" or len(term.factors) != 1:
                raise ValueError(f"pressure enters nonlinearly: {term}")
            p_terms.append(term)
        else:
            v_terms.append(term)
    state = State(u, v, Field(spec), 0)
    rhs = -evaluate(compile_stencil(Stencil(v_terms), spec), spec, {0: state}).ravel()

    p_exact = fill_exact(Field(spec), "p", t, sol, "everywhere").values
    jj, kk = np.meshgrid(np.arange(1, m + 1), np.arange(1, m + 1), indexing="ij")
    rows_all = ((jj - 1) * m + (kk - 1)).ravel()
    rows, cols, vals = [], [], []
    for term in p_terms:
        c = term.coefficient_value(spec.h, spec.tau, spec.re)
        dj, dk, _ = term.factors[0][1]
        nj, nk = jj + dj, kk + dk
        inside = ((nj >= 1) & (nj <= m) & (nk >= 1) & (nk <= m)).ravel()
        rows.append(rows_all[inside])
        cols.append(((nj - 1) * m + (nk - 1)).ravel()[inside])
        vals.append(np.full(inside.sum(), c))
        outside = ~inside
        # exact values at the out-of-interior neighbours
        ext = p_exact[nj - spec.lo, nk - spec.lo].ravel()
        rhs[outside] -= c * ext[outside]
    A = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(m * m, m * m)).tocsr()
    A.sum_duplicates()
    return A, rhs
