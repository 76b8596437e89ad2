import numpy as np
import pytest
import sympy as sp

from nsfda.consistency.taylor import taylor_limit
from nsfda.algebra.fda import raw_equations
from nsfda.exact import ExactSolution
from nsfda.grid import Field, State, exact_state, fill_exact, make_grid
from nsfda.harness import pressure_step
from nsfda.schemes import (InstabilityError, assemble_pressure, compile_stencil, evaluate,
                           residual_e1, step_velocity)
from nsfda.stencils import (SchemeId, _at, central_x, central_y, scheme_def, second_x, second_y)


def _state_from(spec, funcs, t=0.0, level=0):
    x, y = spec.node_coords()
    fields = [Field(spec, np.broadcast_to(np.asarray(funcs[w](x, y, t), float), x.shape).copy())
              for w in "uvp"]
    return State(*fields, level=level)


def test_residual_e1_constants_and_linear():
    g = make_grid(8, 1, 1.0, 1.0)
    const = _state_from(g, {"u": lambda x, y, t: 2.5, "v": lambda x, y, t: -1.0, "p": lambda x, y, t: 0})
    lin = _state_from(g, {"u": lambda x, y, t: x, "v": lambda x, y, t: 0 * x, "p": lambda x, y, t: 0})
    for s in SchemeId:
        assert residual_e1(s, const, 3, 4) == 0.0
        assert residual_e1(s, lin, 2, 5) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(IndexError):
        residual_e1(SchemeId.FDA1, lin, 0, 3)


def test_residual_e1_vanishes_on_exact_data():
    # sin(h)/h factors of the two central differences cancel exactly
    sol = ExactSolution(1e5)
    st = exact_state(make_grid(50, 1, 1.0, 1e5), sol)
    assert max(abs(residual_e1(1, st, j, k)) for j in range(1, 51) for k in range(1, 51)) < 1e-13


def test_residual_e1_second_order_refinement():
    f = {"u": lambda x, y, t: np.sin(x) * np.sin(y), "v": lambda x, y, t: 0 * x,
         "p": lambda x, y, t: 0 * x}
    r = []
    for m in (25, 51):
        st = _state_from(make_grid(m, 1, 1.0, 1e5), f)
        exact = np.cos(st.spec.node_coords()[0]) * np.sin(st.spec.node_coords()[1])
        num = np.array([[residual_e1(2, st, j, k) for k in range(1, m + 1)] for j in range(1, m + 1)])
        r.append(np.abs(num - exact[st.spec.interior]).max())
    assert r[0] / r[1] == pytest.approx(4.0, rel=0.05)


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_central_difference_exact_on_quadratics(degree):
    g = make_grid(6, 1, 1.0, 1.0)
    rng = np.random.default_rng(degree)
    a = rng.normal(size=3)
    f = lambda x, y, t: a[0] + a[1] * x ** degree + a[2] * y ** degree  # noqa: E731
    st = _state_from(g, {"u": f, "v": f, "p": f})
    x, y = g.node_coords()
    xi, yi = x[g.interior], y[g.interior]
    dx = evaluate(compile_stencil(central_x(_at("u")), g), g, {0: st})
    dy = evaluate(compile_stencil(central_y(_at("u")), g), g, {0: st})
    np.testing.assert_allclose(dx, a[1] * degree * xi ** max(degree - 1, 0) * (degree > 0), atol=1e-11)
    np.testing.assert_allclose(dy, a[2] * degree * yi ** max(degree - 1, 0) * (degree > 0), atol=1e-11)


@pytest.mark.parametrize("step", [1, 2])
def test_second_difference_exact_on_cubics(step):
    g = make_grid(7, 1, 1.0, 1.0)
    f = lambda x, y, t: x ** 3 - 2 * x * y + 3 * y ** 3 + y ** 2  # noqa: E731
    st = _state_from(g, {"u": f, "v": f, "p": f})
    x, y = g.node_coords()
    xi, yi = x[g.interior], y[g.interior]
    lap = evaluate(compile_stencil(second_x(_at("p"), step) + second_y(_at("p"), step), g), g, {0: st})
    np.testing.assert_allclose(lap, 6 * xi + 18 * yi + 2, atol=1e-9)


def test_zero_state_stays_zero():
    class Zero:
        def eval(self, which, x, y, t):
            return 0 * x
    g = make_grid(6, 2, 1.0, 1.0)
    st = State(Field(g), Field(g), Field(g))
    for s in SchemeId:
        u, v = step_velocity(s, st, Zero())
        assert not u.values.any() and not v.values.any()


def test_single_step_fda1_tracks_exact_solution():
    re = 1e5
    g = make_grid(50, 10, 1.0, re)
    sol = ExactSolution(re)
    u, v = step_velocity(SchemeId.FDA1, exact_state(g, sol), sol)
    ref = exact_state(g, sol, 1)
    assert np.abs(u.interior - ref.u.interior).max() < 1e-7
    assert np.abs(v.interior - ref.v.interior).max() < 1e-7


def test_fda2_and_fda3_steps_coincide():
    g = make_grid(20, 5, 1.0, 100.0)
    sol = ExactSolution(100.0)
    st = exact_state(g, sol)
    a, b = step_velocity(SchemeId.FDA2, st, sol), step_velocity(SchemeId.FDA3, st, sol)
    assert np.array_equal(a[0].values, b[0].values) and np.array_equal(a[1].values, b[1].values)


def test_boundary_filled_at_new_level():
    g = make_grid(10, 4, 1.0, 10.0)
    sol = ExactSolution(10.0)
    u, _ = step_velocity(SchemeId.FDA2, exact_state(g, sol), sol)
    ref = fill_exact(Field(g), "u", g.tau, sol, "everywhere")
    assert u.values[0, 3] == ref.values[0, 3] and u.values[-1, -1] == ref.values[-1, -1]


def test_instability_is_reported():
    g = make_grid(6, 1, 1.0, 1.0)
    sol = ExactSolution(1.0)
    st = exact_state(g, sol)
    st.u.values[4, 4] = np.inf
    with pytest.raises(InstabilityError) as info:
        step_velocity(SchemeId.FDA2, st, sol)
    assert info.value.scheme is SchemeId.FDA2 and info.value.n == 0


def _row(A, m, j, k):
    r = (j - 1) * m + (k - 1)
    row = A.getrow(r)
    return {(int(c) // m + 1 - j, int(c) % m + 1 - k): val for c, val in zip(row.indices, row.data)}


def test_pressure_rows():
    m = 9
    g = make_grid(m, 1, 1.0, 1.0)
    sol = ExactSolution(1.0)
    st = exact_state(g, sol)
    h2 = g.h ** 2
    A, _ = assemble_pressure(SchemeId.FDA2, st.u, st.v, 0.0, sol)
    row = _row(A, m, 5, 5)
    assert row[(0, 0)] == pytest.approx(-4 / h2)
    for off in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        assert row[off] == pytest.approx(1 / h2)
    assert len(row) == 5
    A, _ = assemble_pressure(SchemeId.FDA1, st.u, st.v, 0.0, sol)
    row = _row(A, m, 5, 5)
    assert row[(0, 0)] == pytest.approx(-1 / h2)
    for off in ((2, 0), (-2, 0), (0, 2), (0, -2)):
        assert row[off] == pytest.approx(1 / (4 * h2))
    assert len(row) == 5


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_pressure_matrix_symmetric_and_dominant(scheme):
    g = make_grid(8, 1, 1.0, 1.0)
    sol = ExactSolution(1.0)
    st = exact_state(g, sol)
    A, _ = assemble_pressure(scheme, st.u, st.v, 0.0, sol)
    assert abs(A - A.T).max() == 0
    d = np.abs(A.diagonal())
    off = np.asarray(abs(A).sum(axis=1)).ravel() - d
    assert np.all(d >= off - 1e-9)


def test_pressure_zero_data_gives_zero():
    class Zero:
        def eval(self, which, x, y, t):
            return 0 * x
    g = make_grid(7, 1, 1.0, 1.0)
    p, stats = pressure_step(SchemeId.FDA2, Field(g), Field(g), 0.0, Zero(), Field(g))
    assert not p.values.any() and stats.iterations == 0


# smooth non-solution fields: the discrete equations converge to their symbolic limits
X, Y, T = sp.symbols("x y t")
TEST_FIELDS = {"u": sp.sin(X + 2 * Y) * sp.cos(T) + X * Y,
               "v": sp.cos(X - Y) * sp.exp(T / 3),
               "p": sp.sin(X) * sp.sin(2 * Y) + T * X}


def _jet_values(limit, x, y, t):
    vals = {}
    for v in limit.variables():
        a, b, c = v.deriv
        expr = sp.diff(TEST_FIELDS[v.indet], X, a, Y, b, T, c) if any(v.deriv) else TEST_FIELDS[v.indet]
        vals[v] = np.broadcast_to(sp.lambdify((X, Y, T), expr, "numpy")(x, y, t), x.shape)
    return vals


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_discrete_equations_converge_to_symbolic_limits(scheme):
    re = 3.0
    fns = {w: sp.lambdify((X, Y, T), e, "numpy") for w, e in TEST_FIELDS.items()}
    eqs = scheme_def(scheme).equations
    limits = [taylor_limit(e).limit for e in raw_equations(scheme)]
    errs = []
    for m in (15, 31):
        g = make_grid(m, 1, 1.0, re, tau=np.pi / (m + 1))
        levels = {0: _state_from(g, fns, 0.0), 1: _state_from(g, fns, g.tau, 1)}
        x, y = g.node_coords()
        xi, yi = x[g.interior], y[g.interior]
        row = []
        for e, lim in zip(eqs, limits):
            num = evaluate(compile_stencil(e, g), g, levels)
            ref = lim.evaluate(_jet_values(lim, xi, yi, 0.0 * xi), re)
            row.append(np.abs(num - ref).max())
        errs.append(row)
    rates = np.log2(np.array(errs[0]) / np.array(errs[1]))
    assert np.all(rates >= 0.9), rates
