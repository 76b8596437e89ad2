import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st

from nsfda.exact import ExactSolution
from nsfda.grid import exact_state, make_grid
from nsfda.pressure import SolverError, SparseSystem, normalize_sign, solve
from nsfda.schemes import assemble_pressure
from nsfda.stencils import SchemeId


def gauss_solve(A, b):
    """Dense Gaussian elimination with partial pivoting (test oracle)."""
    M = np.array(A, dtype=float)
    x = np.array(b, dtype=float)
    n = len(x)
    for c in range(n):
        piv = c + int(np.argmax(np.abs(M[c:, c])))
        if M[piv, c] == 0:
            raise np.linalg.LinAlgError("singular")
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
            x[[c, piv]] = x[[piv, c]]
        f = M[c + 1:, c] / M[c, c]
        M[c + 1:, c:] -= np.outer(f, M[c, c:])
        x[c + 1:] -= f * x[c]
    for c in range(n - 1, -1, -1):
        x[c] = (x[c] - M[c, c + 1:] @ x[c + 1:]) / M[c, c]
    return x


def test_oracle_against_numpy():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(6, 6)) + 6 * np.eye(6)
    b = rng.normal(size=6)
    np.testing.assert_allclose(gauss_solve(A, b), np.linalg.solve(A, b), atol=1e-12)


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=20))
def test_identity(b):
    n = len(b)
    x, stats = solve(SparseSystem(sp.identity(n, format="csr"), np.array(b)))
    np.testing.assert_allclose(x, b, atol=1e-12 * max(1.0, np.linalg.norm(b)))


def test_zero_rhs():
    A = sp.diags([[-1.0] * 8, [2.0] * 9, [-1.0] * 8], [-1, 0, 1], format="csr")
    x, stats = solve(SparseSystem(A, np.zeros(9)))
    assert not x.any() and stats.iterations == 0


@pytest.mark.parametrize("scheme", list(SchemeId))
@pytest.mark.parametrize("m", [3, 7, 12])
def test_agrees_with_dense_oracle(scheme, m):
    re = 50.0
    g = make_grid(m, 1, 1.0, re)
    sol = ExactSolution(re)
    s = exact_state(g, sol)
    A, b = assemble_pressure(scheme, s.u, s.v, 0.3, sol)
    system = normalize_sign(SparseSystem(A, b), g.h)
    x, stats = solve(system)
    ref = gauss_solve(system.matrix.toarray(), system.rhs)
    assert np.abs(x - ref).max() <= 1e-10
    assert np.linalg.norm(system.matrix @ x - system.rhs) <= 1e-12 * max(1.0, np.linalg.norm(system.rhs))


def test_recovers_harmonic_pressure():
    class Harmonic:
        def eval(self, which, x, y, t):
            return x * x - y * y + 3 * x * y if which == "p" else 0 * x
    m = 11
    g = make_grid(m, 1, 1.0, 1.0)
    sol = Harmonic()
    s = exact_state(g, sol)
    A, b = assemble_pressure(SchemeId.FDA2, s.u, s.v, 0.0, sol)
    x, _ = solve(normalize_sign(SparseSystem(A, b), g.h))
    np.testing.assert_allclose(x.reshape(m, m), s.p.interior, atol=1e-10)


def test_scaling_makes_diagonal_positive():
    g = make_grid(5, 1, 1.0, 1.0)
    sol = ExactSolution(1.0)
    s = exact_state(g, sol)
    A, b = assemble_pressure(SchemeId.FDA1, s.u, s.v, 0.0, sol)
    system = normalize_sign(SparseSystem(A, b), g.h)
    assert np.all(system.matrix.diagonal() > 0)
    assert system.scale == pytest.approx(-g.h ** 2)


def test_nonconvergence_reports_best_residual():
    A = sp.diags([[-1.0] * 29, [2.0] * 30, [-1.0] * 29], [-1, 0, 1], format="csr")
    with pytest.raises(SolverError) as info:
        solve(SparseSystem(A, np.ones(30)), max_iter=2)
    assert info.value.residual > 0 and info.value.iterations == 2


def test_rejects_bad_input():
    A = sp.csr_matrix(np.array([[2.0, 1.0], [0.0, 2.0]]))
    with pytest.raises(ValueError):
        solve(SparseSystem(A, np.ones(2)))
    with pytest.raises(ValueError):
        solve(SparseSystem(sp.identity(2, format="csr"), np.ones(2)), tol=0)


def test_csv_dump_round_trip(tmp_path):
    A = sp.csr_matrix(np.array([[4.0, -1.0], [-1.0, 4.0]]))
    sys_ = SparseSystem(A, np.array([1.0, 2.0]))
    sys_.dump_csv(tmp_path / "a.csv", tmp_path / "b.csv")
    rows = np.loadtxt(tmp_path / "a.csv", delimiter=",", skiprows=1)
    rhs = np.loadtxt(tmp_path / "b.csv", delimiter=",", skiprows=1)[:, 1]
    back = SparseSystem.from_triples(2, [tuple(r) for r in rows], rhs)
    assert (back.matrix != A).nnz == 0
    np.testing.assert_array_equal(back.rhs, sys_.rhs)
