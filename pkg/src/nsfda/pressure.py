"""Sparse symmetric pressure systems and a Jacobi-preconditioned CG solver."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int, step: Optional[int] = None):
        super().__init__(f"{message} (best residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations
        self.step = step


@dataclass
class SparseSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray
    scale: float = 1.0          # row scaling already applied to matrix and rhs

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_triples(cls, n: int, triples, rhs) -> "SparseSystem":
        r, c, v = zip(*triples) if triples else ((), (), ())
        rows, cols = np.asarray(r, dtype=int), np.asarray(c, dtype=int)
        A = sp.coo_matrix((np.asarray(v, dtype=float), (rows, cols)), shape=(n, n)).tocsr()
        return cls(A, np.asarray(rhs, dtype=float))

    def triples(self):
        coo = self.matrix.tocoo()
        return list(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    def scaled(self, factor: float) -> "SparseSystem":
        return SparseSystem((self.matrix * factor).tocsr(), self.rhs * factor, self.scale * factor)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        diff = self.matrix - self.matrix.T
        return diff.nnz == 0 or np.abs(diff.data).max() <= tol

    def dump_csv(self, triples_path, rhs_path):
        with open(triples_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "value"])
            w.writerows((r, c, repr(v)) for r, c, v in self.triples())
        with open(rhs_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "value"])
            w.writerows((i, repr(float(b))) for i, b in enumerate(self.rhs))


@dataclass
class SolveStats:
    iterations: int
    residual: float
    bound: float


def normalize_sign(system: SparseSystem, h: float) -> SparseSystem:
    """Scale rows by -h^2 so the diagonal of a discrete Laplacian is positive."""
    return system.scaled(-h * h)


def solve(system: SparseSystem, tol: float = 1e-12, max_iter: Optional[int] = None,
          x0: Optional[np.ndarray] = None) -> tuple[np.ndarray, SolveStats]:
    """Preconditioned CG; guarantees ``|Ax - b| <= tol * max(1, |b|)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, b = system.matrix, system.rhs
    n = A.shape[0]
    if max_iter is None:
        max_iter = 10 * n
    if not system.is_symmetric(tol=1e-14 * max(1.0, abs(A).max())):
        raise ValueError("matrix is not symmetric")
    diag = A.diagonal()
    if np.any(diag == 0):
        raise ValueError("zero on the diagonal")
    sign = -1.0 if np.all(diag < 0) else 1.0
    inv_d = 1.0 / (sign * diag)
    bound = tol * max(1.0, float(np.linalg.norm(b)))

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A @ x
    res = float(np.linalg.norm(r))
    best = (res, x.copy())
    if res <= bound:
        return x, SolveStats(0, res, bound)
    # work on sign*A, which is positive definite for our systems
    r = sign * r
    z = inv_d * r
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        Ap = sign * (A @ p)
        pAp = float(p @ Ap)
        if pAp <= 0:
            break
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        if it % 50 == 0:
            r = sign * (b - A @ x)      # guard against drift of the recursive residual
        res = float(np.linalg.norm(r))
        if not np.isfinite(res):
            break
        if res < best[0]:
            best = (res, x.copy())
        if res <= bound:
            true_res = float(np.linalg.norm(b - A @ x))
            if true_res <= bound:
                return x, SolveStats(it, true_res, bound)
            r = sign * (b - A @ x)
        z = inv_d * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverError("CG did not converge", best[0], it if max_iter else 0)
