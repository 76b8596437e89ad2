"""Differential polynomials in jet variables of u, v, p."""
from __future__ import annotations

from typing import NamedTuple

from ..algebra.params import ONE, ZERO, RE, as_text, param

Deriv = tuple[int, int, int]
VAR_RANK = {"p": 2, "u": 1, "v": 0}
_FE = type(ONE)


class JetVar(NamedTuple):
    indet: str
    deriv: Deriv = (0, 0, 0)

    def diff(self, axis: int, times: int = 1) -> "JetVar":
        d = list(self.deriv)
        d[axis] += times
        return JetVar(self.indet, tuple(d))

    @property
    def order(self) -> int:
        return sum(self.deriv)

    def __str__(self):
        a, b, c = self.deriv
        suffix = "x" * a + "y" * b + "t" * c
        return f"{self.indet}_{suffix}" if suffix else self.indet


def jet_key(v: JetVar):
    """Orderly ranking: t-order, then total order, then p > u > v, then x before y."""
    a, b, c = v.deriv
    return (c, a + b + c, VAR_RANK[v.indet], a, b)


def jmono(*factors):
    exps: dict[JetVar, int] = {}
    for f in factors:
        v, e = (f, 1) if isinstance(f, JetVar) else f
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def jmono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class DifferentialPolynomial:
    """Exact polynomial in jet variables with coefficients in Q(Re)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if type(c) is not _FE:
                    c = param(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, indet: str, deriv: Deriv = (0, 0, 0)):
        return cls({((JetVar(indet, tuple(deriv)), 1),): ONE})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return DifferentialPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, DifferentialPolynomial):
            c = param(other)
            return DifferentialPolynomial({m: a * c for m, a in self.terms.items()})
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = jmono_mul(ma, mb)
                out[m] = out.get(m, ZERO) + ca * cb
        return DifferentialPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = param(c)
        return DifferentialPolynomial({m: a / c for m, a in self.terms.items()})

    def __pow__(self, n: int):
        out = DifferentialPolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DifferentialPolynomial):
            try:
                other = _coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def variables(self) -> set[JetVar]:
        return {v for m in self.terms for v, _ in m}

    def order(self) -> int:
        return max((v.order for v in self.variables()), default=0)

    def diff(self, axis: int) -> "DifferentialPolynomial":
        """Total derivative along x (0), y (1) or t (2)."""
        out: dict = {}
        for m, c in self.terms.items():
            for i, (v, e) in enumerate(m):
                rest = dict(m)
                if e == 1:
                    del rest[v]
                else:
                    rest[v] = e - 1
                dv = v.diff(axis)
                rest[dv] = rest.get(dv, 0) + 1
                key = tuple(sorted(rest.items()))
                out[key] = out.get(key, ZERO) + c * e
        return DifferentialPolynomial(out)

    def derivative(self, mu: Deriv) -> "DifferentialPolynomial":
        out = self
        for axis, n in enumerate(mu):
            for _ in range(n):
                out = out.diff(axis)
        return out

    def leader(self) -> JetVar:
        return max(self.variables(), key=jet_key)

    def sorted_terms(self):
        def key(mc):
            return tuple(sorted(((jet_key(v), e) for v, e in mc[0]), reverse=True))
        return sorted(self.terms.items(), key=key, reverse=True)

    def scalar_ratio(self, other: "DifferentialPolynomial"):
        """``c`` with ``self == c * other``, or None."""
        if not other or set(self.terms) != set(other.terms):
            return None
        m0 = next(iter(other.terms))
        c = self.terms[m0] / other.terms[m0]
        if all(self.terms[m] == c * other.terms[m] for m in other.terms):
            return c
        return None

    def monic(self) -> "DifferentialPolynomial":
        if not self:
            return self
        return self / self.sorted_terms()[0][1]

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mt = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m) or "1"
            parts.append(f"({as_text(c)})*{mt}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DifferentialPolynomial({self.to_text()})"

    def evaluate(self, values: dict[JetVar, float], re: float) -> float:
        total = 0.0
        for m, c in self.terms.items():
            term = float(c.numer(re, 0, 0)) / float(c.denom(re, 0, 0))
            for v, e in m:
                term *= values[v] ** e
            total += term
        return total


def _coerce(x) -> DifferentialPolynomial:
    if isinstance(x, DifferentialPolynomial):
        return x
    return DifferentialPolynomial.const(x)


def jet(indet: str, spec: str = "") -> DifferentialPolynomial:
    """``jet("u", "xxy")`` is u_xxy."""
    return DifferentialPolynomial.var(indet, (spec.count("x"), spec.count("y"), spec.count("t")))


def navier_stokes() -> tuple[DifferentialPolynomial, ...]:
    """f1..f4: continuity, the two momentum equations, pressure Poisson."""
    u, v, p = jet("u"), jet("v"), jet("p")
    ux, uy, vx, vy = jet("u", "x"), jet("u", "y"), jet("v", "x"), jet("v", "y")
    f1 = ux + vy
    f2 = jet("u", "t") + u * ux + v * uy + jet("p", "x") - (jet("u", "xx") + jet("u", "yy")) / RE
    f3 = jet("v", "t") + u * vx + v * vy + jet("p", "y") - (jet("v", "xx") + jet("v", "yy")) / RE
    f4 = ux * ux + 2 * vx * uy + vy * vy + jet("p", "xx") + jet("p", "yy")
    return f1, f2, f3, f4


def obstruction_pde() -> DifferentialPolynomial:
    """The fourth-order PDE implied by the obstruction of the compact schemes."""
    u, v = jet("u"), jet("v")
    return (2 * v * jet("v", "yyyy") + 8 * jet("v", "y") * jet("v", "yyy") + 6 * jet("v", "yy") ** 2
            + 2 * u * jet("u", "xxxx") + 8 * jet("u", "x") * jet("u", "xxx") + 6 * jet("u", "xx") ** 2
            + jet("p", "yyyy") + jet("p", "xxxx"))
