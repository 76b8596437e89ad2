"""Continuous limits of difference polynomials by exact Taylor expansion.

Every shifted variable ``w(i, j, k)`` is replaced by its Taylor series about
the base node, ``sum (i h)^a (j h)^b (k tau)^c / (a! b! c!) * w_{x^a y^b t^c}``,
truncated at total derivative order K. The result is collected by powers of
``h`` and ``tau``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from ..algebra.difference import DifferencePolynomial, ShiftedVar
from ..algebra.params import K, laurent_parts
from sympy import QQ
from .jets import DifferentialPolynomial, JetVar, jmono_mul

Power = tuple[int, int]


@dataclass
class LimitResult:
    limit: DifferentialPolynomial
    expansion: dict[Power, DifferentialPolynomial]
    exists: bool
    truncation: int
    exact_order: int                     # components with h+tau power <= this are exact
    offending: dict[Power, DifferentialPolynomial] = field(default_factory=dict)

    def component(self, hp: int, tp: int) -> DifferentialPolynomial:
        if hp + tp > self.exact_order:
            raise ValueError(f"component h^{hp} tau^{tp} is beyond the exact order {self.exact_order}")
        return self.expansion.get((hp, tp), DifferentialPolynomial())

    def support(self) -> list[Power]:
        return sorted(self.expansion)

    def leading(self) -> Optional[tuple[Power, DifferentialPolynomial]]:
        """The componentwise-minimal (h, tau) power and its component, if unique.

        This is the continuous limit of the equation ``f = 0`` after dividing by
        ``h^a tau^b``; None when the support has no componentwise minimum.
        """
        if not self.expansion:
            return None
        lo = (min(p[0] for p in self.expansion), min(p[1] for p in self.expansion))
        if lo not in self.expansion:
            return None
        return lo, self.expansion[lo]


@lru_cache(maxsize=None)
def _var_series(v: ShiftedVar, order: int):
    i, j, k = v.shift
    out = []
    for a in range(order + 1 if i else 1):
        for b in range(order + 1 - a if j else 1):
            for c in range(order + 1 - a - b if k else 1):
                coeff = Fraction(i ** a * j ** b * k ** c, factorial(a) * factorial(b) * factorial(c))
                out.append((a + b, c, ((JetVar(v.indet, (a, b, c)), 1),), coeff))
    return tuple(out)


@lru_cache(maxsize=None)
def _mono_series(m: tuple, order: int):
    """Series of a monomial as ``{(hp, tp): {jet_monomial: Fraction}}``."""
    current = {(0, 0): {(): Fraction(1)}}
    for v, e in m:
        series = _var_series(v, order)
        for _ in range(e):
            nxt: dict = {}
            for (hp, tp), poly in current.items():
                for dh, dt, jm, c in series:
                    if hp + tp + dh + dt > order:
                        continue
                    bucket = nxt.setdefault((hp + dh, tp + dt), {})
                    for pm, pc in poly.items():
                        key = jmono_mul(pm, jm)
                        bucket[key] = bucket.get(key, 0) + pc * c
            current = nxt
    return current


def default_truncation(f: DifferencePolynomial) -> int:
    return f.max_abs_shift() + 4


def _neg_degree(f: DifferencePolynomial) -> int:
    worst = 0
    for c in f.terms.values():
        for (a, b) in laurent_parts(c):
            worst = max(worst, -(a + b))
    return worst


def expand(f: DifferencePolynomial, order: int) -> tuple[dict[Power, DifferentialPolynomial], int]:
    """Exact Taylor expansion; returns the components and the exact order."""
    acc: dict[Power, dict] = {}
    neg = 0
    for m, c in f.terms.items():
        parts = laurent_parts(c)
        neg = max(neg, max(-(a + b) for a, b in parts))
        series = _mono_series(m, order)
        for (hp, tp), poly in series.items():
            for (a, b), r in parts.items():
                slot = acc.setdefault((hp + a, tp + b), {}).setdefault(r, {})
                for jm, q in poly.items():
                    slot[jm] = slot.get(jm, 0) + q
    exact = order - neg
    out = {}
    for power, by_coeff in acc.items():
        if power[0] + power[1] > exact:
            continue
        terms: dict = {}
        for r, poly in by_coeff.items():
            for jm, q in poly.items():
                if q:
                    terms[jm] = terms.get(jm, K.zero) + r * K(QQ(q.numerator, q.denominator))
        comp = DifferentialPolynomial(terms)
        if comp:
            out[power] = comp
    return out, exact


def taylor_limit(f: DifferencePolynomial, truncation: Optional[int] = None) -> LimitResult:
    """Continuous limit of ``f`` as h, tau -> 0 (the h^0 tau^0 component)."""
    order = default_truncation(f) if truncation is None else truncation
    if order < f.max_abs_shift() + 2:
        raise ValueError("truncation order must be at least the largest shift plus 2")
    if order - _neg_degree(f) < 0:
        order = _neg_degree(f)
    expansion, exact = expand(f, order)
    offending = {p: c for p, c in expansion.items() if p[0] < 0 or p[1] < 0}
    limit = expansion.get((0, 0), DifferentialPolynomial())
    return LimitResult(limit, expansion, not offending, order, exact, offending)


def equation_limit(f: DifferencePolynomial, truncation: Optional[int] = None,
                   verify: bool = True) -> tuple[Power, DifferentialPolynomial]:
    """Limit of the equation ``f = 0``: the leading component after rescaling.

    With ``verify`` the same component is recomputed at truncation + 1.
    """
    res = taylor_limit(f, truncation)
    lead = res.leading()
    if lead is None:
        raise ValueError("expansion has no componentwise-minimal (h, tau) power")
    if verify:
        again = taylor_limit(f, res.truncation + 1).leading()
        if again is None or again[0] != lead[0] or again[1] != lead[1]:
            raise AssertionError("leading component is not stable under truncation + 1")
    return lead
