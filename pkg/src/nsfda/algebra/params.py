"""Coefficient field Q(Re, h, tau) of exact rational functions.

Elements are sympy ``FracElement`` objects: numerator and denominator are
kept gcd-reduced by sympy, which gives the canonical form we need for exact
equality tests.
"""
from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field

K, RE, H, TAU = field("Re,h,tau", QQ)

ZERO = K.zero
ONE = K.one

_RE, _H, _TAU = 0, 1, 2


def param(value) -> "K.dtype":
    """Coerce ints, Fractions and field elements into the coefficient field."""
    if isinstance(value, Fraction):
        return K(QQ(value.numerator, value.denominator))
    return K(value)


def monomial(c, h_pow=0, tau_pow=0, re_pow=0):
    return param(c) * H ** h_pow * TAU ** tau_pow * RE ** re_pow


def laurent_parts(c) -> dict[tuple[int, int], "K.dtype"]:
    """Split ``c`` into ``{(h_power, tau_power): r(Re)}``.

    Requires the (h, tau)-dependence of the denominator to be a single
    monomial, which holds for every coefficient produced from the schemes and
    their shifted combinations.
    """
    num, den = c.numer, c.denom
    den_terms = den.terms()
    den_exps = {(e[_H], e[_TAU]) for e, _ in den_terms}
    if len(den_exps) != 1:
        raise ValueError(f"denominator of {c} is not monomial in h, tau")
    (dh, dt), = den_exps
    ring = num.ring
    den_re = ring.from_dict({(e[_RE], 0, 0): a for e, a in den_terms})
    parts: dict[tuple[int, int], dict] = {}
    for e, a in num.terms():
        parts.setdefault((e[_H] - dh, e[_TAU] - dt), {})[(e[_RE], 0, 0)] = a
    return {k: K(ring.from_dict(v)) / K(den_re) for k, v in parts.items()}


def depends_on_grid(c) -> bool:
    """True when ``c`` involves h or tau."""
    for e, _ in c.numer.terms() + c.denom.terms():
        if e[_H] or e[_TAU]:
            return True
    return False


def evaluate(c, re: float, h: float, tau: float) -> float:
    point = (re, h, tau)
    return float(c.numer(*point)) / float(c.denom(*point))


def as_text(c) -> str:
    return str(c.as_expr())
