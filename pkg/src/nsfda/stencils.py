"""Declarative stencil descriptions of the three finite difference approximations.

Every difference equation e1..e4 is stored as a finite sum of :class:`StencilTerm`
objects. The numeric solver and the symbolic encoder both read these sums, so
a scheme is transcribed exactly once.

Offsets are ``(dj, dk, dn)`` relative to the node ``(j, k, n)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

INDETS = ("u", "v", "p")


class SchemeId(enum.Enum):
    FDA1 = 1
    FDA2 = 2
    FDA3 = 3

    @classmethod
    def parse(cls, value) -> "SchemeId":
        if isinstance(value, SchemeId):
            return value
        text = str(value).strip().upper()
        if text.startswith("FDA"):
            text = text[3:]
        try:
            return cls(int(text))
        except (ValueError, KeyError):
            raise ValueError(f"unknown scheme {value!r}; expected 1, 2 or 3") from None

    @property
    def wide(self) -> bool:
        return self is SchemeId.FDA1


@dataclass(frozen=True)
class StencilTerm:
    """``coeff * h**h_pow * tau**tau_pow * Re**re_pow * prod(factors)``."""

    coeff: Fraction
    h_pow: int = 0
    tau_pow: int = 0
    re_pow: int = 0
    factors: tuple[tuple[str, tuple[int, int, int]], ...] = ()

    def scaled(self, c, h_pow=0, tau_pow=0, re_pow=0) -> "StencilTerm":
        return StencilTerm(self.coeff * Fraction(c), self.h_pow + h_pow,
                           self.tau_pow + tau_pow, self.re_pow + re_pow, self.factors)

    def times(self, other: "StencilTerm") -> "StencilTerm":
        factors = tuple(sorted(self.factors + other.factors))
        return StencilTerm(self.coeff * other.coeff, self.h_pow + other.h_pow,
                           self.tau_pow + other.tau_pow, self.re_pow + other.re_pow, factors)

    def coefficient_value(self, h: float, tau: float, re: float) -> float:
        return float(self.coeff) * h ** self.h_pow * tau ** self.tau_pow * re ** self.re_pow

    @property
    def max_offset(self) -> int:
        return max((max(abs(o[0]), abs(o[1])) for _, o in self.factors), default=0)


class Stencil:
    """A sum of stencil terms with just enough arithmetic to write schemes down."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[StencilTerm] = ()):
        self.terms = tuple(terms)

    def __add__(self, other: "Stencil") -> "Stencil":
        return Stencil(self.terms + other.terms)

    def __neg__(self) -> "Stencil":
        return Stencil(t.scaled(-1) for t in self.terms)

    def __sub__(self, other: "Stencil") -> "Stencil":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Stencil):
            return Stencil(a.times(b) for a in self.terms for b in other.terms)
        return Stencil(t.scaled(other) for t in self.terms)

    __rmul__ = __mul__

    def scale(self, c=1, h_pow=0, tau_pow=0, re_pow=0) -> "Stencil":
        return Stencil(t.scaled(c, h_pow, tau_pow, re_pow) for t in self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def max_offset(self) -> int:
        return max((t.max_offset for t in self.terms), default=0)


def var(which: str, dj: int = 0, dk: int = 0, dn: int = 0) -> Stencil:
    return Stencil([StencilTerm(Fraction(1), factors=((which, (dj, dk, dn)),))])


def _prod(*names_offsets) -> Stencil:
    out = Stencil([StencilTerm(Fraction(1))])
    for which, dj, dk in names_offsets:
        out = out * var(which, dj, dk)
    return out


# divided differences; `step` is the offset of the outer nodes
def central_x(s_of, step=1):
    return (s_of(step, 0) - s_of(-step, 0)).scale(Fraction(1, 2 * step), h_pow=-1)


def central_y(s_of, step=1):
    return (s_of(0, step) - s_of(0, -step)).scale(Fraction(1, 2 * step), h_pow=-1)


def second_x(s_of, step=1):
    return (s_of(step, 0) - 2 * s_of(0, 0) + s_of(-step, 0)).scale(Fraction(1, step * step), h_pow=-2)


def second_y(s_of, step=1):
    return (s_of(0, step) - 2 * s_of(0, 0) + s_of(0, -step)).scale(Fraction(1, step * step), h_pow=-2)


def _at(which):
    return lambda dj, dk: var(which, dj, dk)


def _sq_at(which):
    return lambda dj, dk: var(which, dj, dk) * var(which, dj, dk)


def _uv_at(dj, dk):
    return var("u", dj, dk) * var("v", dj, dk)


def forward_t(which):
    return (var(which, dn=1) - var(which)).scale(tau_pow=-1)


@dataclass(frozen=True)
class SchemeDef:
    scheme: SchemeId
    e1: Stencil
    e2: Stencil
    e3: Stencil
    e4: Stencil
    notes: tuple[str, ...] = ()

    @property
    def equations(self) -> tuple[Stencil, Stencil, Stencil, Stencil]:
        return (self.e1, self.e2, self.e3, self.e4)

    def laplacian(self, which: str) -> Stencil:
        """The viscous Laplacian the scheme applies to `which`."""
        step = 2 if self.scheme.wide else 1
        return second_x(_at(which), step) + second_y(_at(which), step)

    @property
    def stencil_radius(self) -> int:
        return max(e.max_offset for e in self.equations)


def _continuity() -> Stencil:
    return central_x(_at("u")) + central_y(_at("v"))


def _fda1() -> SchemeDef:
    inv_re = lambda s: s.scale(-1, re_pow=-1)  # noqa: E731
    u, v, p = _at("u"), _at("v"), _at("p")
    e2 = (forward_t("u") + central_x(_sq_at("u")) + central_y(_uv_at) + central_x(p)
          + inv_re(second_x(u, 2) + second_y(u, 2)))
    # the printed e3 lacks the "+" between its two convective fractions
    e3 = (forward_t("v") + central_x(_uv_at) + central_y(_sq_at("v")) + central_y(p)
          + inv_re(second_x(v, 2) + second_y(v, 2)))
    mixed = (_uv_at(1, 1) - _uv_at(1, -1) - _uv_at(-1, 1) + _uv_at(-1, -1)).scale(Fraction(2, 4), h_pow=-2)
    e4 = (second_x(_sq_at("u"), 2) + second_y(_sq_at("v"), 2) + mixed
          + second_x(p, 2) + second_y(p, 2))
    return SchemeDef(SchemeId.FDA1, _continuity(), e2, e3, e4,
                     notes=("e3: '+' restored between the two convective fractions",))


def _compact(scheme: SchemeId) -> SchemeDef:
    inv_re = lambda s: s.scale(-1, re_pow=-1)  # noqa: E731
    u, v, p = _at("u"), _at("v"), _at("p")
    e2 = (forward_t("u") + var("u") * central_x(u) + var("v") * central_y(u) + central_x(p)
          + inv_re(second_x(u) + second_y(u)))
    e3 = (forward_t("v") + var("u") * central_x(v) + var("v") * central_y(v) + central_y(p)
          + inv_re(second_x(v) + second_y(v)))
    ux, uy, vx, vy = central_x(u), central_y(u), central_x(v), central_y(v)
    e4 = ux * ux + 2 * (vx * uy) + vy * vy + second_x(p) + second_y(p)
    return SchemeDef(scheme, _continuity(), e2, e3, e4)


def scheme_def(scheme) -> SchemeDef:
    """Stencil description of one FDA. FDA2 and FDA3 are displayed identically."""
    scheme = SchemeId.parse(scheme)
    if scheme is SchemeId.FDA1:
        return _fda1()
    return _compact(scheme)
