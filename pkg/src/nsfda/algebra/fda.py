"""The three FDAs as difference polynomials."""
from __future__ import annotations

from dataclasses import dataclass

from ..stencils import SchemeId, scheme_def
from .difference import DEFAULT_ORDER, AdmissibleOrder, DifferencePolynomial, Shift

# sigma o e1, sigma^2 o e2, sigma^2 o e3, sigma^2 o e4 with sigma = sigma_x sigma_y
NORMALIZING_SHIFTS: tuple[Shift, ...] = ((1, 1, 0), (2, 2, 0), (2, 2, 0), (2, 2, 0))


@dataclass(frozen=True)
class EncodedFDA:
    scheme: SchemeId
    raw: tuple[DifferencePolynomial, ...]       # e1..e4 about the node (j, k, n)
    shifts: tuple[Shift, ...]
    monic: tuple[DifferencePolynomial, ...]     # shifted and monic

    def leading_monomials(self, order: AdmissibleOrder = DEFAULT_ORDER, base: bool = True):
        """Leading monomials; with ``base`` they are shifted back to the node (j, k, n)."""
        out = []
        for g, s in zip(self.monic, self.shifts):
            lm = DifferencePolynomial({g.lm(order): 1})
            if base:
                lm = lm.shift(tuple(-a for a in s))
            (m,) = lm.terms
            out.append(m)
        return tuple(out)


def raw_equations(scheme) -> tuple[DifferencePolynomial, ...]:
    return tuple(DifferencePolynomial.from_stencil(e) for e in scheme_def(scheme).equations)


def encode_fda(scheme, order: AdmissibleOrder = DEFAULT_ORDER) -> EncodedFDA:
    scheme = SchemeId.parse(scheme)
    raw = raw_equations(scheme)
    monic = []
    for e, s in zip(raw, NORMALIZING_SHIFTS):
        g = e.shift(s)
        if not g.is_normalized():
            raise AssertionError(f"{scheme.name}: shift {s} leaves negative offsets")
        monic.append(g.monic(order))
    return EncodedFDA(scheme, raw, NORMALIZING_SHIFTS, tuple(monic))


def viscous_laplacian(scheme, e: DifferencePolynomial) -> DifferencePolynomial:
    """The scheme's own discrete Laplacian applied to a difference polynomial."""
    from .params import H
    scheme = SchemeId.parse(scheme)
    step = 2 if scheme is SchemeId.FDA1 else 1
    scale = 1 / (step * step * H ** 2)
    out = DifferencePolynomial()
    for axis in (0, 1):
        plus = tuple(step if a == axis else 0 for a in range(3))
        minus = tuple(-step if a == axis else 0 for a in range(3))
        out = out + (e.shift(plus) - 2 * e + e.shift(minus)) * scale
    return out
