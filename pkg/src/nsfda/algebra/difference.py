"""Difference polynomials in the shifted indeterminates of u, v, p.

A shifted variable ``u(i, j, k)`` stands for ``sigma_x^i sigma_y^j sigma_t^k o u``,
i.e. the grid function u at node ``(j+i, k+j, n+k)`` relative to a base node.
Shifts are signed; anything that needs the admissible order (leading
monomials, division, S-polynomials, reduction) requires nonnegative shifts,
which :meth:`DifferencePolynomial.normalized` provides.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .params import ONE, ZERO, K, as_text, param

Shift = tuple[int, int, int]
_FE = type(ONE)
VAR_RANK = {"p": 2, "u": 1, "v": 0}


class ShiftedVar(NamedTuple):
    indet: str
    shift: Shift

    def shifted(self, sigma: Shift) -> "ShiftedVar":
        s = self.shift
        return ShiftedVar(self.indet, (s[0] + sigma[0], s[1] + sigma[1], s[2] + sigma[2]))

    @property
    def normalized(self) -> bool:
        return min(self.shift) >= 0

    def __str__(self):
        return "%s(%d,%d,%d)" % ((self.indet,) + self.shift)


# A monomial is a sorted tuple of (ShiftedVar, exponent) pairs; () is 1.
Monomial = tuple


def mono(*factors) -> Monomial:
    """Build a monomial from ShiftedVars or (ShiftedVar, exponent) pairs."""
    exps: dict[ShiftedVar, int] = {}
    for f in factors:
        if isinstance(f, ShiftedVar):
            v, e = f, 1
        else:
            v, e = f
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_shift(a: Monomial, sigma: Shift) -> Monomial:
    if sigma == (0, 0, 0):
        return a
    return tuple(sorted((v.shifted(sigma), e) for v, e in a))


def mono_divides_plain(a: Monomial, b: Monomial) -> bool:
    eb = dict(b)
    return all(eb.get(v, 0) >= e for v, e in a)


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    exps = dict(b)
    for v, e in a:
        exps[v] -= e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = max(exps.get(v, 0), e)
    return tuple(sorted(exps.items()))


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def mono_text(a: Monomial) -> str:
    if not a:
        return "1"
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in a)


def mono_is_normalized(a: Monomial) -> bool:
    return all(v.normalized for v, _ in a)


class AdmissibleOrder:
    """Block orderly ranking extended lexicographically to monomials.

    Ranking of shifted variables: the sigma_t shift dominates, then the total
    (sigma_x, sigma_y) shift, then p > u > v, then the x shift. Monomials are
    compared on the highest-ranked variable in which their exponents differ.
    """

    name = "block-orderly-lex"

    @staticmethod
    def var_key(v: ShiftedVar):
        i, j, k = v.shift
        return (k, i + j, VAR_RANK[v.indet], i, j)

    def mono_key(self, a: Monomial):
        # sorting descending on var_key then comparing the (key, exp) lists is lex
        return tuple(sorted(((self.var_key(v), e) for v, e in a), reverse=True))

    def compare(self, a: Monomial, b: Monomial) -> int:
        if not (mono_is_normalized(a) and mono_is_normalized(b)):
            raise ValueError("compare needs monomials with nonnegative shifts")
        return _cmp_keys(self.mono_key(a), self.mono_key(b))

    def rank_compare(self, x: ShiftedVar, y: ShiftedVar) -> int:
        kx, ky = self.var_key(x), self.var_key(y)
        return (kx > ky) - (kx < ky)


def _cmp_keys(ka, kb) -> int:
    for (va, ea), (vb, eb) in zip(ka, kb):
        if va != vb:
            return 1 if va > vb else -1
        if ea != eb:
            return 1 if ea > eb else -1
    return (len(ka) > len(kb)) - (len(ka) < len(kb))


class _LexKey:
    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return _cmp_keys(self.key, other.key) < 0


DEFAULT_ORDER = AdmissibleOrder()


class DifferencePolynomial:
    """Polynomial in shifted variables with coefficients in Q(Re, h, tau)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if type(c) is not _FE:
                    c = param(c)
                if c:
                    clean[m] = c
        self.terms: dict[Monomial, object] = clean

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> "DifferencePolynomial":
        return cls({(): c})

    @classmethod
    def var(cls, indet: str, shift: Shift = (0, 0, 0)) -> "DifferencePolynomial":
        return cls({mono(ShiftedVar(indet, tuple(shift))): ONE})

    @classmethod
    def from_stencil(cls, stencil) -> "DifferencePolynomial":
        from .params import monomial as pmono
        out: dict = {}
        for t in stencil:
            m = mono(*(ShiftedVar(w, off) for w, off in t.factors))
            out[m] = out.get(m, ZERO) + pmono(t.coeff, t.h_pow, t.tau_pow, t.re_pow)
        return cls(out)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return DifferencePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return DifferencePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, DifferencePolynomial):
            c = param(other)
            return DifferencePolynomial({m: a * c for m, a in self.terms.items()})
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = out.get(m, ZERO) + ca * cb
        return DifferencePolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = param(c)
        return DifferencePolynomial({m: a / c for m, a in self.terms.items()})

    def __pow__(self, n: int):
        out = DifferencePolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DifferencePolynomial):
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

    # shifts ---------------------------------------------------------------
    def shift(self, sigma: Shift) -> "DifferencePolynomial":
        sigma = tuple(sigma)
        return DifferencePolynomial({mono_shift(m, sigma): c for m, c in self.terms.items()})

    def variables(self) -> set[ShiftedVar]:
        return {v for m in self.terms for v, _ in m}

    def min_shift(self) -> Shift:
        vs = self.variables()
        if not vs:
            return (0, 0, 0)
        return tuple(min(v.shift[a] for v in vs) for a in range(3))

    def max_abs_shift(self) -> int:
        return max((abs(s) for v in self.variables() for s in v.shift), default=0)

    def normalizing_shift(self) -> Shift:
        return tuple(max(0, -s) for s in self.min_shift())

    def is_normalized(self) -> bool:
        return all(v.normalized for v in self.variables())

    def normalized(self) -> tuple["DifferencePolynomial", Shift]:
        sigma = self.normalizing_shift()
        return self.shift(sigma), sigma

    # order-dependent ------------------------------------------------------
    def lm(self, order: AdmissibleOrder = DEFAULT_ORDER) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        if not self.is_normalized():
            raise ValueError("leading monomial needs nonnegative shifts; normalize first")
        return max(self.terms, key=lambda m: _LexKey(order.mono_key(m)))

    def lc(self, order: AdmissibleOrder = DEFAULT_ORDER):
        return self.terms[self.lm(order)]

    def monic(self, order: AdmissibleOrder = DEFAULT_ORDER) -> "DifferencePolynomial":
        return self / self.lc(order)

    def sorted_terms(self, order: AdmissibleOrder = DEFAULT_ORDER):
        return sorted(self.terms.items(), key=lambda mc: _LexKey(order.mono_key(mc[0])), reverse=True)

    # text -----------------------------------------------------------------
    def to_text(self, order: AdmissibleOrder = DEFAULT_ORDER) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({as_text(c)})*{mono_text(m)}" for m, c in self.sorted_terms(order))

    def __repr__(self):
        return f"DifferencePolynomial({self.to_text()})"


def _coerce(x) -> DifferencePolynomial:
    if isinstance(x, DifferencePolynomial):
        return x
    return DifferencePolynomial.const(x)


def shift(poly: DifferencePolynomial, sigma: Shift) -> DifferencePolynomial:
    return poly.shift(sigma)


def compare(order: AdmissibleOrder, a: Monomial, b: Monomial) -> int:
    return order.compare(a, b)


# division ---------------------------------------------------------------
def divides(alpha: Monomial, beta: Monomial) -> Optional[tuple[Monomial, Shift]]:
    """Witness ``(mu, sigma)`` with ``beta == mu * (sigma o alpha)``, sigma >= 0.

    Among several witnesses the one with the smallest shift (lexicographic on
    ``(sum, t, x, y)``) is returned.
    """
    if not alpha:
        return beta, (0, 0, 0)
    if not (mono_is_normalized(alpha) and mono_is_normalized(beta)):
        raise ValueError("divides needs monomials with nonnegative shifts")
    anchor = alpha[0][0]
    found = []
    for v, _ in beta:
        if v.indet != anchor.indet:
            continue
        sigma = tuple(v.shift[a] - anchor.shift[a] for a in range(3))
        if min(sigma) < 0:
            continue
        moved = mono_shift(alpha, sigma)
        if mono_divides_plain(moved, beta):
            found.append(sigma)
    if not found:
        return None
    sigma = min(found, key=lambda s: (sum(s), s[2], s[0], s[1]))
    mu = mono_quotient(beta, mono_shift(alpha, sigma))
    assert mono_mul(mu, mono_shift(alpha, sigma)) == beta
    return mu, sigma


# S-polynomials ----------------------------------------------------------
@dataclass(frozen=True)
class SPair:
    m1: Monomial
    sigma1: Shift
    m2: Monomial
    sigma2: Shift
    lcm: Monomial


def spair_candidates(alpha: Monomial, beta: Monomial, same: bool = False) -> list[SPair]:
    """Cofactor pairs with ``m1 * sigma1 o alpha == m2 * sigma2 o beta``.

    Shift pairs come from aligning one variable of alpha with one variable of
    beta (componentwise-minimal, so sigma1 and sigma2 share no shift); monomial
    cofactors are the plain lcm quotients, which are co-prime by construction.
    """
    pairs: dict[tuple, SPair] = {}
    for va, _ in alpha:
        for vb, _ in beta:
            if va.indet != vb.indet:
                continue
            top = tuple(max(va.shift[a], vb.shift[a]) for a in range(3))
            s1 = tuple(top[a] - va.shift[a] for a in range(3))
            s2 = tuple(top[a] - vb.shift[a] for a in range(3))
            if same and s1 == s2:
                continue
            a1, b2 = mono_shift(alpha, s1), mono_shift(beta, s2)
            lcm = mono_lcm(a1, b2)
            m1, m2 = mono_quotient(lcm, a1), mono_quotient(lcm, b2)
            if {v for v, _ in m1} & {v for v, _ in m2}:
                continue
            pairs[(s1, s2)] = SPair(m1, s1, m2, s2, lcm)
    if not pairs and not same:
        # no shared indeterminate: the trivial product pair
        lcm = mono_lcm(alpha, beta)
        pairs[((0, 0, 0), (0, 0, 0))] = SPair(mono_quotient(lcm, alpha), (0, 0, 0),
                                              mono_quotient(lcm, beta), (0, 0, 0), lcm)
    return sorted(pairs.values(), key=lambda sp: (sum(sp.sigma1) + sum(sp.sigma2),
                                                  sp.sigma1, sp.sigma2))


def spoly(p: DifferencePolynomial, q: DifferencePolynomial,
          order: AdmissibleOrder = DEFAULT_ORDER) -> Optional[DifferencePolynomial]:
    """``m1 * sigma1 o p - m2 * sigma2 o q`` for the componentwise-minimal pair.

    Inputs are made monic. Returns None when no co-prime cofactor pair exists
    (e.g. a self pair whose leading monomial is a single variable).
    """
    if not (p.is_normalized() and q.is_normalized()):
        raise ValueError("spoly needs normalized inputs")
    p, q = p.monic(order), q.monic(order)
    same = p == q
    cands = spair_candidates(p.lm(order), q.lm(order), same=same)
    if not cands:
        return None
    sp = cands[0]
    return _mono_poly(sp.m1) * p.shift(sp.sigma1) - _mono_poly(sp.m2) * q.shift(sp.sigma2)


def _mono_poly(m: Monomial) -> DifferencePolynomial:
    return DifferencePolynomial({m: ONE})


# reduction --------------------------------------------------------------
@dataclass
class Reduction:
    """``f == sum(c * (sigma o G[i]) for c, sigma, i in cofactors) + remainder``."""

    remainder: DifferencePolynomial
    cofactors: list[tuple[DifferencePolynomial, Shift, int]] = field(default_factory=list)

    def reconstruct(self, G: list[DifferencePolynomial]) -> DifferencePolynomial:
        total = self.remainder
        for c, sigma, i in self.cofactors:
            total = total + c * G[i].shift(sigma)
        return total


def normal_form(f: DifferencePolynomial, G: Iterable[DifferencePolynomial],
                order: AdmissibleOrder = DEFAULT_ORDER, max_steps: int = 100_000) -> Reduction:
    """Full reduction of ``f`` modulo shifted multiples of ``G``."""
    G = list(G)
    if not f.is_normalized():
        raise ValueError("normal_form needs a normalized polynomial")
    leads = [(g.lm(order), g.lc(order)) for g in G]
    remainder: dict = {}
    current = DifferencePolynomial(dict(f.terms))
    cofactors = []
    for _ in range(max_steps):
        if not current:
            break
        m = current.lm(order)
        c = current.terms[m]
        for i, (lm_g, lc_g) in enumerate(leads):
            w = divides(lm_g, m)
            if w is None:
                continue
            mu, sigma = w
            factor = DifferencePolynomial({mu: c / lc_g})
            current = current - factor * G[i].shift(sigma)
            cofactors.append((factor, sigma, i))
            break
        else:
            remainder[m] = c
            current = DifferencePolynomial({k: v for k, v in current.terms.items() if k != m})
    else:
        raise RuntimeError("normal_form did not terminate within max_steps")
    return Reduction(DifferencePolynomial(remainder), cofactors)
