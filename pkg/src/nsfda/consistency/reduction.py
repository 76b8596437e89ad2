"""Bounded-order reduction of differential polynomials modulo the Navier-Stokes system.

Under the orderly ranking of :func:`jets.jet_key` every generator has a linear
leader with coefficient 1 (u_x, u_t, v_t, p_xx), so reduction is substitution:
a derivative ``d^mu(leader_i)`` is replaced by ``-d^mu(tail_i)``. A zero
remainder certifies membership in the differential ideal; a nonzero remainder
is evidence of non-membership up to the prolongation bound only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..algebra.params import ONE, ZERO
from .jets import DifferentialPolynomial, JetVar, jet_key, navier_stokes


@dataclass(frozen=True)
class Generator:
    index: int
    poly: DifferentialPolynomial
    leader: JetVar
    tail: DifferentialPolynomial


def make_generators(system: Optional[Sequence[DifferentialPolynomial]] = None) -> tuple[Generator, ...]:
    system = navier_stokes() if system is None else system
    out = []
    for i, f in enumerate(system):
        ld = f.leader()
        lead_mono = ((ld, 1),)
        if f.terms.get(lead_mono) != ONE or any(
                ld in dict(m) for m in f.terms if m != lead_mono):
            raise ValueError(f"generator {i + 1} is not linear in its leader {ld} with coefficient 1")
        tail = DifferentialPolynomial({m: c for m, c in f.terms.items() if m != lead_mono})
        out.append(Generator(i, f, ld, tail))
    return tuple(out)


@dataclass
class DiffReduction:
    """``f == sum(c * d^mu(F[i])) + remainder`` over the recorded cofactors."""

    remainder: DifferentialPolynomial
    cofactors: dict[tuple[int, tuple[int, int, int]], DifferentialPolynomial] = field(default_factory=dict)
    order_bound: int = 6
    blocked: set = field(default_factory=set)      # reducible jets left because of the bound
    steps: list[str] = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return not self.remainder

    def reconstruct(self, generators: Sequence[Generator]) -> DifferentialPolynomial:
        total = self.remainder
        for (i, mu), c in self.cofactors.items():
            total = total + c * generators[i].poly.derivative(mu)
        return total


def _matches(v: JetVar, gens: Sequence[Generator], order_bound: int, prefer_time: bool):
    options = []
    for g in gens:
        if g.leader.indet != v.indet:
            continue
        mu = tuple(v.deriv[a] - g.leader.deriv[a] for a in range(3))
        if min(mu) < 0:
            continue
        options.append((sum(mu), -jet_key(g.leader)[0] if prefer_time else jet_key(g.leader)[0], g.index, mu, g))
    if not options:
        return None, False
    allowed = [o for o in options if o[0] <= order_bound]
    if not allowed:
        return None, True
    best = min(allowed)
    return (best[4], best[3]), False


def differential_reduce(f: DifferentialPolynomial, order_bound: int = 6,
                        generators: Optional[Sequence[Generator]] = None,
                        prefer_time: bool = False) -> DiffReduction:
    """Reduce ``f`` by f1..f4 and their total derivatives of order <= order_bound.

    ``prefer_time`` switches which generator is used when a jet is a
    derivative of both u_x and u_t; normal forms must not depend on it.
    """
    if order_bound < f.order():
        raise ValueError(f"order_bound {order_bound} is below the order {f.order()} of f")
    gens = make_generators() if generators is None else tuple(generators)
    result = DiffReduction(DifferentialPolynomial(), {}, order_bound)
    current = f
    cache: dict = {}
    done: set[JetVar] = set()
    while True:
        candidates = sorted((v for v in current.variables() if v not in done), key=jet_key, reverse=True)
        target = None
        for v in candidates:
            hit, blocked = _matches(v, gens, order_bound, prefer_time)
            if hit is not None:
                target = (v, hit)
                break
            done.add(v)
            if blocked:
                result.blocked.add(v)
        if target is None:
            break
        v, (g, mu) = target
        key = (g.index, mu)
        if key not in cache:
            cache[key] = -g.tail.derivative(mu)
        repl = cache[key]
        result.steps.append(f"{v} -> d^{mu} f{g.index + 1}")
        current = _substitute(current, v, repl, g.index, mu, result.cofactors)
    result.remainder = current
    return result


def _substitute(f: DifferentialPolynomial, v: JetVar, repl: DifferentialPolynomial,
                gen: int, mu, cofactors: dict) -> DifferentialPolynomial:
    vpoly = DifferentialPolynomial.var(v.indet, v.deriv)
    out: dict = {}
    kept = DifferentialPolynomial()
    cof = cofactors.get((gen, mu), DifferentialPolynomial())
    powers = {}
    for m, c in f.terms.items():
        exps = dict(m)
        e = exps.pop(v, 0)
        if not e:
            out[m] = out.get(m, ZERO) + c
            continue
        rest = DifferentialPolynomial({tuple(sorted(exps.items())): c})
        if e not in powers:
            powers[e] = repl ** e
            # J^e - R^e = (J - R) * sum J^(e-1-s) R^s, and J - R is d^mu f_gen
        geo = DifferentialPolynomial()
        for s in range(e):
            geo = geo + vpoly ** (e - 1 - s) * repl ** s
        cof = cof + rest * geo
        kept = kept + rest * powers[e]
    cofactors[(gen, mu)] = cof
    return DifferentialPolynomial(out) + kept


def reduces_to_zero(f: DifferentialPolynomial, order_bound: int = 6) -> bool:
    return differential_reduce(f, order_bound).is_zero
