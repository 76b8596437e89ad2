"""Weak and strong consistency analysis of the three schemes.

The strong-consistency argument works through the single nontrivial
S-polynomial ``S = e1^{n+1}/tau - e2_{j+1,k}/(2h)``. For the conservative wide
scheme S is an explicit combination of shifted e1..e4 whose summands have
distinct leading monomials. For the compact schemes the same combination
leaves a remainder Delta whose continuous limit is a PDE outside the
Navier-Stokes ideal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..algebra.difference import (DEFAULT_ORDER, AdmissibleOrder, DifferencePolynomial, Monomial,
                                  mono_text, spoly)
from ..algebra.fda import encode_fda, raw_equations
from ..algebra.params import H, RE, TAU, as_text
from ..stencils import SchemeId
from .jets import DifferentialPolynomial, navier_stokes, obstruction_pde
from .reduction import DiffReduction, differential_reduce
from .taylor import LimitResult, equation_limit, expand, taylor_limit

Equations = Sequence[DifferencePolynomial]
U = DifferencePolynomial.var("u")
V = DifferencePolynomial.var("v")


# weak consistency -------------------------------------------------------
@dataclass
class WVerdict:
    index: int                     # 1..4
    holds: bool                    # limit equals f_i exactly, up to a constant factor
    limit: DifferentialPolynomial
    target: DifferentialPolynomial
    exists: bool
    modulo_continuity: bool        # limit - f_i lies in the ideal generated by f1..f4
    truncation: int

    def to_dict(self) -> dict:
        return {"equation": f"e{self.index}", "holds": self.holds, "exists": self.exists,
                "limit": self.limit.to_text(), "target": self.target.to_text(),
                "equal_modulo_ideal": self.modulo_continuity, "truncation": self.truncation}


def check_w_consistency(scheme=None, truncation: Optional[int] = None,
                        equations: Optional[Equations] = None,
                        order_bound: int = 6) -> list[WVerdict]:
    """Compare the continuous limit of each e_i with f_i.

    ``equations`` overrides the scheme's own e1..e4, which is how corrupted or
    experimental stencils are checked.
    """
    eqs = raw_equations(scheme) if equations is None else tuple(equations)
    out = []
    for i, (e, f) in enumerate(zip(eqs, navier_stokes())):
        res = taylor_limit(e, truncation)
        lim = res.limit
        holds = res.exists and bool(lim) and lim.scalar_ratio(f) is not None
        if holds:
            holds = lim.monic() == f.monic()
        modulo = False
        if res.exists and lim:
            ratio = lim.monic()
            modulo = differential_reduce(ratio - f.monic(), max(order_bound, ratio.order())).is_zero
        out.append(WVerdict(i + 1, holds, lim, f, res.exists, modulo, res.truncation))
    return out


# S-polynomial -----------------------------------------------------------
def s_polynomial(equations: Equations) -> DifferencePolynomial:
    """``e1^{n+1}/tau - e2_{j+1,k}/(2h)`` about the node (j, k, n)."""
    e1, e2 = equations[0], equations[1]
    return e1.shift((0, 0, 1)) / TAU - e2.shift((1, 0, 0)) / (2 * H)


def laplacian(e: DifferencePolynomial, step: int) -> DifferencePolynomial:
    """Discrete 5-point Laplacian with spacing ``step*h`` applied by shifts."""
    out = DifferencePolynomial()
    for axis in (0, 1):
        plus = tuple(step if a == axis else 0 for a in range(3))
        minus = tuple(-a for a in plus)
        out = out + (e.shift(plus) - 2 * e + e.shift(minus)) / (step * step * H ** 2)
    return out


def combination_summands(equations: Equations, step: int,
                         printed_signs: bool = False) -> list[tuple[str, DifferencePolynomial]]:
    """Summands whose sum reproduces S for the conservative wide scheme.

    With ``printed_signs`` the e1, e2 and lower e3 summands carry the opposite
    sign, which is the variant kept for the counterexample record.
    """
    e1, e2, e3, e4 = equations
    sgn = -1 if printed_signs else 1
    e3_pair = (e3.shift((0, 1, 0)) - sgn * e3.shift((0, -1, 0))) / (2 * H)
    return [
        ("e1/tau", sgn * e1 / TAU),
        ("-e2[j-1,k]/(2h)", -sgn * e2.shift((-1, 0, 0)) / (2 * H)),
        ("(e3[j,k+1] - e3[j,k-1])/(2h)" if not printed_signs else "(e3[j,k+1] + e3[j,k-1])/(2h)", e3_pair),
        ("Lap(e1)/Re", laplacian(e1, step) / RE),
        ("-e4", -e4),
    ]


def _sum(polys) -> DifferencePolynomial:
    out = DifferencePolynomial()
    for p in polys:
        out = out + p
    return out


@dataclass
class Summand:
    label: str
    poly: DifferencePolynomial
    leading: Monomial              # after the common normalizing shift
    limit_power: tuple[int, int]
    limit: DifferentialPolynomial
    reduction: DiffReduction

    def to_dict(self) -> dict:
        return {"summand": self.label, "leading_monomial": mono_text(self.leading),
                "limit_scale": {"h": self.limit_power[0], "tau": self.limit_power[1]},
                "limit": self.limit.to_text(), "reduces_to_zero": self.reduction.is_zero,
                "reduction_steps": len(self.reduction.steps)}


@dataclass
class Certificate:
    s_poly: DifferencePolynomial
    spoly_matches: bool            # the algorithmic S-polynomial is a shift/multiple of s_poly
    identity_residual: DifferencePolynomial
    independent_check: bool        # expansion of both sides agrees component by component
    summands: list[Summand]
    common_shift: tuple[int, int, int]
    distinct_leading: bool
    printed_residual_terms: int
    printed_counterexample: str
    order_bound: int

    @property
    def identity_holds(self) -> bool:
        return not self.identity_residual

    @property
    def all_reduce(self) -> bool:
        return all(s.reduction.is_zero for s in self.summands)

    @property
    def valid(self) -> bool:
        return (self.identity_holds and self.independent_check and self.distinct_leading
                and self.all_reduce and self.spoly_matches)

    def to_dict(self) -> dict:
        return {"s_polynomial": self.s_poly.to_text(), "spoly_matches": self.spoly_matches,
                "identity_holds": self.identity_holds, "independent_check": self.independent_check,
                "common_shift": list(self.common_shift), "distinct_leading": self.distinct_leading,
                "summands": [s.to_dict() for s in self.summands],
                "printed_sign_variant": {"residual_terms": self.printed_residual_terms,
                                         "first_term": self.printed_counterexample},
                "order_bound": self.order_bound, "valid": self.valid}


def _expansions_agree(lhs: DifferencePolynomial, parts: Sequence[DifferencePolynomial],
                      truncation: int) -> bool:
    """Expand each side separately and compare every exact (h, tau) component."""
    left, exact = expand(lhs, truncation)
    right: dict = {}
    for p in parts:
        comp, ex = expand(p, truncation)
        exact = min(exact, ex)
        for k, c in comp.items():
            right[k] = right.get(k, DifferentialPolynomial()) + c
    keys = {k for k in set(left) | set(right) if k[0] + k[1] <= exact}
    return all(left.get(k, DifferentialPolynomial()) == right.get(k, DifferentialPolynomial())
               for k in keys)


def _spoly_matches(scheme, s_poly: DifferencePolynomial, order: AdmissibleOrder) -> bool:
    enc = encode_fda(scheme, order)
    alg = spoly(enc.monic[0], enc.monic[1], order)
    if alg is None:
        return False
    base, _ = s_poly.normalized()
    alg, _ = alg.normalized()
    return alg.monic(order) == base.monic(order)


def certify_s_consistency_fda1(order: AdmissibleOrder = DEFAULT_ORDER, order_bound: int = 6,
                               truncation: Optional[int] = None) -> Certificate:
    eqs = raw_equations(SchemeId.FDA1)
    S = s_polynomial(eqs)
    parts = combination_summands(eqs, step=2)
    residual = S - _sum(p for _, p in parts)
    k = truncation or (max(p.max_abs_shift() for _, p in parts) + 4)
    independent = _expansions_agree(S, [p for _, p in parts], k)

    # one shift that normalizes every summand at once
    common = tuple(max(p.normalizing_shift()[a] for _, p in parts) for a in range(3))
    summands = []
    for label, p in parts:
        lm = p.shift(common).lm(order)
        power, lim = equation_limit(p, truncation)
        red = differential_reduce(lim, max(order_bound, lim.order()))
        summands.append(Summand(label, p, lm, power, lim, red))
    distinct = len({s.leading for s in summands}) == len(summands)

    printed = S - _sum(p for _, p in combination_summands(eqs, step=2, printed_signs=True))
    first = ""
    if printed:
        pm, pc = printed.normalized()[0].sorted_terms(order)[0]
        first = f"({as_text(pc)})*{mono_text(pm)}"
    return Certificate(S, _spoly_matches(SchemeId.FDA1, S, order), residual, independent,
                       summands, common, distinct, len(printed), first, order_bound)


# obstruction ------------------------------------------------------------
def continuity_multiples(e1: DifferencePolynomial) -> DifferencePolynomial:
    """u * (central x-difference of e1) + v * (central y-difference of e1)."""
    return (U * (e1.shift((1, 0, 0)) - e1.shift((-1, 0, 0)))
            + V * (e1.shift((0, 1, 0)) - e1.shift((0, -1, 0)))) / (2 * H)


@dataclass
class Obstruction:
    scheme: Optional[SchemeId]
    delta: DifferencePolynomial
    delta_limit: Optional[tuple[tuple[int, int], DifferentialPolynomial]]
    remainder: DifferencePolynomial          # delta with the e1 multiples removed
    remainder_limit: Optional[tuple[tuple[int, int], DifferentialPolynomial]]
    pde: DifferentialPolynomial
    scalar: Optional[object]                 # remainder limit == scalar * pde, when it exists
    pde_reduction: DiffReduction
    remainder_reduction: Optional[DiffReduction]
    normal_form_scalar: Optional[object]     # same comparison after reduction modulo f1..f4

    @property
    def delta_is_zero(self) -> bool:
        return not self.delta

    @property
    def matches_pde(self) -> bool:
        return self.scalar is not None and self.scalar != 0

    def to_dict(self) -> dict:
        def lim(x):
            if x is None:
                return None
            return {"h": x[0][0], "tau": x[0][1], "limit": x[1].to_text()}
        return {
            "scheme": self.scheme.name if self.scheme else "custom",
            "delta_terms": len(self.delta), "delta_is_zero": self.delta_is_zero,
            "delta_limit": lim(self.delta_limit),
            "remainder_terms": len(self.remainder), "remainder_limit": lim(self.remainder_limit),
            "reference_pde": self.pde.to_text(),
            "scalar": None if self.scalar is None else as_text(self.scalar),
            "matches_reference_pde": self.matches_pde,
            "reference_pde_normal_form": self.pde_reduction.remainder.to_text(),
            "reference_pde_reduces_to_zero": self.pde_reduction.is_zero,
            "remainder_limit_normal_form": (None if self.remainder_reduction is None
                                            else self.remainder_reduction.remainder.to_text()),
            "normal_form_scalar": (None if self.normal_form_scalar is None
                                   else as_text(self.normal_form_scalar)),
            "order_bound": self.pde_reduction.order_bound,
        }


def extract_obstruction(scheme=None, equations: Optional[Equations] = None, step: int = 1,
                        order_bound: int = 6, truncation: Optional[int] = None) -> Obstruction:
    """Delta = S minus the wide-scheme combination built from the scheme's own e's.

    ``step`` is the spacing of the scheme's viscous Laplacian (2 for the wide
    scheme). The remainder adds back the explicit e1 multiples before the limit
    is taken.
    """
    sid = None
    if equations is None:
        sid = SchemeId.parse(scheme)
        equations = raw_equations(sid)
        step = 2 if sid.wide else 1
    eqs = tuple(equations)
    S = s_polynomial(eqs)
    delta = S - _sum(p for _, p in combination_summands(eqs, step))
    remainder = delta + continuity_multiples(eqs[0])
    pde = obstruction_pde()
    pde_red = differential_reduce(pde, max(order_bound, pde.order()))
    if not delta:
        return Obstruction(sid, delta, None, remainder, None, pde, None, pde_red, None, None)
    delta_limit = equation_limit(delta, truncation)
    rem_limit = equation_limit(remainder, truncation) if remainder else None
    scalar = nf_scalar = rem_red = None
    if rem_limit is not None:
        scalar = rem_limit[1].scalar_ratio(pde)
        rem_red = differential_reduce(rem_limit[1], max(order_bound, rem_limit[1].order()))
        if pde_red.remainder:
            nf_scalar = rem_red.remainder.scalar_ratio(pde_red.remainder)
    return Obstruction(sid, delta, delta_limit, remainder, rem_limit, pde, scalar, pde_red,
                       rem_red, nf_scalar)


def obstructions_coincide(a: Obstruction, b: Obstruction) -> bool:
    return a.delta == b.delta and a.remainder_limit == b.remainder_limit


# report -----------------------------------------------------------------
@dataclass
class ConsistencyReport:
    scheme: SchemeId
    w_verdicts: list[WVerdict]
    s_verdict: str                 # certified-consistent | obstructed | undetermined
    certificate: Optional[Certificate] = None
    obstruction: Optional[Obstruction] = None
    truncation: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def weakly_consistent(self) -> bool:
        return all(w.holds for w in self.w_verdicts)

    def to_dict(self) -> dict:
        d = {"scheme": self.scheme.name, "truncation": self.truncation,
             "w_verdicts": [w.to_dict() for w in self.w_verdicts],
             "weakly_consistent": self.weakly_consistent, "s_verdict": self.s_verdict,
             "notes": self.notes}
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_dict()
        if self.obstruction is not None:
            d["obstruction"] = self.obstruction.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"consistency report for {self.scheme.name} (truncation {self.truncation})", ""]
        for w in self.w_verdicts:
            tag = "exact" if w.holds else ("modulo ideal" if w.modulo_continuity else "FAILS")
            lines.append(f"  e{w.index} -> {w.limit.to_text()}   [{tag}]")
        lines += ["", f"s-verdict: {self.s_verdict}"]
        c = self.certificate
        if c is not None:
            lines.append(f"  S = {c.s_poly.to_text()}")
            lines.append(f"  combination identity exact: {c.identity_holds}; "
                         f"independent expansion check: {c.independent_check}")
            lines.append(f"  leading monomials after shift {c.common_shift}, pairwise distinct: "
                         f"{c.distinct_leading}")
            for s in c.summands:
                lines.append(f"    {s.label:34s} LM {mono_text(s.leading):14s} limit {s.limit.to_text()}"
                             f"  reduces to 0: {s.reduction.is_zero}")
            lines.append(f"  sign variant leaves {c.printed_residual_terms} terms, first {c.printed_counterexample}")
        o = self.obstruction
        if o is not None:
            lines.append(f"  Delta has {len(o.delta)} terms")
            if o.delta_limit:
                lines.append(f"  Delta limit (h^{o.delta_limit[0][0]} tau^{o.delta_limit[0][1]}): "
                             f"{o.delta_limit[1].to_text()}")
            if o.remainder_limit:
                lines.append(f"  Delta' limit (h^{o.remainder_limit[0][0]} tau^{o.remainder_limit[0][1]}): "
                             f"{o.remainder_limit[1].to_text()}")
            lines.append(f"  scalar multiple of the reference PDE: "
                         f"{'none' if o.scalar is None else as_text(o.scalar)}")
            lines.append(f"  reference PDE normal form (bound {o.pde_reduction.order_bound}): "
                         f"{o.pde_reduction.remainder.to_text()}")
            if o.remainder_reduction is not None:
                lines.append(f"  Delta' limit normal form: {o.remainder_reduction.remainder.to_text()}")
        lines += [""] + [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def full_report(scheme, truncation: Optional[int] = None, order_bound: int = 6) -> ConsistencyReport:
    sid = SchemeId.parse(scheme)
    verdicts = check_w_consistency(sid, truncation, order_bound=order_bound)
    k = max(w.truncation for w in verdicts)
    notes = []
    if sid is SchemeId.FDA1:
        notes.append("e3 convective fractions are joined by '+'")
        cert = certify_s_consistency_fda1(order_bound=order_bound, truncation=truncation)
        verdict = "certified-consistent" if cert.valid else "undetermined"
        return ConsistencyReport(sid, verdicts, verdict, certificate=cert, truncation=k, notes=notes)
    obs = extract_obstruction(sid, order_bound=order_bound, truncation=truncation)
    if obs.delta_is_zero:
        verdict = "undetermined"
        notes.append("Delta vanishes: the wide-scheme identity holds for this scheme")
    elif obs.remainder_limit and obs.remainder_reduction and not obs.remainder_reduction.is_zero:
        verdict = "obstructed"
    else:
        verdict = "undetermined"
    if sid is not SchemeId.FDA1:
        other = SchemeId.FDA3 if sid is SchemeId.FDA2 else SchemeId.FDA2
        same = raw_equations(other) == raw_equations(sid)
        notes.append(f"{sid.name} and {other.name} stencils are {'identical' if same else 'different'}")
    return ConsistencyReport(sid, verdicts, verdict, obstruction=obs, truncation=k, notes=notes)
