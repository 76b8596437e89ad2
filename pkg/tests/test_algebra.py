import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from nsfda.algebra.difference import (DEFAULT_ORDER, DifferencePolynomial as DP, ShiftedVar, divides,
                                      mono, mono_mul, mono_shift, normal_form, spair_candidates, spoly)
from nsfda.algebra.fda import encode_fda, raw_equations
from nsfda.algebra.params import H, ONE, RE, TAU, ZERO, evaluate, laurent_parts, param
from nsfda.stencils import SchemeId

shifts = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1))
signed_shifts = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-1, 1))
svars = st.builds(ShiftedVar, st.sampled_from("uvp"), shifts)
monomials = st.lists(st.tuples(svars, st.integers(1, 2)), max_size=3).map(lambda fs: mono(*fs))
coeffs = st.builds(lambda a, b, i, j: param(Fraction(a, b)) * H ** i * TAU ** j,
                   st.integers(-5, 5), st.integers(1, 4), st.integers(-2, 1), st.integers(-1, 1))
polys = st.dictionaries(monomials, coeffs, max_size=4).map(DP)
scalars = st.builds(lambda a, b, c: param(a) + param(b) * H + param(c) / (RE + 1),
                    st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))


# ring axioms ------------------------------------------------------------
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + DP() == a and a * 1 == a and a - a == DP()


@given(polys, polys, signed_shifts)
def test_shift_is_ring_homomorphism(a, b, s):
    assert (a * b).shift(s) == a.shift(s) * b.shift(s)
    assert (a + b).shift(s) == a.shift(s) + b.shift(s)
    assert a.shift(s).shift(tuple(-x for x in s)) == a


@given(scalars, scalars, scalars)
def test_coefficient_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if a != ZERO:
        assert a * (ONE / a) == ONE


# admissible order -------------------------------------------------------
@given(monomials, monomials)
def test_order_is_total_and_antisymmetric(a, b):
    c = DEFAULT_ORDER.compare(a, b)
    assert c == -DEFAULT_ORDER.compare(b, a)
    assert (c == 0) == (a == b)


@given(monomials, monomials, monomials)
def test_order_transitive_and_multiplicative(a, b, c):
    o = DEFAULT_ORDER
    if o.compare(a, b) > 0 and o.compare(b, c) > 0:
        assert o.compare(a, c) > 0
    if o.compare(a, b) > 0:
        assert o.compare(mono_mul(a, c), mono_mul(b, c)) > 0


@given(monomials, monomials, shifts)
def test_order_compatible_with_shifts(a, b, s):
    if DEFAULT_ORDER.compare(a, b) > 0:
        assert DEFAULT_ORDER.compare(mono_shift(a, s), mono_shift(b, s)) > 0


@given(monomials)
def test_one_is_smallest(a):
    assume(a)
    assert DEFAULT_ORDER.compare(a, ()) > 0


@given(svars, shifts)
def test_shifting_never_lowers_a_variable(v, s):
    assume(s != (0, 0, 0))
    assert DEFAULT_ORDER.rank_compare(v.shifted(s), v) > 0


def test_unnormalized_compare_rejected():
    with pytest.raises(ValueError):
        DEFAULT_ORDER.compare(mono(ShiftedVar("u", (-1, 0, 0))), ())


# division ---------------------------------------------------------------
def _brute_divides(alpha, beta):
    best = None
    for s in itertools.product(range(5), range(5), range(3)):
        moved = dict(mono_shift(alpha, s))
        eb = dict(beta)
        if all(eb.get(v, 0) >= e for v, e in moved.items()):
            key = (sum(s), s[2], s[0], s[1])
            if best is None or key < best[0]:
                best = (key, s)
    return None if best is None else best[1]


@given(monomials, monomials)
def test_divides_matches_exhaustive_search(alpha, beta):
    assume(alpha)
    w = divides(alpha, beta)
    ref = _brute_divides(alpha, beta)
    assert (w is None) == (ref is None)
    if w is not None:
        mu, sigma = w
        assert sigma == ref
        assert mono_mul(mu, mono_shift(alpha, sigma)) == beta


@given(monomials, monomials, shifts)
def test_shifted_multiple_is_divisible(alpha, mu, s):
    assume(alpha)
    assert divides(alpha, mono_mul(mu, mono_shift(alpha, s))) is not None


# reduction --------------------------------------------------------------
# e1 and e3 have leading monomials in different indeterminates, so every
# S-pair is co-prime and the pair is a standard basis of the ideal it generates
_ENC = encode_fda(SchemeId.FDA2).monic
GENERATORS = [_ENC[0], _ENC[2]]
small_polys = st.dictionaries(monomials, st.integers(-3, 3).filter(bool).map(param), max_size=3).map(DP)


@given(small_polys)
def test_normal_form_reconstructs_and_is_idempotent(f):
    red = normal_form(f, GENERATORS)
    assert red.reconstruct(GENERATORS) == f
    again = normal_form(red.remainder, GENERATORS)
    assert again.remainder == red.remainder and not again.cofactors
    leads = [g.lm() for g in GENERATORS]
    for m in red.remainder.terms:
        assert all(divides(lead, m) is None for lead in leads)


@given(small_polys, shifts, st.sampled_from(range(2)))
def test_members_reduce_to_zero(c, s, i):
    f = c * GENERATORS[i].shift(s)
    assert not normal_form(f, GENERATORS).remainder


def test_raw_generators_are_not_a_standard_basis():
    # LM(e2) is a shifted multiple of LM(e1): reducing e2 by the full set
    # goes through e1 first and leaves a nonzero remainder
    red = normal_form(_ENC[1], list(_ENC))
    assert red.remainder and red.reconstruct(list(_ENC)) == _ENC[1]


# the encoded schemes ----------------------------------------------------
def _u(*s):
    return mono(ShiftedVar("u", s))


@pytest.mark.parametrize("scheme,p_lead", [(SchemeId.FDA1, (2, 0, 0)), (SchemeId.FDA2, (1, 0, 0)),
                                           (SchemeId.FDA3, (1, 0, 0))])
def test_leading_monomials(scheme, p_lead):
    lms = encode_fda(scheme).leading_monomials()
    assert lms == (_u(1, 0, 0), _u(0, 0, 1), mono(ShiftedVar("v", (0, 0, 1))),
                   mono(ShiftedVar("p", p_lead)))


def test_encoded_polys_are_monic_and_normalized():
    for s in SchemeId:
        for g in encode_fda(s).monic:
            assert g.is_normalized() and g.lc() == ONE


def test_spoly_of_e1_e2_is_the_displayed_one():
    e1, e2 = raw_equations(SchemeId.FDA1)[:2]
    enc = encode_fda(SchemeId.FDA1)
    s = e1.shift((0, 0, 1)) / TAU - e2.shift((1, 0, 0)) / (2 * H)
    assert spoly(enc.monic[0], enc.monic[1]) == 2 * H * TAU * s.shift((1, 2, 0))


def test_spair_of_single_variable_with_itself_is_trivial():
    g = DP.var("u", (0, 0, 1)) + DP.var("v")
    assert spoly(g, g) is None
    assert spair_candidates(_u(0, 0, 0), mono(ShiftedVar("p", (0, 0, 0))))[0].lcm


def test_from_stencil_collects_like_terms():
    e1 = raw_equations(SchemeId.FDA2)[0]
    assert len(e1) == 4
    assert e1.terms[_u(1, 0, 0)] == ONE / (2 * H)


def test_laurent_parts_and_evaluate():
    c = (RE * H ** 2 - TAU) / (2 * RE * H ** 3 * TAU)
    parts = laurent_parts(c)
    assert parts == {(-1, -1): ONE / 2, (-3, 0): -ONE / (2 * RE)}
    assert evaluate(c, 2.0, 0.5, 0.25) == pytest.approx((2 * 0.25 - 0.25) / (2 * 2 * 0.125 * 0.25))
    with pytest.raises(ValueError):
        laurent_parts(ONE / (H + TAU))
