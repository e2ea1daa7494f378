import random

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from greenlim.errors import EmptyGenerators, FieldMismatch, StepBudgetExceeded
from greenlim.groebner import MAX_EXPONENT, GroebnerBasis, buchberger, eliminate, normal_form
from greenlim.ideal import Ideal, colength, staircase_size
from greenlim.multiplicity import LOCAL_ORDER, local_colength_at_origin
from greenlim.parse import parse_poly, parse_qq
from greenlim.poly import DEGREVLEX, LEX, MonomialOrder, MultiPoly, monomials_of_degree, reduce_mod_prime

from helpers import macaulay_colength, macaulay_member

Q = lambda s, n=2: parse_qq(s, n)  # noqa: E731
P = lambda s, n=2: parse_poly(s, n)  # noqa: E731


def qs(*texts, n=2):
    return [Q(t, n) for t in texts]


def squared_generic_family():
    gens = [P("z1*z2"), P("z1*(z1-e)"), P("z2*(z2-e)")]
    return [a * b for i, a in enumerate(gens) for b in gens[i:]]


# ---------------------------------------------------------------- examples


def test_normal_form_examples():
    assert normal_form(Q("z1^2"), buchberger(qs("z1"))).is_zero()
    assert normal_form(Q("z1*z2"), buchberger(qs("z1^2", "z2^2"))) == Q("z1*z2")
    gb = buchberger(squared_generic_family())
    assert normal_form(P("z1*z2*(z1+z2) - e*z1*z2"), gb).is_zero()
    assert not gb.contains(P("z1*z2*(z1+z2)"))


def test_buchberger_examples():
    gb = buchberger(qs("z1^2", "z1*z2", "z2^2"))
    assert set(gb.elements) == set(qs("z1^2", "z1*z2", "z2^2"))
    gb = buchberger(qs("z2", "z1*(z1-1)"))
    assert set(gb.elements) == set(qs("z2", "z1^2 - z1"))


def test_generic_fiber_of_squared_family_has_length_nine():
    gb = buchberger(squared_generic_family())
    assert staircase_size(gb.leading_monomials(), 2) == 9
    assert colength(Ideal(squared_generic_family())) == 9


def test_eliminate_examples():
    t_gens = [parse_qq("z1*z2", 3), parse_qq("(1-z1)*z3", 3)]
    assert eliminate(t_gens, 1) == [Q("z1*z2")]
    gens = qs("z1^2 - z2", "z1*z2 - 1")
    assert set(eliminate(gens, 0)) == set(buchberger(gens).elements)
    with pytest.raises(EmptyGenerators):
        eliminate([], 1)
    with pytest.raises(ValueError):
        eliminate(t_gens, 1, DEGREVLEX)


def _divide_out_last(f: MultiPoly) -> MultiPoly:
    k = min(e[-1] for e in f.terms)
    return MultiPoly(f.nvars, {e[:-1] + (e[-1] - k,): c for e, c in f.terms.items()})


def test_saturation_by_elimination_matches_division():
    # ring (t, z1, z2, e); the family square is homogeneous when e has degree 1,
    # so dividing a degrevlex basis (e last) by powers of e saturates it
    fam = [parse_qq(str(f).replace("e", "z3"), 3) for f in squared_generic_family()]
    lift = [MultiPoly(4, {(0,) + e: c for e, c in f.terms.items()}) for f in fam]
    lift.append(parse_qq("1 - z1*z4", 4))
    via_t = eliminate(lift, 1)
    via_division = [_divide_out_last(g) for g in buchberger(fam).elements]
    assert buchberger(via_t) == buchberger(via_division)
    assert buchberger(via_t).contains(parse_qq("z1*z2*(z1+z2) - z3*z1*z2", 3))


def test_unit_and_zero_inputs():
    assert buchberger(qs("z1", "z1 - 1")).is_unit()
    assert len(buchberger([MultiPoly.zero(2)])) == 0
    with pytest.raises(EmptyGenerators):
        buchberger([])


def test_field_mismatch():
    gb = buchberger([reduce_mod_prime(Q("z1"))])
    with pytest.raises(FieldMismatch):
        normal_form(P("e*z1"), gb)


def test_step_budget():
    gens = qs("z1^3 - z2^2 + z1*z2", "z2^3 - 2*z1^2 + z1*z2^2 - 1")
    with pytest.raises(StepBudgetExceeded):
        buchberger(gens, LEX, step_budget=1)


def test_packed_exponent_overflow():
    with pytest.raises(OverflowError):
        buchberger([MultiPoly.monomial((MAX_EXPONENT + 1, 0))])
    with pytest.raises(OverflowError):
        buchberger(qs("z1"), truncate=MAX_EXPONENT + 1)


def test_gf_matches_qq():
    gens = qs("z1^3 - 3*z1*z2 + 1/2", "z2^2 - z1 + 7", "z1*z2^2 - 5")
    a = buchberger(gens)
    b = buchberger([reduce_mod_prime(g) for g in gens])
    assert [reduce_mod_prime(g) for g in a.elements] == b.elements


# ---------------------------------------------------------------- random ideals

small_coef = st.integers(-3, 3)
small_poly = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)), small_coef, min_size=1, max_size=3
).map(lambda d: MultiPoly(3, d))
gen_lists = st.lists(small_poly, min_size=1, max_size=3)
orders = st.sampled_from([DEGREVLEX, LEX, MonomialOrder.elimination(1), MonomialOrder("wdegrevlex", weights=(2, 1, 1))])


def _gb(gens, order, **kw):
    try:
        return buchberger(gens, order, step_budget=400, **kw)
    except StepBudgetExceeded:
        assume(False)


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(gen_lists, orders, st.randoms(use_true_random=False), st.integers(1, 5))
def test_reduced_basis_is_unique(gens, order, rnd, scale):
    assume(any(not g.is_zero() for g in gens))
    ref = _gb(gens, order)
    shuffled = [g * MultiPoly.constant(scale if i % 2 else -1, 3) for i, g in enumerate(gens)]
    rnd.shuffle(shuffled)
    assert _gb(shuffled, order) == ref
    # adding an ideal member changes nothing
    assert _gb(gens + [gens[0] * gens[-1] + gens[0]], order) == ref


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(gen_lists, orders)
def test_pair_criteria_do_not_change_output(gens, order):
    assume(any(not g.is_zero() for g in gens))
    ref = _gb(gens, order, chain_criterion=False, coprime_criterion=False)
    assert _gb(gens, order, chain_criterion=True, coprime_criterion=False) == ref
    assert _gb(gens, order, chain_criterion=False, coprime_criterion=True) == ref
    assert _gb(gens, order) == ref


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(gen_lists, orders)
def test_basis_properties(gens, order):
    assume(any(not g.is_zero() for g in gens))
    gb = _gb(gens, order)
    lms = gb.leading_monomials()
    for g in gens:
        assert gb.contains(g)
    for g, lm in zip(gb.elements, lms):
        assert g.leading_term(order)[1] == 1
        for e in g.terms:
            others = [m for m in lms if m != lm]
            assert not any(all(a <= b for a, b in zip(m, e)) for m in others)
    # every S-polynomial reduces to zero: re-running on the basis is a fixed point
    assert _gb(gb.elements, order) == gb


# ---------------------------------------------------------------- Macaulay oracle

homog_terms = st.lists(
    st.tuples(st.sampled_from(monomials_of_degree(3, 2) + monomials_of_degree(3, 3)), st.integers(-2, 2)),
    min_size=1,
    max_size=3,
)


def _homogeneous(parts):
    d = sum(parts[0][0])
    return MultiPoly(3, {e: c for e, c in parts if sum(e) == d})


FIXED_PRIMARY = [
    qs("z1^2", "z2^2"),
    qs("z1^2", "z1*z2", "z2^2"),
    qs("z1^4", "z1^3*z2", "z1^2*z2^2", "z1*z2^3", "z2^4", "z1*z2*(z1+z2)"),
    qs("z1^2*z2", "z1^4", "z2^3"),
    [parse_qq(t, 3) for t in ("z1^2", "z2^2", "z3^2", "z1*z2 + z2*z3")],
    [parse_qq(t, 3) for t in ("z1*z2", "z1*z3", "z2*z3", "z1^2 + z2^2 - z3^2", "z1^3")],
    qs("z1^3 - z2^2", "z1*z2"),  # weighted-homogeneous for weights (2, 3)
]


@pytest.mark.parametrize("gens", FIXED_PRIMARY, ids=lambda g: str(g[0]))
def test_colength_matches_macaulay_oracle(gens):
    n = gens[0].nvars
    assert colength(Ideal(gens)) == macaulay_colength(gens, n)


@settings(max_examples=30)
@given(st.lists(homog_terms, min_size=2, max_size=3), st.lists(homog_terms, min_size=1, max_size=3))
def test_membership_matches_macaulay_oracle(gen_parts, probe_parts):
    gens = [g for g in (_homogeneous(p) for p in gen_parts) if not g.is_zero()]
    assume(gens)
    gb = buchberger(gens)
    for parts in probe_parts:
        f = _homogeneous(parts)
        for candidate in (f, f * gens[0], f * gens[-1] + gens[0] * MultiPoly.var(1, 3)):
            assert gb.contains(candidate) == macaulay_member(candidate, gens, 3)


# ---------------------------------------------------------------- truncation and local order


TRUNC_CASES = [
    qs("z1^2 - z2^3", "z1*z2^2 + z2^4"),
    qs("z1*z2 - z1^3", "z2^2 - z1^2*z2 + z1^4"),
    qs("z1^3 + z2^3 - z1*z2"),
    [parse_qq(t, 3) for t in ("z1*z2 - z3^2", "z1^2 - z2*z3 + z3^3", "z2^2*z1 - z3")],
]
HOMOG_CASES = [
    qs("z1^2 - 3*z2^2", "z1^3*z2 + z2^4"),
    qs("z1*z2*(z1+z2)"),
    [parse_qq(t, 3) for t in ("z1*z2 - z3^2", "z1^3 - z2*z3^2 + z3^3", "z2^2*z1 - z3^3")],
]


def _mD(n, D):
    return [MultiPoly.monomial(m) for m in monomials_of_degree(n, D)]


@pytest.mark.parametrize("gens", HOMOG_CASES, ids=lambda g: str(g[0]))
@pytest.mark.parametrize("D", [3, 5, 7])
def test_truncated_homogeneous_basis_matches_full(gens, D):
    n = gens[0].nvars
    full = buchberger(gens + _mD(n, D))
    tb = buchberger(gens, truncate=D)
    assert set(tb.leading_monomials()) == {m for m in full.leading_monomials() if sum(m) < D}
    size = staircase_size(tb.leading_monomials() + list(monomials_of_degree(n, D)), n)
    assert size == colength(Ideal(gens + _mD(n, D)))
    lead = buchberger(gens, truncate=D, leading_only=True)
    assert set(lead.leading_monomials()) == set(tb.leading_monomials())


@pytest.mark.parametrize("gens", TRUNC_CASES, ids=lambda g: str(g[0]))
@pytest.mark.parametrize("D", [3, 5, 7])
def test_truncated_local_basis(gens, D):
    n = gens[0].nvars
    tb = buchberger(gens, LOCAL_ORDER, truncate=D)
    lead = buchberger(gens, LOCAL_ORDER, truncate=D, leading_only=True)
    assert set(lead.leading_monomials()) == set(tb.leading_monomials())
    # everything lives in the local ring modulo m^D
    assert all(sum(e) < D for g in tb.elements for e in g.terms)
    # local length of J + m^D never exceeds the global length of J + m^D
    size = staircase_size(tb.leading_monomials() + list(monomials_of_degree(n, D)), n)
    assert size <= colength(Ideal(gens + _mD(n, D)))


def test_truncation_rejects_global_inhomogeneous():
    with pytest.raises(ValueError):
        buchberger(TRUNC_CASES[0], DEGREVLEX, truncate=5)


def test_local_colength_examples():
    # node: local length of <f, m^k> structure; these are m-primary at 0 so local = global
    assert local_colength_at_origin(qs("z1^2", "z2^2")) == 4
    assert local_colength_at_origin(qs("z1^3 - z2^2", "z1*z2")) == 5
    # the point (1, 0) is invisible to the local count
    pts = Ideal(qs("z2", "z1^2 - z1"))
    assert colength(pts) == 2
    assert local_colength_at_origin(pts.gb().elements) == 1
    # z1^5 - z2 vanishes to order one; locally <z2, z1^10>
    assert local_colength_at_origin(qs("z1^5 - z2", "z2^2")) == 10
    assert local_colength_at_origin(qs("z1 - 1", "z2")) == 0


@pytest.mark.parametrize("gens", FIXED_PRIMARY, ids=lambda g: str(g[0]))
def test_local_colength_equals_global_for_origin_supported(gens):
    assert local_colength_at_origin(gens) == colength(Ideal(gens))


def test_local_colength_away_from_other_points():
    rng = random.Random(7)
    for _ in range(4):
        # origin with multiplicity structure plus two far points
        far = [(rng.randint(1, 5), rng.randint(-5, 5)), (rng.randint(-5, -1), rng.randint(1, 5))]
        local = Ideal(qs("z1^2", "z1*z2", "z2^3"))
        I = local
        for a, b in far:
            I = Ideal(
                [f * g for f in I.gb().elements for g in (Q("z1") - a, Q("z2") - b)]
            )
        assert colength(I) == 4 + 2
        assert local_colength_at_origin(I.gb().elements) == 4
