import itertools
import json
from pathlib import Path

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from greenlim.descriptor import (
    NewtonStaircase,
    descriptor,
    descriptors_equivalent_monomial,
    in_newton_polyhedron,
    newton_contains,
    newton_staircase,
    newton_vertices,
    normalize_rendering,
    render,
)
from greenlim.errors import NotMonomial, NotOriginSupported, UnsupportedDimension
from greenlim.ideal import Ideal, ideal_power, point_ideal
from greenlim.multiplicity import monomial_power, stabilization_index, tower_multiplicities
from greenlim.parse import parse_qq
from greenlim.poly import MultiPoly, monomials_of_degree

from helpers import PRESET_NAMES, lattice_in_newton, preset_family, preset_tower

GOLDEN = Path(__file__).parent / "golden" / "renderings.json"
Q = lambda s, n=2: parse_qq(s, n)  # noqa: E731


def I(*texts, n=2):
    return Ideal([Q(t, n) for t in texts])


def mpow(n, d):
    return Ideal.monomial(monomials_of_degree(n, d), n)


M2 = mpow(2, 2)
M4_Z1Z1Z2 = Ideal([MultiPoly.monomial(e) for e in monomials_of_degree(2, 4)] + [Q("z1^2*z2")])


# ---------------------------------------------------------------- descriptors


def test_descriptor_examples():
    assert descriptor(M2, 1).mass == 4
    d = descriptor(preset_tower("generic-3pt", 2).limit(2), 2)
    assert d.mass == 3
    assert normalize_rendering(render(d)) == normalize_rendering(
        "½·log max(|z1⁴|, |z1z2³|, |z2⁴|, |z1z2(z1+z2)|) + O(1)"
    )
    d = descriptor(M4_Z1Z1Z2, 2)
    assert d.mass == 3
    assert render(d) == "½·log max(|z1⁴|, |z1²z2|, |z2⁴|) + O(1)"


def test_descriptor_rejects_other_supports():
    with pytest.raises(NotOriginSupported):
        descriptor(point_ideal([(0, 0), (1, 0)]), 1)
    with pytest.raises(NotOriginSupported):
        descriptor(I("z1 - 1", "z2"), 1)
    # zero-dimensional with a second point (1, 1); the origin alone would pass
    with pytest.raises(NotOriginSupported):
        descriptor(I("z1^5 - z2", "z2^2 - z2"), 1)
    assert descriptor(I("z1^5 - z2", "z2^2"), 1).mass == 10
    with pytest.raises(ValueError):
        descriptor(M2, 0)


def test_render_examples():
    dqht = preset_tower("dqht-3pt").limit(2)
    assert render(descriptor(dqht, 2)) == "max(2·log|z1|, (3/2)·log|z2|) + O(1)"
    assert render(descriptor(I("z1", "z2"), 1)) == "log max(|z1|, |z2|) + O(1)"
    simplex = render(descriptor(preset_tower("simplex-n2", 2).limit(2), 2))
    prefix, args = normalize_rendering(simplex)
    assert prefix == "1/2log"
    assert {"|z1⁴|", "|z2⁴|", "|z1z2(z1+z2)|"} <= args


def test_golden_renderings():
    golden = json.loads(GOLDEN.read_text())
    ideals = {"m p=1": (I("z1", "z2"), 1), "m^2 p=1 (3 vars)": (mpow(3, 2), 1), "<z1^3, z2^2> p=3": (I("z1^3", "z2^2"), 3)}
    for name in PRESET_NAMES:
        tw = preset_tower(name, 2)
        for p in (1, 2):
            ideals["%s p=%d" % (name, p)] = (tw.limit(p), p)
    assert set(golden) == set(ideals)
    for key, (J, p) in ideals.items():
        got = render(descriptor(J, p))
        assert normalize_rendering(got) == normalize_rendering(golden[key]), key


def test_normalize_rendering():
    a = normalize_rendering("½·log max(|z1⁴|, |z1z2(z1+z2)|) + O(1)")
    b = normalize_rendering("1/2 log max(|z1z2(z1+z2)|,|z1⁴|)")
    assert a == b
    assert normalize_rendering("max((3/2)·log|z2|, 2·log|z1|)") == normalize_rendering("max(2·log|z1|, 3/2·log|z2|) + O(1)")


@pytest.mark.parametrize("J", [M2, I("z1^3 - z2^2", "z1*z2"), M4_Z1Z1Z2, I("z1^2", "z2^3")], ids=repr)
@pytest.mark.parametrize("p,k", [(1, 2), (2, 2), (1, 3)])
def test_mass_is_scale_invariant(J, p, k):
    assert descriptor(ideal_power(J, k), k * p).mass == descriptor(J, p).mass


@pytest.mark.parametrize("name", ["generic-3pt", "4pt-square", "two-point", "dqht-3pt", "simplex-n2"])
def test_stabilized_descriptor_has_mass_n(name):
    tw = preset_tower(name)
    es = tower_multiplicities(tw)
    N = tw.length(1)
    p = stabilization_index(tw, N, es)
    assert p is not None
    assert descriptor(tw.limit(p), p, es[p - 1]).mass == N


# ---------------------------------------------------------------- Newton staircases


def test_staircase_examples():
    assert set(newton_staircase(M2).minimal_exponents) == {(2, 0), (1, 1), (0, 2)}
    assert set(newton_staircase(M4_Z1Z1Z2).minimal_exponents) == {(4, 0), (2, 1), (1, 3), (0, 4)}
    assert newton_staircase(Ideal([parse_qq("z1", 1)])).minimal_exponents == ((1,),)
    with pytest.raises(NotMonomial):
        newton_staircase(I("z1^2 + z2^2", "z1*z2"))
    with pytest.raises(ValueError):
        NewtonStaircase(((1, 0), (2, 0)))


def test_staircase_matches_brute_force_antichain():
    # dominance filter by enumeration: a monomial is minimal iff no generator strictly divides it
    J = preset_tower("dqht-3pt").limit(3)
    exps = newton_staircase(J).minimal_exponents
    members = {e for d in range(13) for e in monomials_of_degree(2, d) if J.contains(MultiPoly.monomial(e))}
    minimal = {e for e in members if not any(f != e and all(a <= b for a, b in zip(f, e)) for f in members)}
    assert set(exps) == minimal


# ---------------------------------------------------------------- equivalence


def _mono_descriptor(exps, p):
    return descriptor(Ideal.monomial(exps), p)


def test_equivalence_examples():
    m2, m4 = descriptor(M2, 1), descriptor(mpow(2, 4), 2)
    assert descriptors_equivalent_monomial(m2, m4)
    assert not descriptors_equivalent_monomial(descriptor(M4_Z1Z1Z2, 2), m2)
    odd = _mono_descriptor([(4, 0), (0, 3), (2, 1)], 2)
    assert descriptors_equivalent_monomial(odd, odd)
    with pytest.raises(NotMonomial):
        descriptors_equivalent_monomial(descriptor(preset_tower("generic-3pt", 2).limit(2), 2), m2)


def _preset_monomial_descriptors():
    out = []
    for name in PRESET_NAMES:
        if preset_family(name)[0].n != 2:
            continue
        tw = preset_tower(name, 3)
        for p in range(1, 4):
            J = tw.limit(p)
            if all(len(g) == 1 for g in J.gb().elements):
                out.append(("%s/%d" % (name, p), descriptor(J, p)))
    return out


def test_equivalence_is_an_equivalence_relation_on_presets():
    ds = _preset_monomial_descriptors()
    assert len(ds) >= 8
    rel = {(a, b): descriptors_equivalent_monomial(x, y) for (a, x), (b, y) in itertools.product(ds, ds)}
    names = [a for a, _ in ds]
    for a in names:
        assert rel[a, a]
    for a, b in itertools.product(names, names):
        assert rel[a, b] == rel[b, a]
    for a, b, c in itertools.product(names, names, names):
        if rel[a, b] and rel[b, c]:
            assert rel[a, c]
    # the classes are not all the same: DQHT differs from the round ones
    assert not rel["dqht-3pt/2", "generic-3pt/1"]
    assert rel["two-point/1", "two-point/2"]


# ---------------------------------------------------------------- polyhedron membership


def test_polyhedron_examples():
    exps = [(4, 0), (0, 4)]
    assert in_newton_polyhedron((2, 2), exps)
    assert not in_newton_polyhedron((1, 2), exps)
    assert in_newton_polyhedron((mpq(1, 2), mpq(7, 2)), exps)
    assert not in_newton_polyhedron((-1, 9), exps)
    assert newton_vertices([(4, 0), (2, 2), (0, 4), (3, 3)]) == [(4, 0), (0, 4)]
    assert newton_contains([(2, 0), (0, 2)], [(1, 0), (0, 1)], scale=2)
    with pytest.raises(UnsupportedDimension):
        in_newton_polyhedron((1,) * 5, [(1,) * 5])


exps2 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4)
exps3 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4)


@settings(max_examples=200)
@given(exps2, st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_lp_matches_lattice_oracle_in_the_plane(exps, v):
    assert in_newton_polyhedron(v, exps) == lattice_in_newton(v, exps, k_max=6)


@settings(max_examples=60)
@given(exps3, st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)))
def test_lattice_membership_implies_lp_in_space(exps, v):
    if lattice_in_newton(v, exps, k_max=4):
        assert in_newton_polyhedron(v, exps)


@settings(max_examples=60)
@given(exps2, st.integers(1, 3))
def test_scaled_polyhedron_is_power(exps, k):
    # Gamma(J^k) = k Gamma(J)
    powered = monomial_power(exps, k)
    assert newton_contains(powered, exps, scale=k)
    assert newton_contains(exps, powered, scale=mpq(1, k))
