"""Ideals of polynomial rings and the usual ideal-level algebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import (
    DuplicatePoint,
    EmptyGenerators,
    NotZeroDimensional,
    RingMismatch,
    ZeroPolynomial,
)
from .groebner import GroebnerBasis, buchberger, eliminate, normal_form
from .poly import DEGREVLEX, EPS, EPSFRAC, QQ, Exponent, MonomialOrder, MultiPoly, to_field


class Ideal:
    """Ideal given by generators; reduced Groebner bases are cached per order.

    Two ideals compare equal iff their reduced degrevlex bases coincide.
    """

    def __init__(self, generators: Iterable[MultiPoly], nvars: int | None = None, field: str | None = None):
        gens = [g for g in generators if not g.is_zero()]
        if nvars is None:
            if not gens:
                raise EmptyGenerators("cannot infer the ring of the zero ideal")
            nvars = gens[0].nvars
        if field is None:
            field = gens[0].field if gens else QQ
        if field == EPS:
            # Q[e] generators span an ideal of Q(e)[z]; that is where its bases live
            field = EPSFRAC
        self.nvars = nvars
        self.field = field
        self.generators = [to_field(g, field) for g in gens]
        for g in self.generators:
            if g.nvars != nvars:
                raise RingMismatch("generator in %d variables, ring has %d" % (g.nvars, nvars))
        self._gb: dict[MonomialOrder, GroebnerBasis] = {}

    @classmethod
    def from_basis(cls, gb: GroebnerBasis) -> "Ideal":
        ideal = cls(gb.elements, gb.nvars, gb.field)
        ideal._gb[gb.order] = gb
        return ideal

    @classmethod
    def unit(cls, nvars: int, field: str = QQ) -> "Ideal":
        return cls([MultiPoly.one(nvars, field)], nvars, field)

    @classmethod
    def maximal(cls, nvars: int, point: Sequence | None = None) -> "Ideal":
        point = point or [0] * nvars
        return cls([MultiPoly.var(i, nvars) - mpq(a) for i, a in enumerate(point)], nvars)

    @classmethod
    def monomial(cls, exponents: Iterable[Exponent], nvars: int | None = None) -> "Ideal":
        exps = [tuple(e) for e in exponents]
        n = nvars if nvars is not None else len(exps[0])
        return cls([MultiPoly.monomial(e, n) for e in exps], n)

    def gb(self, order: MonomialOrder = DEGREVLEX, **kw) -> GroebnerBasis:
        basis = self._gb.get(order)
        if basis is None:
            if not self.generators:
                basis = GroebnerBasis([], order, self.nvars, self.field)
            else:
                basis = buchberger(self.generators, order, **kw)
            self._gb[order] = basis
        return basis

    def ring(self) -> tuple[int, str]:
        return self.nvars, self.field

    def _same_ring(self, other: "Ideal") -> None:
        if self.nvars != other.nvars or self.field != other.field:
            raise RingMismatch("ideals live in different rings: %r vs %r" % (self.ring(), other.ring()))

    def contains(self, f: MultiPoly) -> bool:
        return normal_form(f, self.gb()).is_zero()

    def __contains__(self, f: MultiPoly) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        self._same_ring(other)
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_monomial(self) -> bool:
        return all(len(g) == 1 for g in self.gb().elements)

    def is_homogeneous(self, weights: tuple[int, ...] | None = None) -> bool:
        return all(g.is_homogeneous(weights) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.ring() != other.ring():
            return False
        return self.gb() == other.gb()

    def __hash__(self) -> int:
        return hash(self.gb())

    def __repr__(self) -> str:
        return "Ideal(%s)" % ", ".join(str(g) for g in self.gb().elements)


# ---------------------------------------------------------------------------


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    I._same_ring(J)
    return Ideal(I.generators + J.generators, I.nvars, I.field)


def _product_gens(I: Ideal, J: Ideal) -> list[MultiPoly]:
    out = []
    seen = set()
    for a in I.generators:
        for b in J.generators:
            p = a * b
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """Ideal generated by all pairwise products of generators."""
    I._same_ring(J)
    return Ideal(_product_gens(I, J), I.nvars, I.field)


def _gb_minimal_gens(ideal: Ideal) -> Ideal:
    # drop generators already in the ideal of the others, judged through the GB
    gb = ideal.gb()
    if len(ideal.generators) <= len(gb.elements):
        return ideal
    out = Ideal(gb.elements, ideal.nvars, ideal.field)
    out._gb[gb.order] = gb
    return out


def ideal_power(I: Ideal, p: int) -> Ideal:
    """``I^p`` by repeated products, replacing the generators by the reduced
    basis whenever that is the shorter list."""
    if p < 1:
        raise ValueError("power must be >= 1")
    out = I
    for _ in range(p - 1):
        out = _gb_minimal_gens(ideal_product(out, I))
    return out


def _adjoin_front(f: MultiPoly, k: int = 1) -> MultiPoly:
    return MultiPoly._raw(f.nvars + k, {(0,) * k + e: c for e, c in f.terms.items()}, f.field)


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating t from ``t*I + (1-t)*J``."""
    I._same_ring(J)
    n, field = I.nvars, I.field
    if not I.generators:
        return I
    if not J.generators:
        return J
    t = MultiPoly.var(0, n + 1, field)
    one = MultiPoly.one(n + 1, field)
    gens = [t * _adjoin_front(g) for g in I.generators]
    gens += [(one - t) * _adjoin_front(g) for g in J.generators]
    return Ideal(eliminate(gens, 1), n, field)


def _permute(f: MultiPoly, perm: Sequence[int]) -> MultiPoly:
    # new exponent position j takes old position perm[j]
    return MultiPoly._raw(f.nvars, {tuple(e[i] for i in perm): c for e, c in f.terms.items()}, f.field)


def saturate_variable_homogeneous(I: Ideal, var: int, weights: tuple[int, ...]) -> Ideal:
    """``I : x_var^∞`` for an ideal homogeneous w.r.t. ``weights``.

    Moves ``x_var`` to the last position, computes a weighted degrevlex basis
    and divides every element by its largest power of that variable.
    """
    n = I.nvars
    perm = [i for i in range(n) if i != var] + [var]
    inv = [perm.index(i) for i in range(n)]
    w = tuple(weights[i] for i in perm)
    order = MonomialOrder("wdegrevlex", weights=w)
    gens = [_permute(g, perm) for g in I.generators]
    gb = buchberger(gens, order)
    out = []
    for g in gb.elements:
        k = min(e[-1] for e in g.terms)
        h = MultiPoly._raw(n, {e[:-1] + (e[-1] - k,): c for e, c in g.terms.items()}, g.field)
        out.append(_permute(h, inv))
    return Ideal(out, n, I.field)


def saturate(I: Ideal, f: MultiPoly, weights: tuple[int, ...] | None = None) -> Ideal:
    """``I : f^∞`` by eliminating t from ``I + <1 - t*f>``.

    When ``f`` is a single variable and ``weights`` (positive) make every
    generator of ``I`` homogeneous, the weighted-degrevlex shortcut is used.
    """
    if f.is_zero():
        raise ZeroPolynomial("saturation by zero")
    if f.nvars != I.nvars:
        raise RingMismatch("saturating polynomial lives in another ring")
    if weights is not None and f.is_monomial():
        exp, _ = next(iter(f.terms.items()))
        if sum(exp) == 1 and I.is_homogeneous(weights):
            return saturate_variable_homogeneous(I, exp.index(1), weights)
    n, field = I.nvars, I.field
    t = MultiPoly.var(0, n + 1, field)
    gens = [_adjoin_front(g) for g in I.generators]
    gens.append(MultiPoly.one(n + 1, field) - t * _adjoin_front(to_field(f, field)))
    return Ideal(eliminate(gens, 1), n, field)


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[tuple[mpq, ...], ...]

    def __init__(self, points: Iterable[Sequence]):
        pts = tuple(tuple(mpq(x) for x in p) for p in points)
        if not pts:
            raise ValueError("empty point configuration")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points of different dimensions")
        if len(set(pts)) != len(pts):
            raise DuplicatePoint("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)


def point_ideal(pts: PointConfiguration | Iterable[Sequence]) -> Ideal:
    """Vanishing ideal of finitely many distinct rational points."""
    if not isinstance(pts, PointConfiguration):
        pts = PointConfiguration(pts)
    n = pts.dim
    out = Ideal.maximal(n, pts.points[0])
    for p in pts.points[1:]:
        out = ideal_intersect(out, Ideal.maximal(n, p))
    return out


def is_zero_dimensional(I: Ideal) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    gb = I.gb()
    if gb.is_unit():
        return True
    lms = gb.leading_monomials()
    for i in range(I.nvars):
        if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in lms):
            return False
    return True


def _check_finite(lms: Sequence[Exponent], nvars: int) -> None:
    for i in range(nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            raise NotZeroDimensional("no pure power of z%d among leading monomials" % (i + 1))


def _stair(lms: list[Exponent], n: int, prefix: tuple, out: list) -> None:
    if n == 1:
        b = min(m[0] for m in lms)
        out.extend((k,) + prefix for k in range(b))
        return
    b = min(m[-1] for m in lms if not any(m[:-1]))
    for k in range(b):
        _stair([m[:-1] for m in lms if m[-1] <= k], n - 1, (k,) + prefix, out)


def _stair_count(lms: list[Exponent], n: int) -> int:
    if n == 1:
        return min(m[0] for m in lms)
    b = min(m[-1] for m in lms if not any(m[:-1]))
    total = 0
    prev = None
    for k in range(b):
        sub = [m[:-1] for m in lms if m[-1] <= k]
        if prev is None or len(sub) != prev[0]:
            prev = (len(sub), _stair_count(sub, n - 1))
        total += prev[1]
    return total


def staircase_monomials(lms: Sequence[Exponent], nvars: int) -> list[Exponent]:
    """Monomials not divisible by any of ``lms`` (must be a finite set)."""
    lms = [tuple(m) for m in lms]
    if any(sum(m) == 0 for m in lms):
        return []
    _check_finite(lms, nvars)
    out: list[Exponent] = []
    _stair(lms, nvars, (), out)
    return out


def staircase_size(lms: Sequence[Exponent], nvars: int) -> int:
    lms = [tuple(m) for m in lms]
    if any(sum(m) == 0 for m in lms):
        return 0
    _check_finite(lms, nvars)
    return _stair_count(lms, nvars)


def standard_monomials(I: Ideal) -> list[Exponent]:
    gb = I.gb()
    return sorted(staircase_monomials(gb.leading_monomials(), I.nvars), key=lambda e: (sum(e), DEGREVLEX.key(e)))


def colength(I: Ideal) -> int:
    """Dimension of the quotient ring (sum of local lengths over V(I))."""
    gb = I.gb()
    if gb.is_unit():
        return 0
    return staircase_size(gb.leading_monomials(), I.nvars)
