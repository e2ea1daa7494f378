"""Parametric families of ideals and their flat limits as e -> 0.

The total space of a family lives in ``Q[z1..zn, e]`` (``e`` last).  The limit
ideal is obtained by saturating the total-space ideal by ``e`` and setting
``e = 0``; its colength is checked against the colength of the generic fiber.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from gmpy2 import mpq

from .errors import (
    DuplicatePointFamily,
    GradedInclusionViolation,
    InternalLengthMismatch,
    NotZeroDimensionalFiber,
)
from .groebner import buchberger, normal_form
from .ideal import Ideal, _gb_minimal_gens, colength, ideal_intersect, ideal_product, is_zero_dimensional, saturate
from .poly import (
    EPS,
    EPSFRAC,
    EpsPoly,
    EpsRationalFn,
    MultiPoly,
    adjoin_eps,
    clear_denominators,
    eps_to_frac,
    set_eps_zero,
    specialize_eps,
    split_eps,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointFamily:
    """N points in n-space whose coordinates are polynomials in e."""

    n: int
    points: tuple[tuple[EpsPoly, ...], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("a point family needs at least one point")
        for row in self.points:
            if len(row) != self.n:
                raise ValueError("point %r does not have %d coordinates" % (row, self.n))
        if len(set(self.points)) != len(self.points):
            raise DuplicatePointFamily("two points coincide as functions of e")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PointFamily":
        pts = []
        for row in rows:
            pts.append(tuple(c if isinstance(c, EpsPoly) else EpsPoly.const(c) for c in row))
        return cls(len(pts[0]), tuple(pts))

    @property
    def N(self) -> int:
        return len(self.points)

    def limit_points(self) -> list[tuple[mpq, ...]]:
        return [tuple(c.constant_term() for c in row) for row in self.points]

    @property
    def colliding(self) -> bool:
        """All points tend to one common point."""
        return len(set(self.limit_points())) == 1

    @property
    def colliding_at_origin(self) -> bool:
        return all(c.constant_term() == 0 for row in self.points for c in row)

    def translated(self, shift: Sequence) -> "PointFamily":
        shift = [mpq(s) for s in shift]
        rows = tuple(tuple(c - s for c, s in zip(row, shift)) for row in self.points)
        return PointFamily(self.n, rows)


@dataclass
class IdealFamily:
    """Ideal in ``Q[e][z1..zn]`` whose fibers at small e != 0 form the family."""

    n: int
    generators: list[MultiPoly]
    N: int | None = None
    translation: tuple[mpq, ...] | None = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.is_zero():
                raise ValueError("family generator is identically zero")
            if g.nvars != self.n:
                raise ValueError("generator %s is not in %d variables" % (g, self.n))
            if g.field == EPSFRAC:
                g = clear_denominators(g)[0]
            elif g.field != EPS:
                g = g.map_coeffs(EpsPoly.const, EPS)
            gens.append(g)
        self.generators = gens

    def total_space(self) -> list[MultiPoly]:
        return [adjoin_eps(g) for g in self.generators]

    def fiber(self, value) -> Ideal:
        return Ideal([specialize_eps(g, value) for g in self.generators], self.n)

    def power(self, p: int) -> "IdealFamily":
        gens = list(self.generators)
        for _ in range(p - 1):
            prods = {a * b for a in gens for b in self.generators}
            gens = sorted(prods, key=str)
        return IdealFamily(self.n, gens, self.N, self.translation, list(self.warnings))

    def translated(self, shift: Sequence) -> "IdealFamily":
        shift = [mpq(s) for s in shift]
        images = [MultiPoly.var(i, self.n, EPS) + EpsPoly.const(s) for i, s in enumerate(shift)]
        gens = [g.substitute_linear(images) for g in self.generators]
        old = self.translation or (mpq(0),) * self.n
        return IdealFamily(self.n, gens, self.N, tuple(a + b for a, b in zip(old, shift)), list(self.warnings))


def family_from_points(pf: PointFamily) -> IdealFamily:
    """Vanishing ideal over Q(e) of the moving points, made e-integral.

    Families converging to a common point other than the origin are
    translated first; families that do not collide get a warning.
    """
    warnings = []
    shift = None
    if pf.colliding and not pf.colliding_at_origin:
        shift = pf.limit_points()[0]
        pf = pf.translated(shift)
        warnings.append("points collide at %s; translated to the origin" % _fmt_point(shift))
    elif not pf.colliding:
        warnings.append("points do not collide at a single point; stabilization verdicts are suppressed")
    n = pf.n
    ideal = None
    for row in pf.points:
        gens = [
            MultiPoly.var(i, n, EPSFRAC) - MultiPoly.constant(EpsRationalFn(c), n, EPSFRAC)
            for i, c in enumerate(row)
        ]
        m = Ideal(gens, n, EPSFRAC)
        ideal = m if ideal is None else ideal_intersect(ideal, m)
    gens = [clear_denominators(g)[0] for g in ideal.gb().elements]
    return IdealFamily(n, gens, pf.N, tuple(shift) if shift else None, warnings)


def _fmt_point(pt) -> str:
    return "(" + ", ".join(str(x) for x in pt) + ")"


# ---------------------------------------------------------------------------
# homogeneity of the total space


def _nullspace(rows: list[list[mpq]], ncols: int) -> list[list[mpq]]:
    pivots: dict[int, list[mpq]] = {}
    order: list[int] = []
    for row in rows:
        r = list(row)
        for col in order:
            if r[col]:
                f = r[col]
                r = [a - f * b for a, b in zip(r, pivots[col])]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = 1 / r[lead]
        r = [x * inv for x in r]
        for col in order:
            p = pivots[col]
            if p[lead]:
                f = p[lead]
                pivots[col] = [a - f * b for a, b in zip(p, r)]
        pivots[lead] = r
        order.append(lead)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [mpq(0)] * ncols
        v[fcol] = mpq(1)
        for col, p in pivots.items():
            v[col] = -p[fcol]
        basis.append(v)
    return basis


def homogenizing_weights(polys: Sequence[MultiPoly], search: int = 3) -> tuple[int, ...] | None:
    """Positive integer weights making every polynomial weighted-homogeneous."""
    if not polys:
        return None
    nv = polys[0].nvars
    rows = []
    for g in polys:
        exps = list(g.terms)
        for a in exps[1:]:
            rows.append([mpq(x - y) for x, y in zip(a, exps[0])])
    basis = _nullspace(rows, nv)
    if not basis:
        return None
    best = None
    for coeffs in itertools.product(range(-search, search + 1), repeat=len(basis)):
        v = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(nv)]
        if all(x > 0 for x in v):
            den = 1
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
            w = [int(x * den) for x in v]
            g = 0
            for x in w:
                g = gcd(g, x)
            w = tuple(x // g for x in w)
            if best is None or (max(w), w) < (max(best), best):
                best = w
    return best


# ---------------------------------------------------------------------------
# flat limits


@dataclass
class FlatLimit:
    limit: Ideal
    saturated: list[MultiPoly]
    generic_length: int
    weights: tuple[int, ...] | None


def generic_colength(fam: IdealFamily, weights: tuple[int, ...] | None = None) -> int:
    """Colength of the fiber over Q(e).

    For weighted-homogeneous total spaces all fibers at e != 0 are isomorphic
    by rescaling, so the fiber at e = 1 is used; otherwise the basis is
    computed over Q(e).
    """
    if weights is None:
        weights = homogenizing_weights(fam.total_space())
    fiber = _generic_fiber(fam, weights)
    if not is_zero_dimensional(fiber):
        raise NotZeroDimensionalFiber("the generic fiber of the family is not zero-dimensional")
    return colength(fiber)


def _saturate_total(gens: Sequence[MultiPoly], weights) -> list[MultiPoly]:
    nv = gens[0].nvars
    eps = MultiPoly.var(nv - 1, nv)
    sat = saturate(Ideal(gens, nv), eps, weights=weights)
    return sat.generators


def _specialize(sat: Sequence[MultiPoly], n: int) -> Ideal:
    special = [set_eps_zero(split_eps(g)) for g in sat]
    special = [g for g in special if not g.is_zero()]
    if not special:
        raise NotZeroDimensionalFiber("the special fiber is the whole ring")
    return Ideal.from_basis(buchberger(special))


def flat_limit_detail(
    fam: IdealFamily,
    generic_length: int | None = None,
    total_space: Sequence[MultiPoly] | None = None,
) -> FlatLimit:
    gens = list(total_space) if total_space is not None else fam.total_space()
    weights = homogenizing_weights(gens)
    if generic_length is None:
        generic_length = generic_colength(fam, weights)
    sat = _saturate_total(gens, weights)
    limit = _specialize(sat, fam.n)
    if not is_zero_dimensional(limit):
        raise InternalLengthMismatch("limit ideal is not zero-dimensional")
    ell = colength(limit)
    if ell != generic_length:
        raise InternalLengthMismatch(
            "limit colength %d differs from generic fiber colength %d" % (ell, generic_length)
        )
    return FlatLimit(limit, sat, generic_length, weights)


def flat_limit(fam: IdealFamily) -> Ideal:
    """Limit ideal of the family as e -> 0."""
    return flat_limit_detail(fam).limit


# ---------------------------------------------------------------------------
# towers of limits of powers


@dataclass
class LimitTower:
    family: IdealFamily
    p_max: int
    limits: list[Ideal]
    generic_lengths: list[int]

    @property
    def n(self) -> int:
        return self.family.n

    def limit(self, p: int) -> Ideal:
        return self.limits[p - 1]

    def length(self, p: int) -> int:
        return self.generic_lengths[p - 1]


def _generic_fiber(fam: IdealFamily, weights) -> Ideal:
    if weights is not None:
        return fam.fiber(1)
    return Ideal([eps_to_frac(g) for g in fam.generators], fam.n, EPSFRAC)


def limit_tower(fam: IdealFamily, p_max: int, check: bool = True) -> LimitTower:
    """Limits of the powers ``fam^p`` for ``p = 1..p_max``.

    The total space of ``fam^p`` is built as the saturated total space of
    ``fam^(p-1)`` times the generators of ``fam``; both have the same
    saturation.  Generic fibers are powered alongside.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    base = fam.total_space()
    weights = homogenizing_weights(base)
    fiber1 = _generic_fiber(fam, weights)
    fiber = fiber1
    limits: list[Ideal] = []
    lengths: list[int] = []
    sat_prev: list[MultiPoly] | None = None
    for p in range(1, p_max + 1):
        if sat_prev is None:
            total = base
        else:
            total = sorted({a * b for a in sat_prev for b in base}, key=str)
            fiber = _gb_minimal_gens(ideal_product(fiber, fiber1))
        if not is_zero_dimensional(fiber):
            raise NotZeroDimensionalFiber("the generic fiber of the family is not zero-dimensional")
        gl = colength(fiber)
        res = flat_limit_detail(fam, gl, total)
        limits.append(res.limit)
        lengths.append(gl)
        sat_prev = res.saturated
        log.info("limit p=%d: colength %d", p, gl)
    tower = LimitTower(fam, p_max, limits, lengths)
    if check:
        check_graded_inclusion(tower)
    return tower


def check_graded_inclusion(tower: LimitTower) -> None:
    for p in range(1, tower.p_max + 1):
        for q in range(p, tower.p_max + 1 - p):
            target = tower.limit(p + q)
            for a in tower.limit(p).generators:
                for b in tower.limit(q).generators:
                    if not target.contains(a * b):
                        raise GradedInclusionViolation(
                            "I_(%d) * I_(%d) not contained in I_(%d)" % (p, q, p + q)
                        )


def membership_in_limit(f: MultiPoly, fam: IdealFamily, p: int, tower: LimitTower | None = None) -> bool:
    """Is ``f`` in the limit of ``fam^p``?"""
    if tower is None or tower.p_max < p:
        tower = limit_tower(fam, p, check=False)
    return tower.limit(p).contains(f)


def support_point(I: Ideal) -> tuple[mpq, ...] | None:
    """The single rational point of V(I), or None if V(I) is not one such point."""
    gb = I.gb()
    if gb.is_unit() or not is_zero_dimensional(I):
        return None
    n = I.nvars
    pt = []
    for i in range(n):
        z = MultiPoly.var(i, n)
        powers = [normal_form(MultiPoly.one(n), gb)]
        minpoly = None
        k = 1
        while minpoly is None:
            powers.append(normal_form(z**k, gb))
            minpoly = _dependency(powers)
            k += 1
        # minpoly coefficients low -> high, monic
        deg = len(minpoly) - 1
        a = -minpoly[deg - 1] / deg
        expected = EpsPoly([-a, 1]) ** deg
        if tuple(minpoly) != expected.coeffs:
            return None
        pt.append(a)
    return tuple(pt)


def _dependency(vectors: list[MultiPoly]) -> list[mpq] | None:
    """Relation ``sum c_i v_i = 0`` with ``c_last = 1``, if one exists."""
    monos = sorted({e for v in vectors for e in v.terms})
    m = len(vectors)
    mat = [[v.terms.get(e, mpq(0)) for v in vectors] for e in monos]
    usable = [v for v in _nullspace(mat, m) if v[-1]]
    if not usable:
        return None
    v = usable[0]
    return [x / v[-1] for x in v]
