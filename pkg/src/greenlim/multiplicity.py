"""Samuel functions, Hilbert-Samuel multiplicities and graded-family volumes."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from math import comb, factorial
from typing import Sequence

from gmpy2 import mpq

from .errors import MethodDisagreement, NoStabilization, NotSinglePoint, NotZeroDimensional
from .groebner import DEFAULT_STEP_BUDGET, buchberger
from .ideal import Ideal, _gb_minimal_gens, colength, ideal_product, is_zero_dimensional, staircase_size
from .limits import LimitTower
from .poly import DEGREVLEX, Exponent, MonomialOrder, MultiPoly, monomials_of_degree, reduce_mod_prime

log = logging.getLogger(__name__)

LOCAL_ORDER = MonomialOrder("negdegrevlex")

SECTION_HEIGHT = 101
DEFAULT_TRIALS = 8


@dataclass(frozen=True)
class SamuelTable:
    entries: tuple[tuple[int, int], ...]

    def lengths(self) -> list[int]:
        return [ell for _, ell in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MultiplicityReport:
    length: int
    multiplicity: int
    method: str
    complete_intersection: bool
    samuel: tuple[int, ...] = ()
    section_trials: tuple[int, ...] = ()

    def __post_init__(self):
        # e >= l with equality exactly for complete intersections
        if self.multiplicity < self.length:
            raise MethodDisagreement("multiplicity %d below length %d" % (self.multiplicity, self.length))
        if self.complete_intersection != (self.multiplicity == self.length):
            raise MethodDisagreement("complete-intersection flag inconsistent with e and l")


@dataclass(frozen=True)
class VolumeBounds:
    n: int
    per_p: tuple[tuple[int, int, mpq], ...]
    upper_bound: mpq
    length_estimator: tuple[mpq, ...]

    @property
    def argmin(self) -> int:
        return min(self.per_p, key=lambda row: (row[2], row[0]))[0]


# ---------------------------------------------------------------------------
# monomial ideals


def minimal_exponents(exps: Sequence[Exponent]) -> list[Exponent]:
    """Antichain of componentwise-minimal exponents."""
    out: list[Exponent] = []
    for e in sorted(set(map(tuple, exps)), key=lambda e: (sum(e), e)):
        if not any(all(a <= b for a, b in zip(m, e)) for m in out):
            out.append(e)
    return sorted(out, reverse=True)


def monomial_power(exps: Sequence[Exponent], k: int) -> list[Exponent]:
    current = minimal_exponents(exps)
    base = current
    for _ in range(k - 1):
        current = minimal_exponents([tuple(a + b for a, b in zip(x, y)) for x in current for y in base])
    return current


def monomial_exponents(I: Ideal) -> list[Exponent] | None:
    """Minimal exponents when the reduced basis of ``I`` is monomial."""
    gb = I.gb()
    if not all(len(g) == 1 for g in gb.elements):
        return None
    return minimal_exponents([next(iter(g.terms)) for g in gb.elements])


# ---------------------------------------------------------------------------
# Samuel function


def origin_power(I: Ideal) -> int | None:
    """Least s with m^s contained in I, or None when V(I) != {0}."""
    if I.is_unit():
        return 0
    if not is_zero_dimensional(I):
        return None
    bound = colength(I)
    gb = I.gb()
    n = I.nvars
    for s in range(1, bound + 1):
        if all(gb.contains(MultiPoly.monomial(e, n)) for e in monomials_of_degree(n, s)):
            return s
    return None


def samuel_table(I: Ideal, k_max: int) -> SamuelTable:
    """Exact colengths of I, I^2, ..., I^k_max."""
    if not is_zero_dimensional(I):
        raise NotZeroDimensional("Samuel function needs a zero-dimensional ideal")
    if k_max < I.nvars + 2:
        raise ValueError("k_max must be at least n + 2")
    stream = _length_stream(I, monomial_exponents(I))
    return SamuelTable(tuple((k, next(stream)) for k in range(1, k_max + 1)))


def nth_difference(values: dict[int, int], k: int, n: int) -> int:
    """n-th backward difference of k -> values[k] at k."""
    return sum((-1) ** i * comb(n, i) * values[k - i] for i in range(n + 1))


def _finite_difference_multiplicity(I: Ideal, k_budget: int) -> tuple[int, tuple[int, ...]]:
    n = I.nvars
    lengths: dict[int, int] = {}
    prev = None
    # compute lengths lazily, one power at a time
    exps = monomial_exponents(I)
    gen = _length_stream(I, exps)
    for k in range(1, k_budget + 1):
        lengths[k] = next(gen)
        if k >= n + 1:
            d = nth_difference(lengths, k, n)
            if prev is not None and d == prev:
                return d, tuple(lengths[i] for i in sorted(lengths))
            prev = d
    raise NoStabilization("n-th differences of the Samuel function did not settle within k <= %d" % k_budget)


def _length_stream(I: Ideal, exps):
    n = I.nvars
    if exps is not None:
        current = exps
        yield staircase_size(current, n)
        while True:
            current = minimal_exponents([tuple(a + b for a, b in zip(x, y)) for x in current for y in exps])
            yield staircase_size(current, n)
    s = origin_power(I)
    if s is not None and I.is_homogeneous():
        yield from _graded_length_stream(I, s)
        return
    power = I
    yield colength(power)
    while True:
        power = _gb_minimal_gens(ideal_product(power, I))
        yield colength(power)


def _graded_length_stream(I: Ideal, s: int, step_budget: int = DEFAULT_STEP_BUDGET):
    """Colengths of powers of a homogeneous ideal containing m^s.

    Every monomial of degree >= j*s lies in I^j, so only the part of I^j
    below that degree matters.  The basis of I^j is kept up to degree
    (j+1)*s - ord(I): multiplying by I then determines I^(j+1) below
    (j+1)*s exactly, because m^(j*s) * I sits in degree >= j*s + ord(I).
    """
    n = I.nvars
    base = I.gb().elements
    order = min(g.total_degree() for g in base)
    current = base
    j = 1
    while True:
        bound = j * s
        lms = [g.leading_monomial(DEGREVLEX) for g in current if g.total_degree() < bound]
        yield staircase_size(lms + list(monomials_of_degree(n, bound)), n)
        j += 1
        keep = (j + 1) * s - order
        prods = {a * b for a in current for b in base if a.total_degree() + b.total_degree() < keep}
        current = buchberger(sorted(prods, key=lambda f: (f.total_degree(), str(f))), truncate=keep, step_budget=step_budget).elements


# ---------------------------------------------------------------------------
# generic sections


def _full_degree(lms: Sequence[Exponent], n: int, below: int) -> int | None:
    """Least d < ``below`` such that every degree-d monomial is a multiple of some ``lms``."""
    for d in range(min((sum(m) for m in lms), default=below), below):
        if all(any(all(a <= b for a, b in zip(m, t)) for m in lms) for t in monomials_of_degree(n, d)):
            return d
    return None


def local_colength_at_origin(gens: Sequence[MultiPoly], start: int = 2, cap: int | None = None) -> int | None:
    """Length at the origin of the ideal generated by ``gens``.

    Computes a local-order basis of ``gens + m^D`` inside ``R / m^D``.  If
    every monomial of some degree d < D leads an element, then
    ``m^d <= J + m^(d+1)``, so ``m^d`` lies in J localized at 0 (Nakayama)
    and also in ``J + m^D``; the staircase is then the local quotient.
    D grows until that happens.  Returns None once the staircase exceeds
    ``cap``.
    """
    n = gens[0].nvars
    D = max(start, 2)
    while True:
        gb = buchberger(list(gens), LOCAL_ORDER, truncate=D, leading_only=True)
        if gb.is_unit():
            return 0
        lms = gb.leading_monomials()
        size = staircase_size(lms + list(monomials_of_degree(n, D)), n)
        if _full_degree(lms, n, D) is not None:
            return size
        if cap is not None and size > cap:
            return None
        D += max(1, D // 8)


def random_sections(I: Ideal, rng: random.Random, height: int = SECTION_HEIGHT) -> list[MultiPoly]:
    """n random integer combinations of the reduced basis of ``I``."""
    gens = I.gb().elements
    out = []
    for _ in range(I.nvars):
        f = MultiPoly.zero(I.nvars)
        for g in gens:
            f = f + g * rng.randint(-height, height)
        out.append(f)
    return out


def generic_section_colengths(
    I: Ideal,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    height: int = SECTION_HEIGHT,
    cap: int | None = None,
    stop_at: int | None = None,
) -> list[int]:
    """Local colengths at the origin of ideals spanned by random sections.

    Sections are taken modulo ``PRIME``; rank can only drop there, so each
    value is still an upper bound for the multiplicity.  Draws whose germ
    at the origin is not isolated (detected through ``cap``) are redrawn.
    Stops early once a value equals ``stop_at``.
    """
    rng = random.Random(seed)
    s = origin_power(I)
    if s is None:
        raise NotSinglePoint("generic sections need an ideal supported at the origin")
    if cap is None:
        cap = 4 * s ** I.nvars * max(1, I.nvars)
    out: list[int] = []
    attempts = 0
    while len(out) < trials:
        attempts += 1
        if attempts > 10 * trials:
            raise NoStabilization("could not draw isolated generic sections")
        combos = [reduce_mod_prime(f) for f in random_sections(I, rng, height)]
        if any(f.is_zero() for f in combos):
            continue
        ell = local_colength_at_origin(combos, start=s + 1, cap=cap)
        if ell is None:
            continue
        out.append(ell)
        if ell == stop_at:
            break
    return out


def hs_multiplicity(
    I: Ideal,
    k_budget: int | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    cross_check: bool = True,
    lower_bound: int | None = None,
) -> MultiplicityReport:
    """Length and Hilbert-Samuel multiplicity of a zero-dimensional ideal.

    The finite-difference value is confirmed by generic sections: every
    section value is at least e, and one of at most ``trials`` draws must
    hit it.  With a proven ``lower_bound`` on e (the length always is one)
    a single section value equal to the bound settles e without finite
    differences; the method is then ``generic-sections``.
    """
    if not is_zero_dimensional(I):
        raise NotZeroDimensional("multiplicity needs a zero-dimensional ideal")
    n = I.nvars
    if k_budget is None:
        k_budget = 2 * n + 4
    ell = colength(I)
    supported = origin_power(I) is not None
    sections: list[int] = []
    if lower_bound is not None and supported:
        bound = max(lower_bound, ell)
        sections = generic_section_colengths(I, 1, seed)
        if sections and sections[0] < bound:
            raise MethodDisagreement("section value %d below the proven bound %d" % (sections[0], bound))
        if sections == [bound]:
            return MultiplicityReport(ell, bound, "generic-sections", bound == ell, (), tuple(sections))
    e, samuel = _finite_difference_multiplicity(I, k_budget)
    method = "finite-differences"
    if cross_check and supported:
        if e not in sections:
            more = generic_section_colengths(I, trials - len(sections), seed + 1, cap=2 * e, stop_at=e)
            sections.extend(more)
        if e not in sections or min(sections) < e:
            raise MethodDisagreement(
                "finite differences give %d, generic sections give %s" % (e, tuple(sections))
            )
        method = "cross-checked"
    return MultiplicityReport(ell, e, method, e == ell, samuel, tuple(sections))


# ---------------------------------------------------------------------------
# graded families


def tower_multiplicities(tower: LimitTower, **kw) -> list[int]:
    """e(I_(p)) for p = 1..p_max.

    When I_(1) is supported at the origin alone the points collided at one
    point, so ``p^n N`` is a proven lower bound and is passed on.
    """
    n, N = tower.n, tower.length(1)
    single = origin_power(tower.limit(1)) is not None
    out = []
    for p in range(1, tower.p_max + 1):
        bound = p**n * N if single else None
        out.append(hs_multiplicity(tower.limit(p), lower_bound=bound, **kw).multiplicity)
    return out


def graded_volume(tower: LimitTower, multiplicities: Sequence[int] | None = None) -> VolumeBounds:
    """Scaled multiplicities ``e(I_(p)) / p^n`` and their running minimum."""
    if not tower.limits:
        raise ValueError("empty tower")
    if multiplicities is None:
        multiplicities = tower_multiplicities(tower)
    n = tower.n
    rows = []
    for p, e in enumerate(multiplicities, start=1):
        rows.append((p, e, mpq(e, p**n)))
    upper = min(r[2] for r in rows)
    est = tuple(mpq(factorial(n) * tower.length(p), p**n) for p in range(1, len(rows) + 1))
    return VolumeBounds(n, tuple(rows), upper, est)


def stabilization_index(tower: LimitTower, N: int, multiplicities: Sequence[int] | None = None) -> int | None:
    """Smallest p with ``e(I_(p)) == p^n * N``, or None."""
    for p in range(1, tower.p_max + 1):
        if origin_power(tower.limit(p)) is None:
            raise NotSinglePoint("I_(%d) is not supported at the origin alone" % p)
    if multiplicities is None:
        multiplicities = tower_multiplicities(tower)
    n = tower.n
    for p, e in enumerate(multiplicities, start=1):
        if e == p**n * N:
            return p
    return None
