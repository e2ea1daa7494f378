"""Buchberger's algorithm, normal forms and elimination.

Internally an exponent vector is packed into one int (one 16-bit field per
variable plus a total-degree field on top) and a polynomial is a plain
``{packed: coeff}`` dict.  Over the prime field coefficients are bare ints
modulo ``PRIME``.  Basis elements are kept monic so reduction never divides.
"""

from __future__ import annotations

import heapq
import logging
from typing import Sequence

from .errors import EmptyGenerators, FieldMismatch, StepBudgetExceeded, VariableCountMismatch
from .poly import DEGREVLEX, EPS, EPSFRAC, GF, PRIME, Exponent, ModP, MonomialOrder, MultiPoly, eps_to_frac

log = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 500_000

FIELD_BITS = 16
_GUARD = 1 << (FIELD_BITS - 1)
MAX_EXPONENT = _GUARD - 1


class _Engine:
    """Packing, order keys and coefficient conventions for one computation."""

    def __init__(self, nvars: int, order: MonomialOrder, field: str):
        self.nvars = nvars
        self.order = order
        self.field = field
        self.modular = field == GF
        self.shift = FIELD_BITS * nvars
        self.fmask = (1 << FIELD_BITS) - 1
        self.guard = sum(_GUARD << (FIELD_BITS * i) for i in range(nvars + 1))
        # xor masks turning packed ints into order keys (larger = bigger monomial)
        if order.kind == "degrevlex":
            self._xor = (1 << self.shift) - 1
        elif order.kind == "negdegrevlex":
            self._xor = (1 << (self.shift + FIELD_BITS)) - 1
        else:
            self._xor = None
            self._keys: dict[int, tuple] = {}

    def pack(self, e: Exponent) -> int:
        d = sum(e)
        if d > MAX_EXPONENT:
            raise OverflowError("degree %d exceeds the packed exponent range" % d)
        x = d
        for a in reversed(e):
            x = (x << FIELD_BITS) | a
        return x

    def unpack(self, x: int) -> Exponent:
        m, b = self.fmask, FIELD_BITS
        out = []
        for _ in range(self.nvars):
            out.append(x & m)
            x >>= b
        return tuple(out)

    def degree(self, x: int) -> int:
        return x >> self.shift

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.pack(tuple(x if x > y else y for x, y in zip(self.unpack(a), self.unpack(b))))

    def coprime(self, a: int, b: int) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(self.unpack(a), self.unpack(b)))

    def key(self, x: int):
        if self._xor is not None:
            return x ^ self._xor
        k = self._keys.get(x)
        if k is None:
            k = self._keys[x] = self.order.key(self.unpack(x))
        return k

    def heapkey(self, x: int):
        if self._xor is not None:
            return -(x ^ self._xor)
        return self.order.negkey(self.unpack(x))

    def leading(self, p: dict) -> int:
        return max(p, key=self.key)

    # boundary conversions
    def to_packed(self, terms: dict) -> dict:
        pk = self.pack
        if self.modular:
            return {pk(e): c.v for e, c in terms.items()}
        return {pk(e): c for e, c in terms.items()}

    def to_poly(self, p: dict) -> MultiPoly:
        up = self.unpack
        if self.modular:
            terms = {up(x): ModP(c) for x, c in p.items()}
        else:
            terms = {up(x): c for x, c in p.items()}
        return MultiPoly._raw(self.nvars, terms, self.field)

    def monic(self, p: dict, lm: int) -> dict:
        lc = p[lm]
        if lc == 1:
            return p
        if self.modular:
            inv = pow(lc, -1, PRIME)
            return {x: c * inv % PRIME for x, c in p.items()}
        inv = 1 / lc
        return {x: c * inv for x, c in p.items()}


class _Reducer:
    """Division by a growing list of monic packed polynomials."""

    def __init__(self, engine: _Engine, truncate: int | None = None):
        self.eng = engine
        self.truncate = truncate
        self.lms: list[int] = []
        self.polys: list[dict] = []
        # tail terms by ascending degree, so truncated products can stop early
        self.tails: list[list] = []
        # packed exponent -> (divisor index or -1, number of lms already scanned)
        self._memo: dict[int, tuple[int, int]] = {}

    def add(self, lm: int, p: dict) -> None:
        self.lms.append(lm)
        self.polys.append(p)
        sh = self.eng.shift
        self.tails.append(sorted(((x >> sh, x, c) for x, c in p.items() if x != lm), key=lambda t: t[0]))

    def _divisor(self, e: int, skip: int) -> int:
        g = self.eng.guard
        lms = self.lms
        if skip >= 0:
            for j, lm in enumerate(lms):
                if j != skip and ((e | g) - lm) & g == g:
                    return j
            return -1
        hit = self._memo.get(e)
        start = 0
        if hit is not None:
            if hit[0] >= 0:
                return hit[0]
            start = hit[1]
        eg = e | g
        for j in range(start, len(lms)):
            if (eg - lms[j]) & g == g:
                self._memo[e] = (j, 0)
                return j
        self._memo[e] = (-1, len(lms))
        return -1

    def reduce(self, f: dict, full: bool = True, skip: int = -1) -> dict:
        """Remainder of ``f``; with ``full=False`` stop at the first irreducible head."""
        eng = self.eng
        xor = eng._xor
        heapkey = eng.heapkey
        modular = eng.modular
        sh = eng.shift
        cap = self.truncate
        p = dict(f)
        if xor is not None:
            heap = [-(x ^ xor) for x in p]
        else:
            heap = [(heapkey(x), x) for x in p]
        heapq.heapify(heap)
        push, pop = heapq.heappush, heapq.heappop
        rem: dict = {}
        lms, tails = self.lms, self.tails
        get = p.get
        huge = 1 << 62
        while heap:
            if xor is not None:
                e = (-pop(heap)) ^ xor
            else:
                e = pop(heap)[1]
            c = p.pop(e, None)
            if c is None:
                continue
            i = self._divisor(e, skip)
            if i < 0:
                rem[e] = c
                if not full:
                    rem.update(p)
                    return rem
                continue
            shift = e - lms[i]
            sdeg = shift >> sh
            tail = tails[i]
            if tail and tail[-1][0] + sdeg > MAX_EXPONENT:
                raise OverflowError("exponent exceeds the packed range")
            limit = huge if cap is None else cap - sdeg
            new = []
            if modular:
                for gd, ge, gc in tail:
                    if gd >= limit:
                        break
                    t = ge + shift
                    old = get(t)
                    if old is None:
                        p[t] = -c * gc % PRIME
                        new.append(t)
                    else:
                        v = (old - c * gc) % PRIME
                        if v:
                            p[t] = v
                        else:
                            del p[t]
            else:
                for gd, ge, gc in tail:
                    if gd >= limit:
                        break
                    t = ge + shift
                    old = get(t)
                    if old is None:
                        p[t] = -c * gc
                        new.append(t)
                    else:
                        v = old - c * gc
                        if v:
                            p[t] = v
                        else:
                            del p[t]
            if xor is not None:
                for t in new:
                    push(heap, -(t ^ xor))
            else:
                for t in new:
                    push(heap, (heapkey(t), t))
        return rem


class GroebnerBasis:
    """A Groebner basis (reduced unless built by hand) for one monomial order."""

    def __init__(self, elements: Sequence[MultiPoly], order: MonomialOrder, nvars: int, field: str):
        self.order = order
        self.nvars = nvars
        self.field = field
        self.elements = list(elements)
        self._engine = eng = _Engine(nvars, order, field)
        self._reducer = _Reducer(eng)
        for g in self.elements:
            p = eng.to_packed(g.terms)
            lm = eng.leading(p)
            self._reducer.add(lm, eng.monic(p, lm))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.order == other.order and set(self.elements) == set(other.elements)

    def __hash__(self) -> int:
        return hash(frozenset(self.elements))

    def leading_monomials(self) -> list[Exponent]:
        return [self._engine.unpack(x) for x in self._reducer.lms]

    def is_unit(self) -> bool:
        return any(x == 0 for x in self._reducer.lms)

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return normal_form(f, self)

    def contains(self, f: MultiPoly) -> bool:
        return normal_form(f, self).is_zero()

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.elements), default=0)

    def __repr__(self) -> str:
        return "GroebnerBasis(%s)" % ", ".join(str(g) for g in self.elements)


def _check_field(f: MultiPoly, basis: GroebnerBasis) -> MultiPoly:
    if f.nvars != basis.nvars:
        raise VariableCountMismatch("%d vs %d variables" % (f.nvars, basis.nvars))
    if f.field == basis.field:
        return f
    if basis.field == EPSFRAC and f.field in (EPS, "QQ"):
        return eps_to_frac(f)
    raise FieldMismatch("polynomial over %s, basis over %s" % (f.field, basis.field))


def normal_form(f: MultiPoly, basis: GroebnerBasis) -> MultiPoly:
    """Fully reduced remainder of ``f`` modulo ``basis``."""
    f = _check_field(f, basis)
    if f.is_zero():
        return f
    eng = basis._engine
    return eng.to_poly(basis._reducer.reduce(eng.to_packed(f.terms)))


def _prepare(generators: Sequence[MultiPoly]) -> tuple[int, str, list[dict]]:
    gens = [g for g in generators if not g.is_zero()]
    if not generators:
        raise EmptyGenerators("no generators")
    nvars = generators[0].nvars
    field = generators[0].field
    for g in generators:
        if g.nvars != nvars:
            raise VariableCountMismatch("mixed variable counts in generator list")
    if any(g.field != field for g in gens):
        if all(g.field in (EPS, EPSFRAC, "QQ") for g in gens) and any(g.field != "QQ" for g in gens):
            gens = [eps_to_frac(g) for g in gens]
            field = EPSFRAC
        else:
            raise FieldMismatch("mixed coefficient fields")
    if field == EPS:
        gens = [eps_to_frac(g) for g in gens]
        field = EPSFRAC
    return nvars, field, [g.terms for g in gens]


def buchberger(
    generators: Sequence[MultiPoly],
    order: MonomialOrder = DEGREVLEX,
    *,
    chain_criterion: bool = True,
    coprime_criterion: bool = True,
    step_budget: int = DEFAULT_STEP_BUDGET,
    truncate: int | None = None,
    leading_only: bool = False,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Generators over Q[e] are computed over Q(e).  S-pairs are taken in
    order of increasing lcm degree.  ``step_budget`` bounds the number of
    S-polynomial reductions.

    ``truncate=D`` asserts that every monomial of degree >= D lies in the
    ideal.  The computation then runs in the finite-dimensional algebra
    ``R / m^D``: such terms are dropped and pairs with lcm degree >= D are
    skipped.  The result is a basis of the ideal modulo ``m^D`` (its leading
    monomials together with ``m^D`` span the leading ideal).  Skipping those
    pairs is only sound when an S-polynomial has no terms below its lcm
    degree: under the local ``negdegrevlex`` order, or for homogeneous
    generators.  Other inputs raise ValueError.

    ``leading_only`` skips tail reduction: the result is a minimal basis
    with the right leading monomials but unreduced tails.
    """
    if not generators:
        raise EmptyGenerators("no generators")
    nvars, field, raw = _prepare(generators)
    eng = _Engine(nvars, order, field)
    if truncate is not None:
        if truncate > MAX_EXPONENT:
            raise OverflowError("truncation degree exceeds the packed exponent range")
        if order.kind != "negdegrevlex" and any(len({sum(e) for e in p}) > 1 for p in raw):
            raise ValueError("truncation under a global order needs homogeneous generators")
        raw = [{e: c for e, c in p.items() if sum(e) < truncate} for p in raw]
    polys = [eng.to_packed(p) for p in raw if p]
    if not polys:
        return GroebnerBasis([], order, nvars, field)
    key = eng.key
    red = _Reducer(eng, truncate)
    # start from interreduced input (cheap and shrinks the pair set)
    polys.sort(key=lambda p: key(eng.leading(p)))
    G: list[tuple[int, dict]] = []
    for p in polys:
        r = red.reduce(p)
        if r:
            lm = eng.leading(r)
            r = eng.monic(r, lm)
            red.add(lm, r)
            G.append((lm, r))

    pairs: list = []
    pending: set[tuple[int, int]] = set()

    def push_pairs(j: int) -> None:
        lmj = G[j][0]
        for i in range(j):
            lmi = G[i][0]
            if coprime_criterion and eng.coprime(lmi, lmj):
                continue
            lcm = eng.lcm(lmi, lmj)
            d = eng.degree(lcm)
            if truncate is not None and d >= truncate:
                continue
            heapq.heappush(pairs, (d, key(lcm), i, j, lcm))
            pending.add((i, j))

    for j in range(len(G)):
        push_pairs(j)

    steps = 0
    while pairs and not any(lm == 0 for lm, _ in G[-1:]):
        _, _, i, j, lcm = heapq.heappop(pairs)
        pending.discard((i, j))
        if chain_criterion and _chain_skip(eng, i, j, lcm, G, pending):
            continue
        steps += 1
        if steps > step_budget:
            raise StepBudgetExceeded("more than %d S-pair reductions" % step_budget)
        s = _spoly(eng, G[i], G[j], lcm, truncate)
        if not s:
            continue
        r = red.reduce(s, full=not leading_only)
        if not r:
            continue
        lm = eng.leading(r)
        r = eng.monic(r, lm)
        red.add(lm, r)
        G.append((lm, r))
        push_pairs(len(G) - 1)
    log.debug("buchberger: %d steps, %d raw elements", steps, len(G))
    return _reduced(eng, G, truncate, tails=not leading_only)


def _chain_skip(eng: _Engine, i: int, j: int, lcm: int, G, pending) -> bool:
    for k, (lmk, _) in enumerate(G):
        if k == i or k == j:
            continue
        if not eng.divides(lmk, lcm):
            continue
        a, b = (i, k) if i < k else (k, i)
        c, d = (j, k) if j < k else (k, j)
        if (a, b) not in pending and (c, d) not in pending:
            return True
    return False


def _spoly(eng: _Engine, gi, gj, lcm: int, truncate=None) -> dict:
    (lmi, pi), (lmj, pj) = gi, gj
    si, sj = lcm - lmi, lcm - lmj
    cap_i = cap_j = None
    if truncate is not None:
        cap_i = truncate - eng.degree(si)
        cap_j = truncate - eng.degree(sj)
    sh = eng.shift
    modular = eng.modular
    out: dict = {}
    for x, c in pi.items():
        if x != lmi and (cap_i is None or x >> sh < cap_i):
            out[x + si] = c
    for x, c in pj.items():
        if x == lmj or (cap_j is not None and x >> sh >= cap_j):
            continue
        t = x + sj
        v = out.get(t)
        if v is None:
            out[t] = (-c) % PRIME if modular else -c
        else:
            v = (v - c) % PRIME if modular else v - c
            if v:
                out[t] = v
            else:
                del out[t]
    return out


def _reduced(eng: _Engine, G: list[tuple[int, dict]], truncate=None, tails: bool = True) -> GroebnerBasis:
    order, nvars, field = eng.order, eng.nvars, eng.field
    if any(lm == 0 for lm, _ in G):
        one = MultiPoly.one(nvars, field)
        return GroebnerBasis([one], order, nvars, field)
    # minimal: drop elements whose leading monomial is divisible by another's
    G = sorted(G, key=lambda t: eng.key(t[0]))
    minimal: list[tuple[int, dict]] = []
    for lm, p in G:
        if not any(eng.divides(m, lm) for m, _ in minimal):
            minimal.append((lm, p))
    if not tails:
        return GroebnerBasis([eng.to_poly(p) for _, p in minimal], order, nvars, field)
    red = _Reducer(eng, truncate)
    for lm, p in minimal:
        red.add(lm, p)
    out = []
    for idx, (lm, p) in enumerate(minimal):
        tail = dict(p)
        lc = tail.pop(lm)
        r = red.reduce(tail, skip=idx)
        r[lm] = lc
        out.append(eng.to_poly(r))
    return GroebnerBasis(out, order, nvars, field)


def groebner_basis(generators: Sequence[MultiPoly], order: MonomialOrder = DEGREVLEX, **kw) -> GroebnerBasis:
    return buchberger(generators, order, **kw)


def eliminate(
    generators: Sequence[MultiPoly],
    drop_count: int,
    order: MonomialOrder | None = None,
    **kw,
) -> list[MultiPoly]:
    """Generators of the intersection with the ring of the last variables.

    The first ``drop_count`` variables are eliminated; the result lives in
    ``nvars - drop_count`` variables.  ``order`` must be a block order whose
    first block is exactly the dropped variables.
    """
    if not generators:
        raise EmptyGenerators("no generators")
    if order is None:
        order = MonomialOrder.elimination(drop_count) if drop_count else DEGREVLEX
    elif drop_count and (order.kind != "block" or order.splits[0] != drop_count):
        raise ValueError("order must start with an elimination block of size %d" % drop_count)
    gb = buchberger(generators, order, **kw)
    out = []
    for g in gb.elements:
        if all(not any(e[:drop_count]) for e in g.terms):
            out.append(MultiPoly._raw(g.nvars - drop_count, {e[drop_count:]: c for e, c in g.terms.items()}, g.field))
    return out
