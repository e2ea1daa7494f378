"""Scaled-generator descriptors of Green-function singularities.

A descriptor ``(p, I)`` stands for ``(1/p) * log max |g_i| + O(1)`` where the
``g_i`` generate ``I``; its residual mass is ``e(I) / p^n``.  Monomial
descriptors are compared through their Newton polyhedra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import NotMonomial, NotOriginSupported, UnsupportedDimension
from .ideal import Ideal, colength, is_zero_dimensional
from .multiplicity import minimal_exponents, monomial_exponents
from .poly import DEGREVLEX, Exponent, MultiPoly

MAX_POLYHEDRON_DIM = 4


@dataclass(frozen=True)
class SingularityDescriptor:
    scale: int
    generators: tuple[MultiPoly, ...]
    mass: mpq
    nvars: int

    def ideal(self) -> Ideal:
        return Ideal(self.generators, self.nvars)


@dataclass(frozen=True)
class NewtonStaircase:
    minimal_exponents: tuple[Exponent, ...]

    def __post_init__(self):
        exps = self.minimal_exponents
        for a in exps:
            for b in exps:
                if a != b and all(x <= y for x, y in zip(a, b)):
                    raise ValueError("%r divides %r; not an antichain" % (a, b))


def _origin_supported(I: Ideal) -> bool:
    if I.is_unit() or not is_zero_dimensional(I):
        return False
    # R/I is local of length l exactly when V(I) = {0}, and then m^l lies in I
    ell = colength(I)
    n = I.nvars
    return all(I.contains(MultiPoly.var(i, n) ** ell) for i in range(n))


def descriptor(I: Ideal, p: int, multiplicity: int | None = None) -> SingularityDescriptor:
    """Descriptor of ``(1/p) log max |g|`` over the reduced basis of ``I``."""
    if p < 1:
        raise ValueError("scale must be positive")
    if not _origin_supported(I):
        raise NotOriginSupported("ideal is not supported at the origin alone")
    if multiplicity is None:
        from .multiplicity import hs_multiplicity

        multiplicity = hs_multiplicity(I).multiplicity
    n = I.nvars
    return SingularityDescriptor(p, tuple(I.gb().elements), mpq(multiplicity, p**n), n)


def newton_staircase(I: Ideal) -> NewtonStaircase:
    exps = monomial_exponents(I)
    if exps is None:
        raise NotMonomial("reduced basis is not monomial")
    return NewtonStaircase(tuple(exps))


# ---------------------------------------------------------------------------
# Newton polyhedra: conv(E) + R^n_+


def _check_dim(n: int) -> None:
    if n > MAX_POLYHEDRON_DIM:
        raise UnsupportedDimension("Newton polyhedra are supported for n <= %d" % MAX_POLYHEDRON_DIM)


def in_newton_polyhedron(v: Sequence, exps: Sequence[Exponent]) -> bool:
    """Is ``v`` in conv(exps) + R^n_+ ?

    Exact phase-one simplex on ``sum l_j e_j + s = v``, ``sum l_j = 1`` with
    ``l, s >= 0``; Bland's rule keeps it finite.
    """
    v = [mpq(x) for x in v]
    n = len(v)
    _check_dim(n)
    if any(x < 0 for x in v):
        return False
    exps = [tuple(e) for e in exps]
    if not exps:
        return False
    m = len(exps)
    # columns: l_0..l_{m-1}, s_0..s_{n-1}, a ; rows: n coordinate rows + convexity row
    ncols = m + n + 1
    rows = []
    for i in range(n):
        row = [mpq(e[i]) for e in exps] + [mpq(1) if k == i else mpq(0) for k in range(n)] + [mpq(0), v[i]]
        rows.append(row)
    rows.append([mpq(1)] * m + [mpq(0)] * n + [mpq(1), mpq(1)])
    basis = list(range(m, m + n)) + [m + n]
    # objective: minimise a, i.e. reduced costs = -(convexity row) on non-basic columns
    obj = [-x for x in rows[n]]
    obj[m + n] = mpq(0)
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            break
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        for r in range(len(rows)):
            if r != leave and rows[r][enter]:
                f = rows[r][enter]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[leave])]
        f = obj[enter]
        obj = [a - f * b for a, b in zip(obj, rows[leave])]
        basis[leave] = enter
    # obj[-1] holds -(current value of a)
    return obj[-1] == 0


def newton_vertices(exps: Sequence[Exponent]) -> list[Exponent]:
    """Exponents that are vertices of the Newton polyhedron, lex-descending."""
    pts = minimal_exponents(exps)
    if pts:
        _check_dim(len(pts[0]))
    out = []
    for i, e in enumerate(pts):
        rest = pts[:i] + pts[i + 1 :]
        if not rest or not in_newton_polyhedron(e, rest):
            out.append(e)
    return sorted(out, reverse=True)


def newton_contains(outer: Sequence[Exponent], inner: Sequence[Exponent], scale=1) -> bool:
    """Is ``scale * Gamma(inner)`` inside ``Gamma(outer)``?"""
    s = mpq(scale)
    return all(in_newton_polyhedron([s * x for x in v], outer) for v in newton_vertices(inner))


def descriptors_equivalent_monomial(d1: SingularityDescriptor, d2: SingularityDescriptor) -> bool:
    """``Gamma(I1^p2) == Gamma(I2^p1)``, i.e. ``p2 Gamma(I1) == p1 Gamma(I2)``."""
    e1 = newton_staircase(d1.ideal()).minimal_exponents
    e2 = newton_staircase(d2.ideal()).minimal_exponents
    # p2*Gamma1 in p1*Gamma2  <=>  (p2/p1)*Gamma1 in Gamma2
    return newton_contains(e2, e1, mpq(d2.scale, d1.scale)) and newton_contains(e1, e2, mpq(d1.scale, d2.scale))


# ---------------------------------------------------------------------------
# rendering

_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_NAMED = {Fraction(1, 2): "½", Fraction(1, 3): "⅓", Fraction(1, 4): "¼", Fraction(2, 3): "⅔", Fraction(3, 4): "¾"}


def _mono(e: Exponent) -> str:
    parts = []
    for i, k in enumerate(e):
        if k:
            parts.append("z%d%s" % (i + 1, str(k).translate(_SUP) if k > 1 else ""))
    return "".join(parts) or "1"


def _coef(c: Fraction, lead: bool) -> str:
    """Scalar factor in front of a log; empty for 1."""
    if c == 1:
        return ""
    if c.denominator == 1:
        return "%d·" % c.numerator
    if lead and c in _NAMED:
        return _NAMED[c] + "·"
    return "(%d/%d)·" % (c.numerator, c.denominator)


def _poly_text(f: MultiPoly) -> str:
    terms = sorted(f.terms.items(), key=lambda t: DEGREVLEX.key(t[0]), reverse=True)
    out = ""
    for e, c in terms:
        c = Fraction(int(c.numerator), int(c.denominator))
        mono = _mono(e)
        if abs(c) == 1:
            body = mono
        elif mono == "1":
            body = str(abs(c))
        else:
            body = "%s·%s" % (abs(c), mono)
        if not out:
            out = "-" + body if c < 0 else body
        else:
            out += ("-" if c < 0 else "+") + body
    return out


def _generator_text(g: MultiPoly) -> str:
    if len(g.terms) == 1:
        return _mono(next(iter(g.terms)))
    n = g.nvars
    content = tuple(min(e[i] for e in g.terms) for i in range(n))
    rest = MultiPoly._raw(n, {tuple(a - b for a, b in zip(e, content)): c for e, c in g.terms.items()}, g.field)
    inner = _poly_text(rest)
    if not any(content):
        return inner
    return "%s(%s)" % (_mono(content), inner)


def render(d: SingularityDescriptor) -> str:
    """Human-readable ``(1/p)·log max(|g|, ...) + O(1)``."""
    p = d.scale
    gens = list(d.generators)
    if gens and all(len(g.terms) == 1 for g in gens):
        verts = newton_vertices([next(iter(g.terms)) for g in gens])
        pure = all(sum(1 for x in v if x) == 1 for v in verts) and len(verts) == d.nvars
        if pure:
            weights = [Fraction(sum(v), p) for v in sorted(verts, key=lambda v: [i for i, x in enumerate(v) if x][0])]
            names = ["z%d" % (i + 1) for i in range(d.nvars)]
            if len(set(weights)) == 1:
                return "%slog max(%s) + O(1)" % (_coef(weights[0], True), ", ".join("|%s|" % z for z in names))
            parts = ["%slog|%s|" % (_coef(w, False), z) for w, z in zip(weights, names)]
            return "max(%s) + O(1)" % ", ".join(parts)
        body = ", ".join("|%s|" % _mono(v) for v in verts)
    else:
        ordered = sorted(gens, key=lambda g: (len(g.terms) > 1, tuple(-x for x in g.leading_monomial(DEGREVLEX))))
        body = ", ".join("|%s|" % _generator_text(g) for g in ordered)
    return "%slog max(%s) + O(1)" % (_coef(Fraction(1, p), True), body)


def normalize_rendering(text: str) -> tuple[str, frozenset[str]]:
    """Canonical form of a rendering: prefix plus the set of max arguments.

    Ignores whitespace, "·", argument order, a trailing "+ O(1)" and
    parentheses around numeric coefficients.
    """
    import re

    t = text.replace(" ", "").replace("·", "").replace("+O(1)", "")
    t = re.sub(r"\((\d+/\d+)\)", r"\1", t)
    t = t.replace("½", "1/2")
    m = re.match(r"^(.*?)max\((.*)\)$", t)
    if not m:
        return t, frozenset()
    prefix, args = m.groups()
    depth = 0
    items, cur = [], ""
    for ch in args:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    return prefix, frozenset(items)
