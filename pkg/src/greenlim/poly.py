"""Exact coefficient fields and sparse multivariate polynomials.

Three coefficient types are supported:

* ``Rational`` -- ``gmpy2.mpq``, always in lowest terms with positive denominator.
* :class:`EpsPoly` -- univariate polynomials in the family parameter ``e``.
* :class:`EpsRationalFn` -- reduced fractions of ``EpsPoly`` with monic denominator.

:class:`MultiPoly` stores a map from exponent tuples to nonzero coefficients.
Every value is immutable once built.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from gmpy2 import mpq

from .errors import FieldMismatch, VariableCountMismatch, ZeroPolynomial

Rational = mpq
Exponent = tuple[int, ...]

QQ = "QQ"
EPS = "EPS"
EPSFRAC = "EPSFRAC"
GF = "GF"

# modulus of the prime field GF; a Mersenne prime
PRIME = (1 << 61) - 1

_ZERO = mpq(0)
_ONE = mpq(1)


# ---------------------------------------------------------------------------
# coefficients in Q[e] and Q(e)


class EpsPoly:
    """Polynomial in ``e`` with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [mpq(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "EpsPoly":
        return cls((c,))

    @classmethod
    def eps(cls, k: int = 1) -> "EpsPoly":
        return cls([0] * k + [1])

    def _coerce(self, other) -> "EpsPoly":
        if isinstance(other, EpsPoly):
            return other
        if isinstance(other, (int, type(_ONE))):
            return EpsPoly((other,))
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def constant_term(self) -> mpq:
        return self.coeffs[0] if self.coeffs else _ZERO

    def leading_coeff(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def valuation(self) -> int:
        """Largest k with e^k dividing self; raises on zero."""
        if not self.coeffs:
            raise ZeroPolynomial("valuation of zero")
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise AssertionError

    def shift_down(self, k: int) -> "EpsPoly":
        if any(self.coeffs[:k]):
            raise ValueError("not divisible by e^%d" % k)
        return EpsPoly(self.coeffs[k:])

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("EpsPoly", self.coeffs))

    def __neg__(self) -> "EpsPoly":
        return EpsPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return EpsPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return EpsPoly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return EpsPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EpsPoly":
        out = EpsPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "EpsPoly":
        return EpsPoly(c * x for x in self.coeffs)

    def divmod(self, other: "EpsPoly") -> tuple["EpsPoly", "EpsPoly"]:
        if not other:
            raise ZeroDivisionError("division by zero EpsPoly")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.coeffs[-1]
        quot = [_ZERO] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c:
                q = c / lc
                quot[i - dq] = q
                for j, y in enumerate(other.coeffs):
                    rem[i - dq + j] -= q * y
        return EpsPoly(quot), EpsPoly(rem[:dq])

    def monic(self) -> "EpsPoly":
        if not self:
            return self
        return self.scale(1 / self.coeffs[-1])

    def gcd(self, other: "EpsPoly") -> "EpsPoly":
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, x) -> mpq:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return "EpsPoly(%s)" % format_eps(self)


def format_eps(p: EpsPoly, name: str = "e") -> str:
    if not p:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (name if k == 1 else "%s^%d" % (name, k))
        parts.append(_join_term(c, mono))
    return _join_parts(parts)


class EpsRationalFn:
    """Element of Q(e): num/den, coprime, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, EpsPoly) else EpsPoly.const(num)
        if den is None:
            den = EpsPoly.const(1)
        elif not isinstance(den, EpsPoly):
            den = EpsPoly.const(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = EpsPoly(), EpsPoly.const(1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lc = den.coeffs[-1]
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        self.num, self.den = num, den

    def _coerce(self, other):
        if isinstance(other, EpsRationalFn):
            return other
        if isinstance(other, (EpsPoly, int, type(_ONE))):
            return EpsRationalFn(other)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("EpsRationalFn", self.num.coeffs, self.den.coeffs))

    def __neg__(self):
        r = object.__new__(EpsRationalFn)
        r.num, r.den = -self.num, self.den
        return r

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return EpsRationalFn(self.num + other.num, self.den)
        return EpsRationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return EpsRationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero in Q(e)")
        return EpsRationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __repr__(self) -> str:
        if self.den.degree == 0:
            return "EpsRationalFn(%s)" % format_eps(self.num)
        return "EpsRationalFn((%s)/(%s))" % (format_eps(self.num), format_eps(self.den))


# ---------------------------------------------------------------------------
# monomial orders


def _degrevlex_key(exp: Exponent) -> tuple:
    return (sum(exp),) + tuple(-x for x in reversed(exp))


class MonomialOrder:
    """A monomial order; ``key(exp)`` is larger for larger monomials.

    Kinds: ``lex``, ``degrevlex``, ``block`` (degrevlex inside each block,
    blocks compared left to right; ``elimination(k)`` is the two-block case)
    ``wdegrevlex`` (weighted degree, ties broken by revlex) and the local
    order ``negdegrevlex`` (lowest degree first, ties by revlex).  Keys are
    flat integer tuples so ``negkey`` can serve min-heaps.
    """

    __slots__ = ("kind", "splits", "weights", "_cache", "_neg")

    def __init__(self, kind: str, splits: tuple[int, ...] = (), weights: tuple[int, ...] = ()):
        if kind not in ("lex", "degrevlex", "block", "wdegrevlex", "negdegrevlex"):
            raise ValueError("unknown order kind %r" % kind)
        if kind == "wdegrevlex" and (not weights or any(w <= 0 for w in weights)):
            raise ValueError("weights must be positive")
        if kind == "block" and not splits:
            raise ValueError("block order needs split indices")
        self.kind = kind
        self.splits = tuple(splits)
        self.weights = tuple(weights)
        self._cache: dict = {}
        self._neg: dict = {}

    @classmethod
    def elimination(cls, k: int) -> "MonomialOrder":
        return cls("block", (k,))

    def _compute(self, exp: Exponent) -> tuple:
        if self.kind == "degrevlex":
            return _degrevlex_key(exp)
        if self.kind == "lex":
            return tuple(exp)
        if self.kind == "negdegrevlex":
            return (-sum(exp),) + tuple(-x for x in reversed(exp))
        if self.kind == "wdegrevlex":
            w = sum(a * b for a, b in zip(self.weights, exp))
            return (w,) + tuple(-x for x in reversed(exp))
        bounds = (0,) + self.splits + (len(exp),)
        out: tuple = ()
        for a, b in zip(bounds, bounds[1:]):
            out += _degrevlex_key(exp[a:b])
        return out

    def key(self, exp: Exponent) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            k = self._cache[exp] = self._compute(exp)
        return k

    def negkey(self, exp: Exponent) -> tuple:
        k = self._neg.get(exp)
        if k is None:
            k = self._neg[exp] = tuple(-x for x in self.key(exp))
        return k

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonomialOrder)
            and (self.kind, self.splits, self.weights) == (other.kind, other.splits, other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.splits, self.weights))

    def __repr__(self) -> str:
        extra = ""
        if self.splits:
            extra = ", splits=%r" % (self.splits,)
        if self.weights:
            extra = ", weights=%r" % (self.weights,)
        return "MonomialOrder(%r%s)" % (self.kind, extra)


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


class ModP:
    """Element of the prime field of order ``PRIME``."""

    __slots__ = ("v",)

    def __init__(self, v: int):
        self.v = v % PRIME

    @classmethod
    def from_rational(cls, c) -> "ModP":
        c = mpq(c)
        den = int(c.denominator) % PRIME
        if not den:
            raise ZeroDivisionError("denominator divisible by the field characteristic")
        return cls(int(c.numerator) * pow(den, -1, PRIME))

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, ModP):
            return self.v == other.v
        if isinstance(other, int):
            return self.v == other % PRIME
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("ModP", self.v))

    def __neg__(self) -> "ModP":
        return ModP(-self.v)

    def __add__(self, other) -> "ModP":
        return ModP(self.v + (other.v if isinstance(other, ModP) else other))

    __radd__ = __add__

    def __sub__(self, other) -> "ModP":
        return ModP(self.v - (other.v if isinstance(other, ModP) else other))

    def __rsub__(self, other) -> "ModP":
        return ModP(other - self.v)

    def __mul__(self, other) -> "ModP":
        return ModP(self.v * (other.v if isinstance(other, ModP) else other))

    __rmul__ = __mul__

    def inverse(self) -> "ModP":
        if not self.v:
            raise ZeroDivisionError("inverse of zero")
        return ModP(pow(self.v, -1, PRIME))

    def __truediv__(self, other) -> "ModP":
        other = other if isinstance(other, ModP) else ModP(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ModP":
        return self.inverse() * other

    def __repr__(self) -> str:
        return "ModP(%d)" % self.v


# ---------------------------------------------------------------------------
# polynomials


def _field_of(c) -> str:
    if isinstance(c, ModP):
        return GF
    if isinstance(c, EpsRationalFn):
        return EPSFRAC
    if isinstance(c, EpsPoly):
        return EPS
    return QQ


def _one(field: str):
    if field == EPS:
        return EpsPoly.const(1)
    if field == EPSFRAC:
        return EpsRationalFn(1)
    if field == GF:
        return ModP(1)
    return _ONE


def _convert(c, field: str):
    if field == GF:
        return c if isinstance(c, ModP) else ModP.from_rational(c)
    if field == QQ:
        if isinstance(c, (EpsPoly, EpsRationalFn)):
            raise FieldMismatch("cannot coerce %r to QQ" % (c,))
        return mpq(c)
    if field == EPS:
        if isinstance(c, EpsRationalFn):
            raise FieldMismatch("cannot coerce %r to Q[e]" % (c,))
        return c if isinstance(c, EpsPoly) else EpsPoly.const(c)
    return c if isinstance(c, EpsRationalFn) else EpsRationalFn(c)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables over QQ, Q[e] or Q(e)."""

    __slots__ = ("nvars", "terms", "field", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None, field: str = QQ):
        self.nvars = nvars
        self.field = field
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise VariableCountMismatch("exponent %r in ring of %d variables" % (exp, nvars))
                if c:
                    clean[tuple(exp)] = _convert(c, field)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, field: str = QQ) -> "MultiPoly":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars, p.terms, p.field, p._hash = nvars, terms, field, None
        return p

    @classmethod
    def zero(cls, nvars: int, field: str = QQ) -> "MultiPoly":
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, c, nvars: int, field: str = QQ) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def one(cls, nvars: int, field: str = QQ) -> "MultiPoly":
        return cls.constant(_one(field), nvars, field)

    @classmethod
    def var(cls, i: int, nvars: int, field: str = QQ) -> "MultiPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(nvars, {tuple(exp): _one(field)}, field)

    @classmethod
    def monomial(cls, exp: Exponent, nvars: int | None = None, coeff=1, field: str = QQ) -> "MultiPoly":
        exp = tuple(exp)
        return cls(len(exp) if nvars is None else nvars, {exp: coeff}, field)

    # -- basic queries

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, object]]:
        return iter(self.terms.items())

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_homogeneous(self, weights: tuple[int, ...] | None = None) -> bool:
        w = weights or (1,) * self.nvars
        degs = {sum(a * b for a, b in zip(w, e)) for e in self.terms}
        return len(degs) <= 1

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple[Exponent, object]:
        if not self.terms:
            raise ZeroPolynomial("leading term of zero")
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Exponent:
        return self.leading_term(order)[0]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[Exponent, object]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), 0)

    # -- arithmetic

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise VariableCountMismatch("%d vs %d variables" % (self.nvars, other.nvars))
        if self.field != other.field:
            raise FieldMismatch("%s vs %s coefficients" % (self.field, other.field))

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.nvars, self.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, type(_ONE))):
                other = MultiPoly.constant(other, self.nvars, self.field)
            else:
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.field)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(self.nvars, out, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = _convert(other, self.field)
            if not c:
                return MultiPoly.zero(self.nvars, self.field)
            return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()}, self.field)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c}, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.one(self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def mul_term(self, exp: Exponent, coeff) -> "MultiPoly":
        return MultiPoly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
            self.field,
        )

    def map_coeffs(self, fn: Callable, field: str | None = None) -> "MultiPoly":
        field = self.field if field is None else field
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()}, field)

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_term(order)[1]
        inv = _one(self.field) / lc
        return MultiPoly._raw(self.nvars, {e: c * inv for e, c in self.terms.items()}, self.field)

    def evaluate(self, point) -> object:
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            acc = acc + t
        return acc

    def substitute_linear(self, images: list["MultiPoly"]) -> "MultiPoly":
        """Compose with ``z_i -> images[i]`` (all images in a common ring)."""
        if len(images) != self.nvars:
            raise VariableCountMismatch("need %d images" % self.nvars)
        target = images[0]
        out = MultiPoly.zero(target.nvars, target.field)
        for e, c in self.terms.items():
            t = MultiPoly.constant(_convert(c, target.field), target.nvars, target.field)
            for img, k in zip(images, e):
                if k:
                    t = t * img**k
            out = out + t
        return out

    def __repr__(self) -> str:
        return "MultiPoly(%s)" % format_poly(self)

    def __str__(self) -> str:
        return format_poly(self)


def var_names(nvars: int, eps_last: bool = False) -> list[str]:
    if eps_last:
        return ["z%d" % (i + 1) for i in range(nvars - 1)] + ["e"]
    return ["z%d" % (i + 1) for i in range(nvars)]


def format_monomial(exp: Exponent, names: list[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append("%s^%d" % (name, k))
    return "*".join(parts)


def _format_rational(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def _join_term(c, mono: str) -> str:
    c = mpq(c)
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        return sign + _format_rational(a)
    if a == 1:
        return sign + mono
    return sign + _format_rational(a) + "*" + mono


def _join_parts(parts: list[str]) -> str:
    s = " ".join(p[0] + " " + p[1:] for p in parts)
    if s.startswith("+ "):
        s = s[2:]
    elif s.startswith("- "):
        s = "-" + s[2:]
    return s


def format_poly(f: MultiPoly, names: list[str] | None = None, order: MonomialOrder = DEGREVLEX) -> str:
    """Render in the parser's syntax (round-trips through :func:`parse_poly`)."""
    if not f.terms:
        return "0"
    names = names or var_names(f.nvars)
    parts = []
    for exp, c in f.sorted_terms(order):
        mono = format_monomial(exp, names)
        if f.field == QQ:
            parts.append(_join_term(c, mono))
            continue
        if f.field == GF:
            # symmetric residue; parses back as a rational lift
            v = c.v - PRIME if c.v > PRIME // 2 else c.v
            parts.append(_join_term(mpq(v), mono))
            continue
        if f.field == EPS:
            cs = format_eps(c)
            single = len([x for x in c.coeffs if x]) == 1
        else:
            cs = format_eps(c.num) if c.den.degree == 0 else "(%s)/(%s)" % (format_eps(c.num), format_eps(c.den))
            single = c.den.degree == 0 and len([x for x in c.num.coeffs if x]) == 1
        if single and not cs.startswith("-"):
            body = cs if not mono else (mono if cs == "1" else cs + "*" + mono)
            parts.append("+" + body)
        elif single:
            body = cs[1:]
            body = body if not mono else (mono if body == "1" else body + "*" + mono)
            parts.append("-" + body)
        else:
            body = "(" + cs + ")" + ("*" + mono if mono else "")
            parts.append("+" + body)
    return _join_parts(parts)


# ---------------------------------------------------------------------------
# the named operations on polynomials


def poly_add(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f + g


def poly_mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f * g


def set_eps_zero(f: MultiPoly) -> MultiPoly:
    """Specialize e -> 0 in a polynomial with Q[e] coefficients."""
    if f.field == QQ:
        return f
    if f.field != EPS:
        raise FieldMismatch("set_eps_zero needs Q[e] coefficients")
    return MultiPoly(f.nvars, {e: c.constant_term() for e, c in f.terms.items()}, QQ)


def eps_content_strip(f: MultiPoly) -> tuple[MultiPoly, int]:
    """Divide out the largest power of e dividing every coefficient."""
    if not f.terms:
        raise ZeroPolynomial("eps_content_strip of zero")
    if f.field == QQ:
        return f, 0
    if f.field != EPS:
        raise FieldMismatch("eps_content_strip needs Q[e] coefficients")
    k = min(c.valuation() for c in f.terms.values())
    if k == 0:
        return f, 0
    return MultiPoly._raw(f.nvars, {e: c.shift_down(k) for e, c in f.terms.items()}, EPS), k


def clear_denominators(f: MultiPoly) -> tuple[MultiPoly, EpsRationalFn]:
    """Scale a Q(e)-polynomial into Q[e]; returns (result, scaling).

    The scaling is the lcm of the coefficient denominators divided by the
    power of e stripped afterwards, so ``result == scaling * f``.
    """
    if not f.terms:
        raise ZeroPolynomial("clear_denominators of zero")
    if f.field == EPS:
        g, k = eps_content_strip(f)
        return g, EpsRationalFn(1, EpsPoly.eps(k))
    if f.field != EPSFRAC:
        raise FieldMismatch("clear_denominators needs Q(e) coefficients")
    lcm = EpsPoly.const(1)
    for c in f.terms.values():
        g = lcm.gcd(c.den)
        lcm = (lcm * c.den).divmod(g)[0].monic()
    out = {e: c.num * lcm.divmod(c.den)[0] for e, c in f.terms.items()}
    g, k = eps_content_strip(MultiPoly._raw(f.nvars, out, EPS))
    return g, EpsRationalFn(lcm, EpsPoly.eps(k))


# ---------------------------------------------------------------------------
# coefficient-field conversions


def reduce_mod_prime(f: MultiPoly) -> MultiPoly:
    """Image of a QQ polynomial in GF[z]."""
    if f.field == GF:
        return f
    if f.field != QQ:
        raise FieldMismatch("only QQ polynomials reduce modulo the prime")
    return MultiPoly(f.nvars, {e: ModP.from_rational(c) for e, c in f.terms.items()}, GF)


def to_field(f: MultiPoly, field: str) -> MultiPoly:
    """Widen QQ -> Q[e] -> Q(e); narrowing raises FieldMismatch."""
    if f.field == field:
        return f
    rank = {QQ: 0, EPS: 1, EPSFRAC: 2}
    if rank[field] < rank[f.field]:
        raise FieldMismatch("cannot narrow %s to %s" % (f.field, field))
    return MultiPoly(f.nvars, {e: _convert(c, field) for e, c in f.terms.items()}, field)


def adjoin_eps(f: MultiPoly) -> MultiPoly:
    """Q[e]-coefficient polynomial in n variables -> QQ polynomial in n+1 (e last)."""
    if f.field == QQ:
        return MultiPoly._raw(f.nvars + 1, {e + (0,): c for e, c in f.terms.items()}, QQ)
    if f.field != EPS:
        raise FieldMismatch("adjoin_eps needs Q[e] coefficients")
    out = {}
    for e, c in f.terms.items():
        for k, x in enumerate(c.coeffs):
            if x:
                out[e + (k,)] = x
    return MultiPoly._raw(f.nvars + 1, out, QQ)


def split_eps(f: MultiPoly) -> MultiPoly:
    """Inverse of :func:`adjoin_eps`: last variable becomes the parameter e."""
    if f.field != QQ:
        raise FieldMismatch("split_eps needs QQ coefficients")
    acc: dict = {}
    for e, c in f.terms.items():
        z, k = e[:-1], e[-1]
        row = acc.setdefault(z, {})
        row[k] = c
    out = {}
    for z, row in acc.items():
        top = max(row)
        out[z] = EpsPoly([row.get(i, 0) for i in range(top + 1)])
    return MultiPoly._raw(f.nvars - 1, out, EPS)


def eps_to_frac(f: MultiPoly) -> MultiPoly:
    if f.field == EPSFRAC:
        return f
    return MultiPoly._raw(f.nvars, {e: EpsRationalFn(c) for e, c in f.terms.items()}, EPSFRAC)


def specialize_eps(f: MultiPoly, value) -> MultiPoly:
    """Evaluate the e-coefficients at a rational value."""
    if f.field == QQ:
        return f
    if f.field == EPS:
        return MultiPoly(f.nvars, {e: c(value) for e, c in f.terms.items()}, QQ)
    return MultiPoly(f.nvars, {e: c.num(value) / c.den(value) for e, c in f.terms.items()}, QQ)


def is_eps_free(f: MultiPoly) -> bool:
    if f.field == QQ:
        return True
    if f.field == EPS:
        return all(c.degree == 0 for c in f.terms.values())
    return all(c.num.degree <= 0 and c.den.degree == 0 for c in f.terms.values())


def drop_eps(f: MultiPoly) -> MultiPoly:
    """An e-free polynomial as a QQ polynomial."""
    if not is_eps_free(f):
        raise FieldMismatch("polynomial depends on e")
    return set_eps_zero(f) if f.field == EPS else to_qq(f)


def to_qq(f: MultiPoly) -> MultiPoly:
    if f.field == QQ:
        return f
    if f.field == EPS:
        return set_eps_zero(f)
    return MultiPoly(f.nvars, {e: c.num.constant_term() for e, c in f.terms.items()}, QQ)


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple[Exponent, ...]:
    if nvars == 0:
        return ((),) if d == 0 else ()
    if nvars == 1:
        return ((d,),)
    out = []
    for k in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - k):
            out.append((k,) + rest)
    return tuple(out)


def monomials_up_to(nvars: int, d: int) -> list[Exponent]:
    out: list[Exponent] = []
    for k in range(d + 1):
        out.extend(monomials_of_degree(nvars, k))
    return out
