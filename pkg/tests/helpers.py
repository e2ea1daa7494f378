"""Independent oracles and shared fixtures for the test suite.

The oracles deliberately avoid the library's Groebner machinery: ranks are
computed by plain Gaussian elimination over ``fractions.Fraction``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb

from greenlim.limits import PointFamily, family_from_points, limit_tower
from greenlim.parse import parse_eps_poly
from greenlim.presets import PRESETS, preset_config

# ---------------------------------------------------------------------------
# linear algebra


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def rank(rows: list[dict]) -> int:
    """Rank of sparse rows ``{column: Fraction}``."""
    pivots: dict = {}
    r = 0
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            col = max(row)
            if col not in pivots:
                inv = 1 / row[col]
                pivots[col] = {k: v * inv for k, v in row.items()}
                r += 1
                break
            piv = pivots[col]
            c = row[col]
            for k, v in piv.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return r


# ---------------------------------------------------------------------------
# weighted-homogeneous Macaulay matrices


def wdeg(e, w) -> int:
    return sum(a * b for a, b in zip(e, w))


def homogeneous_weights(polys, n: int, search: int = 4):
    """Positive weights making every polynomial weighted-homogeneous, or None."""
    for w in itertools.product(range(1, search + 1), repeat=n):
        if all(len({wdeg(e, w) for e in f.terms}) == 1 for f in polys):
            return w
    return None


def monomials_of_wdeg(n: int, d: int, w):
    if n == 0:
        if d == 0:
            yield ()
        return
    for a in range(d // w[0] + 1):
        for rest in monomials_of_wdeg(n - 1, d - a * w[0], w[1:]):
            yield (a,) + rest


def _rows_in_degree(gens, n: int, d: int, w) -> list[dict]:
    rows = []
    for g in gens:
        dg = wdeg(next(iter(g.terms)), w)
        if dg > d:
            continue
        for a in monomials_of_wdeg(n, d - dg, w):
            rows.append({tuple(x + y for x, y in zip(e, a)): _frac(c) for e, c in g.terms.items()})
    return rows


def macaulay_colength(gens, n: int, max_degree: int = 200) -> int:
    """dim Q[z]/I for an m-primary weighted-homogeneous ideal."""
    w = homogeneous_weights(gens, n)
    if w is None:
        raise ValueError("oracle needs weighted-homogeneous generators")
    total = 0
    full_run = 0
    top = max(wdeg(next(iter(g.terms)), w) for g in gens)
    for d in range(max_degree):
        count = sum(1 for _ in monomials_of_wdeg(n, d, w))
        deficit = count - rank(_rows_in_degree(gens, n, d, w))
        total += deficit
        full_run = full_run + 1 if deficit == 0 else 0
        # max(w) consecutive full degrees past the generators: every higher monomial is a multiple
        if d >= top and full_run >= max(w):
            return total
    raise ValueError("ideal does not look m-primary within the degree cap")


def macaulay_member(f, gens, n: int) -> bool:
    w = homogeneous_weights(gens, n)
    if w is None:
        raise ValueError("oracle needs weighted-homogeneous generators")
    parts: dict = {}
    for e, c in f.terms.items():
        parts.setdefault(wdeg(e, w), {})[e] = _frac(c)
    for d, comp in parts.items():
        rows = _rows_in_degree(gens, n, d, w)
        if rank(rows + [comp]) != rank(rows):
            return False
    return True


# ---------------------------------------------------------------------------
# Newton polyhedra by lattice enumeration


def lattice_in_newton(v, exps, k_max: int = 6) -> bool:
    """Some k <= k_max has k*v >= a sum of k exponents (componentwise)."""
    exps = list(exps)
    for k in range(1, k_max + 1):
        target = tuple(k * x for x in v)
        for combo in itertools.combinations_with_replacement(exps, k):
            s = tuple(map(sum, zip(*combo)))
            if all(a <= b for a, b in zip(s, target)):
                return True
    return False


# ---------------------------------------------------------------------------
# limit membership by lifting through the moving points


def _eps_coeffs(c) -> list[Fraction]:
    return [_frac(x) for x in c.coeffs]


def _epoly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _taylor(alpha, point, p) -> dict:
    """Coefficients {(beta, eps_degree): value} of z^alpha at z = point(e) + w, |beta| < p."""
    acc = {((0,) * len(alpha)): [Fraction(1)]}
    for i, a in enumerate(alpha):
        ai = _eps_coeffs(point[i])
        nxt: dict = {}
        for beta, poly in acc.items():
            for b in range(min(a, p - 1 - sum(beta)) + 1):
                # choose b factors of w_i, a - b factors of a_i(e)
                part = [Fraction(comb(a, b))]
                for _ in range(a - b):
                    part = _epoly_mul(part, ai)
                nb = beta[:i] + (beta[i] + b,) + beta[i + 1 :]
                cur = nxt.setdefault(nb, [])
                prod = _epoly_mul(poly, part)
                if len(cur) < len(prod):
                    cur.extend([Fraction(0)] * (len(prod) - len(cur)))
                for k, v in enumerate(prod):
                    cur[k] += v
        acc = nxt
    return {(beta, k): v for beta, poly in acc.items() for k, v in enumerate(poly) if v}


def liftable(f, points, p: int, eps_degree: int, z_degree: int | None = None) -> bool:
    """Is there f + sum_{k<=eps_degree} e^k h_k vanishing to order p at every moving point?

    ``points`` are rows of EpsPoly coordinates.  A True answer proves that f
    lies in the limit of the p-th power of the points' vanishing ideal.
    """
    n = len(points[0])
    if z_degree is None:
        z_degree = f.total_degree()
    monos = [m for d in range(z_degree + 1) for m in monomials_of_wdeg(n, d, (1,) * n)]
    cache: dict = {}

    def expand(alpha, j):
        key = (alpha, j)
        if key not in cache:
            cache[key] = _taylor(alpha, points[j], p)
        return cache[key]

    rows: dict = {}
    rhs = -1
    for j in range(len(points)):
        for alpha, c in f.terms.items():
            for (beta, k), v in expand(alpha, j).items():
                rows.setdefault((j, beta, k), {})
                rows[(j, beta, k)][rhs] = rows[(j, beta, k)].get(rhs, 0) + _frac(c) * v
        for col, (shift, alpha) in enumerate(itertools.product(range(1, eps_degree + 1), monos)):
            for (beta, k), v in expand(alpha, j).items():
                rows.setdefault((j, beta, k + shift), {})[col] = v
    system = list(rows.values())
    without = [{k: v for k, v in r.items() if k != rhs} for r in system]
    return rank(system) == rank(without)


# ---------------------------------------------------------------------------
# cached preset towers


def preset_family(name: str):
    cfg = preset_config(name)
    pf = PointFamily.from_rows([[parse_eps_poly(c) for c in row] for row in cfg["points"]])
    return pf, family_from_points(pf)


@lru_cache(maxsize=None)
def preset_tower(name: str, p_max: int | None = None):
    if p_max is None:
        p_max = PRESETS[name]["p_max"]
    _, fam = preset_family(name)
    return limit_tower(fam, p_max)


PRESET_NAMES = sorted(PRESETS)
