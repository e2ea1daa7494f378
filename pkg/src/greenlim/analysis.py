"""End-to-end pipeline: family -> tower of limits -> multiplicities -> verdict.

Reports render to text or JSON from one shared dictionary, so both outputs
carry the same numbers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import lcm
from pathlib import Path
from typing import Any

from gmpy2 import mpq

from .descriptor import descriptor, render
from .errors import ConfigError, NoStabilization, NotOriginSupported, StepBudgetExceeded, UserError
from .ideal import Ideal
from .limits import IdealFamily, LimitTower, PointFamily, family_from_points, limit_tower, membership_in_limit
from .multiplicity import (
    DEFAULT_TRIALS,
    MultiplicityReport,
    graded_volume,
    hs_multiplicity,
    origin_power,
)
from .parallel import ordered_map
from .parse import parse_eps_poly, parse_poly, parse_qq
from .poly import MultiPoly, format_poly
from .presets import preset_config, simplex_rows

log = logging.getLogger(__name__)

CONFIG_KEYS = {"name", "variables", "points", "generators", "p_max", "k_budget", "trials", "seed", "output"}


@dataclass(frozen=True)
class AnalysisConfig:
    variables: int
    points: tuple[tuple[str, ...], ...] | None = None
    generators: tuple[str, ...] | None = None
    p_max: int = 3
    k_budget: int | None = None
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    output: str = "text"
    name: str | None = None
    source: str = "<config>"

    def __post_init__(self):
        where = self.source
        if not isinstance(self.variables, int) or self.variables < 1:
            raise ConfigError("%s: 'variables' must be a positive integer" % where)
        if (self.points is None) == (self.generators is None):
            raise ConfigError("%s: give exactly one of 'points' or 'generators'" % where)
        if not isinstance(self.p_max, int) or self.p_max < 1:
            raise ConfigError("%s: 'p_max' must be an integer >= 1" % where)
        if self.k_budget is not None and (not isinstance(self.k_budget, int) or self.k_budget < self.variables + 2):
            raise ConfigError("%s: 'k_budget' must be an integer >= variables + 2" % where)
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("%s: 'trials' must be a positive integer" % where)
        if not isinstance(self.seed, int):
            raise ConfigError("%s: 'seed' must be an integer" % where)
        if self.output not in ("text", "json"):
            raise ConfigError("%s: 'output' must be 'text' or 'json'" % where)
        if self.points is not None:
            if not self.points:
                raise ConfigError("%s: 'points' is empty" % where)
            for i, row in enumerate(self.points):
                if len(row) != self.variables:
                    raise ConfigError("%s: points[%d] has %d coordinates, expected %d" % (where, i, len(row), self.variables))
        elif not self.generators:
            raise ConfigError("%s: 'generators' is empty" % where)

    @classmethod
    def from_dict(cls, data: Any, source: str = "<config>") -> "AnalysisConfig":
        if not isinstance(data, dict):
            raise ConfigError("%s: expected a JSON object" % source)
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError("%s: unknown keys %s" % (source, ", ".join(sorted(unknown))))
        if "variables" not in data:
            raise ConfigError("%s: missing 'variables'" % source)
        kw = {k: data[k] for k in ("variables", "p_max", "k_budget", "trials", "seed", "output", "name") if k in data}
        if "points" in data:
            pts = data["points"]
            if not isinstance(pts, list) or not all(isinstance(r, list) for r in pts):
                raise ConfigError("%s: 'points' must be a list of coordinate lists" % source)
            kw["points"] = tuple(tuple(str(c) for c in row) for row in pts)
        if "generators" in data:
            gens = data["generators"]
            if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
                raise ConfigError("%s: 'generators' must be a list of strings" % source)
            kw["generators"] = tuple(gens)
        return cls(source=source, **kw)

    @classmethod
    def from_file(cls, path: str | Path) -> "AnalysisConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError("%s: cannot read config (%s)" % (path, exc.strerror)) from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("%s:%d:%d: invalid JSON (%s)" % (path, exc.lineno, exc.colno, exc.msg)) from None
        return cls.from_dict(data, str(path))

    def with_changes(self, **kw) -> "AnalysisConfig":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(kw)
        return AnalysisConfig(**fields)


def preset_analysis_config(name: str, p_max: int | None = None) -> AnalysisConfig:
    cfg = preset_config(name)
    if p_max is not None:
        cfg["p_max"] = p_max
    return AnalysisConfig.from_dict(cfg, "preset %s" % name)


# ---------------------------------------------------------------------------
# family construction


@dataclass
class BuiltFamily:
    family: IdealFamily
    single_point: bool | None  # None: decide from the limit ideal
    warnings: list[dict]


def build_family(cfg: AnalysisConfig) -> BuiltFamily:
    n = cfg.variables
    warnings: list[dict] = []
    if cfg.points is not None:
        rows = []
        for i, row in enumerate(cfg.points):
            parsed = []
            for j, c in enumerate(row):
                try:
                    parsed.append(parse_eps_poly(c))
                except UserError as exc:
                    raise ConfigError("%s: points[%d][%d]: %s" % (cfg.source, i, j, exc)) from None
            rows.append(parsed)
        try:
            pf = PointFamily.from_rows(rows)
        except ValueError as exc:
            raise ConfigError("%s: points: %s" % (cfg.source, exc)) from None
        fam = family_from_points(pf)
        for msg in fam.warnings:
            code = "translated" if msg.startswith("points collide") else "non-colliding"
            warnings.append({"code": code, "message": msg})
        return BuiltFamily(fam, pf.colliding, warnings)
    gens = []
    for i, text in enumerate(cfg.generators):
        try:
            gens.append(parse_poly(text, n))
        except UserError as exc:
            raise ConfigError("%s: generators[%d]: %s" % (cfg.source, i, exc)) from None
    try:
        fam = IdealFamily(n, gens)
    except ValueError as exc:
        raise ConfigError("%s: generators: %s" % (cfg.source, exc)) from None
    return BuiltFamily(fam, None, warnings)


# ---------------------------------------------------------------------------
# reports


@dataclass
class LevelSummary:
    p: int
    generators: list[str]
    length: int
    multiplicity: int | None
    method: str | None
    section_trials: tuple[int, ...] = ()


@dataclass
class AnalysisReport:
    name: str | None
    n: int
    N: int
    levels: list[LevelSummary]
    volume: dict | None
    verdict: dict
    descriptor: dict | None
    warnings: list[dict] = field(default_factory=list)

    def multiplicities(self) -> list[int]:
        return [lv.multiplicity for lv in self.levels if lv.multiplicity is not None]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "variables": self.n,
            "N": self.N,
            "tower": [
                {
                    "p": lv.p,
                    "generators": lv.generators,
                    "length": lv.length,
                    "multiplicity": lv.multiplicity,
                    "scaled_multiplicity": None if lv.multiplicity is None else _q(mpq(lv.multiplicity, lv.p**self.n)),
                    "method": lv.method,
                    "section_trials": list(lv.section_trials),
                }
                for lv in self.levels
            ],
            "volume": self.volume,
            "verdict": self.verdict,
            "descriptor": self.descriptor,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        d = self.to_dict()
        out = ["family: %s (n=%d, N=%d)" % (d["name"] or "custom", d["variables"], d["N"])]
        for lv in d["tower"]:
            if lv["multiplicity"] is None:
                out.append("p=%d  length=%d  e=?  e/p^n=?  method=none" % (lv["p"], lv["length"]))
            else:
                out.append(
                    "p=%d  length=%d  e=%d  e/p^n=%s  method=%s"
                    % (lv["p"], lv["length"], lv["multiplicity"], lv["scaled_multiplicity"], lv["method"])
                )
            out.append("  I_(%d) = <%s>" % (lv["p"], ", ".join(lv["generators"])))
        vol = d["volume"]
        if vol is not None:
            out.append("volume upper bound: %s (attained at p=%d)" % (vol["upper_bound"], vol["argmin"]))
            out.append("length estimator: %s" % ", ".join(vol["length_estimator"]))
        out.append("verdict: %s" % verdict_text(d["verdict"]))
        desc = d["descriptor"]
        if desc is not None:
            out.append("descriptor: %s  [scale %d, mass %s]" % (desc["rendering"], desc["scale"], desc["mass"]))
        for w in d["warnings"]:
            out.append("warning[%s]: %s" % (w["code"], w["message"]))
        return "\n".join(out)

    def render(self, output: str = "text") -> str:
        return self.to_json() if output == "json" else self.to_text()


def verdict_text(v: dict) -> str:
    if v["kind"] == "CompleteIntersection":
        return "CompleteIntersection(p=1)"
    if v["kind"] == "StabilizedAt":
        return "StabilizedAt(%d)" % v["p"]
    return "BoundsOnly"


def _q(x) -> str:
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def _gen_texts(I: Ideal) -> list[str]:
    return [format_poly(g) for g in I.gb().elements]


# ---------------------------------------------------------------------------
# pipeline


def _multiplicity_job(args) -> MultiplicityReport:
    I, k_budget, trials, seed, bound = args
    return hs_multiplicity(I, k_budget=k_budget, trials=trials, seed=seed, lower_bound=bound)


def _tower_multiplicities(
    tower: LimitTower, cfg: AnalysisConfig, single: bool, warnings: list[dict]
) -> list[MultiplicityReport | None]:
    n, N = tower.n, tower.length(1)
    # e(I_(p)) >= p^n N holds when everything collides at one point
    jobs = [
        (tower.limit(p), cfg.k_budget, cfg.trials, cfg.seed, p**n * N if single else None)
        for p in range(1, tower.p_max + 1)
    ]

    results = ordered_map(_guarded_job, jobs)
    out: list[MultiplicityReport | None] = []
    for p, r in enumerate(results, start=1):
        if isinstance(r, Exception):
            warnings.append({"code": "budget-exhausted", "message": "e(I_(%d)) not computed: %s" % (p, r)})
            out.append(None)
        else:
            out.append(r)
    return out


def _guarded_job(job):
    try:
        return _multiplicity_job(job)
    except (NoStabilization, StepBudgetExceeded) as exc:
        return exc


def _first_stabilizing(n: int, N: int, mults: list[int | None]) -> int | None:
    for p, e in enumerate(mults, start=1):
        if e is not None and e == p**n * N:
            return p
    return None


def run_analyze(cfg: AnalysisConfig) -> AnalysisReport:
    built = build_family(cfg)
    warnings = list(built.warnings)
    tower = limit_tower(built.family, cfg.p_max)
    n, N = tower.n, tower.length(1)
    single = built.single_point
    if single is None:
        single = origin_power(tower.limit(1)) is not None
        if not single:
            warnings.append(
                {"code": "non-colliding", "message": "the limit ideal is not supported at the origin alone"}
            )
    reports = _tower_multiplicities(tower, cfg, single, warnings)
    mults = [r.multiplicity if r is not None else None for r in reports]
    levels = [
        LevelSummary(
            p,
            _gen_texts(tower.limit(p)),
            tower.length(p),
            None if r is None else r.multiplicity,
            None if r is None else r.method,
            () if r is None else r.section_trials,
        )
        for p, r in enumerate(reports, start=1)
    ]

    known = []
    for e in mults:
        if e is None:
            break
        known.append(e)
    volume = None
    if known:
        vb = graded_volume(tower, known)
        volume = {
            "per_p": [[p, e, _q(r)] for p, e, r in vb.per_p],
            "upper_bound": _q(vb.upper_bound),
            "argmin": vb.argmin,
            "length_estimator": [_q(x) for x in vb.length_estimator],
        }

    if not single:
        verdict = {"kind": "BoundsOnly"}
        warnings.append(
            {"code": "verdict-suppressed", "message": "family does not collide at a single point; no verdict"}
        )
        scale = None
    elif reports[0] is not None and reports[0].complete_intersection:
        verdict = {"kind": "CompleteIntersection", "p": 1}
        scale = 1
    else:
        p = _first_stabilizing(n, N, mults)
        if p is not None:
            verdict = {"kind": "StabilizedAt", "p": p, "multiplicity": mults[p - 1], "bound": p**n * N}
            scale = p
        else:
            verdict = {"kind": "BoundsOnly"}
            scale = volume["argmin"] if volume else None
            warnings.append(
                {
                    "code": "bounds-only",
                    "message": "no p <= %d has e(I_(p)) = p^n N; reporting the best scaled descriptor without claiming it is the limit"
                    % cfg.p_max,
                }
            )

    desc = None
    if scale is not None:
        try:
            d = descriptor(tower.limit(scale), scale, multiplicity=mults[scale - 1])
            desc = {"scale": scale, "mass": _q(d.mass), "rendering": render(d)}
        except NotOriginSupported as exc:
            warnings.append({"code": "no-descriptor", "message": str(exc)})
    return AnalysisReport(cfg.name, n, N, levels, volume, verdict, desc, warnings)


def run_preset(name: str, p_max: int | None = None) -> AnalysisReport:
    return run_analyze(preset_analysis_config(name, p_max))


# ---------------------------------------------------------------------------
# stabilization search


@dataclass
class SearchReport:
    name: str | None
    n: int
    N: int
    p_max: int
    multiplicities: list[int | None]
    first_stabilizing: int | None
    guarantee: int | None  # lcm(1..n) for simplex families
    warnings: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "variables": self.n,
            "N": self.N,
            "p_max": self.p_max,
            "e_sequence": [
                {"p": p, "multiplicity": e, "target": p**self.n * self.N} for p, e in enumerate(self.multiplicities, start=1)
            ],
            "first_stabilizing_p": self.first_stabilizing,
            "guaranteed_index": self.guarantee,
            "warnings": self.warnings,
        }
        if self.guarantee is not None and self.first_stabilizing is not None:
            d["divides_guarantee"] = self.guarantee % self.first_stabilizing == 0
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        d = self.to_dict()
        out = ["family: %s (n=%d, N=%d)" % (d["name"] or "custom", d["variables"], d["N"])]
        for row in d["e_sequence"]:
            e = "?" if row["multiplicity"] is None else str(row["multiplicity"])
            mark = "  <- stabilized" if row["p"] == d["first_stabilizing_p"] else ""
            out.append("p=%d  e=%s  p^n*N=%d%s" % (row["p"], e, row["target"], mark))
        if d["first_stabilizing_p"] is None:
            out.append("no stabilization for p <= %d" % d["p_max"])
        else:
            out.append("first stabilizing p: %d" % d["first_stabilizing_p"])
        if d["guaranteed_index"] is not None:
            line = "guaranteed index t(n) = lcm(1..%d) = %d" % (d["variables"], d["guaranteed_index"])
            if "divides_guarantee" in d:
                line += "; divides t(n): %s" % ("yes" if d["divides_guarantee"] else "no")
            out.append(line)
        for w in d["warnings"]:
            out.append("warning[%s]: %s" % (w["code"], w["message"]))
        return "\n".join(out)

    def render(self, output: str = "text") -> str:
        return self.to_json() if output == "json" else self.to_text()


def _is_simplex(cfg: AnalysisConfig) -> bool:
    if cfg.points is None:
        return False
    want = {tuple(r) for r in simplex_rows(cfg.variables)}
    try:
        have = {tuple(str(parse_eps_poly(c)) for c in row) for row in cfg.points}
        want = {tuple(str(parse_eps_poly(c)) for c in row) for row in want}
    except UserError:
        return False
    return have == want


def run_search_stabilization(cfg: AnalysisConfig) -> SearchReport:
    built = build_family(cfg)
    warnings = list(built.warnings)
    tower = limit_tower(built.family, cfg.p_max)
    n, N = tower.n, tower.length(1)
    single = built.single_point
    if single is None:
        single = origin_power(tower.limit(1)) is not None
    if not single:
        raise ConfigError("%s: stabilization search needs a family colliding at a single point" % cfg.source)
    reports = _tower_multiplicities(tower, cfg, True, warnings)
    mults = [r.multiplicity if r is not None else None for r in reports]
    first = _first_stabilizing(n, N, mults)
    guarantee = lcm(*range(1, n + 1)) if _is_simplex(cfg) else None
    return SearchReport(cfg.name, n, N, cfg.p_max, mults, first, guarantee, warnings)


# ---------------------------------------------------------------------------
# single-ideal helpers for the CLI


def multiplicity_of_generators(texts: list[str], n: int | None = None, **kw) -> MultiplicityReport:
    if n is None:
        from .parse import max_variable_index

        n = max(max(max_variable_index(t) for t in texts), 1)
    gens = [parse_qq(t, n) for t in texts]
    return hs_multiplicity(Ideal(gens, n), **kw)


def member_of_limit(poly: str, cfg: AnalysisConfig, p: int) -> bool:
    if p < 1:
        raise ConfigError("p must be >= 1")
    built = build_family(cfg)
    f: MultiPoly = parse_qq(poly, cfg.variables)
    return membership_in_limit(f, built.family, p)
