"""Shipped point families, as point rows in the coordinate syntax."""

from __future__ import annotations

from .errors import UnknownPreset


def simplex_rows(n: int) -> list[list[str]]:
    """The origin and ``e`` times each basis vector."""
    rows = [["0"] * n]
    for k in range(n):
        rows.append(["e" if i == k else "0" for i in range(n)])
    return rows


PRESETS: dict[str, dict] = {
    "two-point": {
        "variables": 2,
        "points": [["0", "0"], ["e", "0"]],
        "p_max": 2,
    },
    "generic-3pt": {
        "variables": 2,
        "points": [["0", "0"], ["e", "0"], ["0", "e"]],
        "p_max": 3,
    },
    "degenerate-3pt": {
        "variables": 2,
        "points": [["0", "0"], ["e^2", "0"], ["0", "e"]],
        "p_max": 3,
    },
    # two moving points with the same tangent direction; with e = s^2 this
    # is a2 = (s^2, 0), a3 = (s^4, s^5), so 1/alpha = s^3 - s -> 0
    "dqht-3pt": {
        "variables": 2,
        "points": [["0", "0"], ["e^2", "0"], ["e^4", "e^5"]],
        "p_max": 3,
    },
    "4pt-square": {
        "variables": 2,
        "points": [["0", "0"], ["e", "0"], ["0", "e"], ["e", "e"]],
        "p_max": 2,
    },
    "simplex-n2": {"variables": 2, "points": simplex_rows(2), "p_max": 3},
    "simplex-n3": {"variables": 3, "points": simplex_rows(3), "p_max": 6},
}


def preset_config(name: str) -> dict:
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise UnknownPreset("unknown preset %r; choose from %s" % (name, ", ".join(PRESETS))) from None
    out = {k: (list(map(list, v)) if k == "points" else v) for k, v in cfg.items()}
    out["name"] = name
    return out
