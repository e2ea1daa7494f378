"""Flat limits of colliding point families and their Hilbert-Samuel multiplicities."""

__version__ = "0.1.0"

from .analysis import AnalysisConfig, AnalysisReport, run_analyze, run_preset, run_search_stabilization
from .descriptor import descriptor, descriptors_equivalent_monomial, newton_staircase, render
from .groebner import buchberger, normal_form
from .ideal import Ideal, colength, ideal_power, ideal_product, point_ideal
from .limits import PointFamily, family_from_points, flat_limit, limit_tower, membership_in_limit
from .multiplicity import graded_volume, hs_multiplicity, samuel_table, stabilization_index
from .parse import parse_eps_poly, parse_poly, parse_qq
from .poly import EpsPoly, MonomialOrder, MultiPoly

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "EpsPoly",
    "Ideal",
    "MonomialOrder",
    "MultiPoly",
    "PointFamily",
    "buchberger",
    "colength",
    "descriptor",
    "descriptors_equivalent_monomial",
    "family_from_points",
    "flat_limit",
    "graded_volume",
    "hs_multiplicity",
    "ideal_power",
    "ideal_product",
    "limit_tower",
    "membership_in_limit",
    "newton_staircase",
    "normal_form",
    "parse_eps_poly",
    "parse_poly",
    "parse_qq",
    "point_ideal",
    "render",
    "run_analyze",
    "run_preset",
    "run_search_stabilization",
    "samuel_table",
    "stabilization_index",
]
