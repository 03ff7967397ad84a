"""Exact quantale-valued conformances, liftings and Hennessy-Milner checks."""

from .conformance import Conformance, alpha, gamma_contains
from .fixpoint import (
    bisim_metric,
    bisimilarity,
    egli_milner_gfp,
    simulation_distance,
    trace_distance,
    trace_equivalence,
)
from .harness import equivalent_liftings_check, hm_check_boolean_branching, hm_check_linear
from .lifting import directed_hausdorff, kantorovich, kantorovich_definitional_boolean
from .logic import eval_branching, eval_em, parse_formula
from .quantale import BOOL, INTERVAL, Kind
from .systems import load_system, parse_element, parse_system

__all__ = [
    "BOOL",
    "INTERVAL",
    "Conformance",
    "Kind",
    "alpha",
    "bisim_metric",
    "bisimilarity",
    "directed_hausdorff",
    "egli_milner_gfp",
    "equivalent_liftings_check",
    "eval_branching",
    "eval_em",
    "gamma_contains",
    "hm_check_boolean_branching",
    "hm_check_linear",
    "kantorovich",
    "kantorovich_definitional_boolean",
    "load_system",
    "parse_element",
    "parse_formula",
    "parse_system",
    "simulation_distance",
    "trace_distance",
    "trace_equivalence",
]
