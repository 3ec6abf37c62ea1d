"""Travelling salesman tours by lengthwise zone decomposition."""

from importlib.resources import files
from pathlib import Path

from .estimator import ZoneSweepTSP, check_coords
from .hpsearch import ContractedGraph, EmbeddedHP, PathResult, min_hp, min_k_hps, min_two_hps
from .oracle import BudgetExceeded, OracleBudget, brute_force_hp, brute_force_k_hps, held_karp
from .sweep import InfeasibleError, Tour, filter_report, format_trace, run_sweep
from .tsplib import (Instance, ParseError, distance, load_instance, parse_instance, parse_tour,
                     tour_length, validate_tour)
from .zoning import (BoundaryChoice, PlanError, ZonePlan, ZoneSpec, auto_zone,
                     enumerate_boundary_choices, load_zone_plan)

__version__ = "0.1.0"

__all__ = [
    "BoundaryChoice", "BudgetExceeded", "ContractedGraph", "EmbeddedHP", "InfeasibleError",
    "Instance", "OracleBudget", "ParseError", "PathResult", "PlanError", "Tour", "ZonePlan",
    "ZoneSpec", "ZoneSweepTSP", "auto_zone", "brute_force_hp", "brute_force_k_hps",
    "check_coords", "data_path", "distance", "enumerate_boundary_choices", "filter_report",
    "format_trace", "held_karp", "load_instance", "load_zone_plan", "min_hp", "min_k_hps",
    "min_two_hps", "parse_instance", "parse_tour", "run_sweep", "tour_length", "validate_tour",
]


def data_path(name: str) -> Path:
    """Path to a bundled data file such as ``att48.tsp``."""
    return Path(str(files("zonetsp") / "data" / name))
