"""Exact correlation and influence computations for set families on the discrete cube."""

__version__ = "0.1.0"

from .cube import (
    CubeFunction,
    InfluenceVector,
    SetFamily,
    Spectrum,
    correlation,
    directional_difference,
    dual,
    influence,
    influences,
    inverse_wht,
    m_alpha,
    predicates,
    spectral_correlation,
    wht,
)
from .dyadic import Dyadic
from .errors import ClassViolation, DimensionMismatch, HypercorrError, ResourceLimit
from .families import (
    TribesParams,
    count_families,
    enumerate_families,
    lift_pair,
    majority,
    principal,
    random_increasing,
    threshold,
    tribes,
)
from .flow import FlowInstance, LambdaScheme, check_kahn_flow, flow_to, kleitman_feasible
from .inequalities import REGISTRY, equivalence_check, evaluate, evaluate_ensemble
from .search import ScanSpec, local_search, scan, tribes_sweep

__all__ = [
    "CubeFunction", "InfluenceVector", "SetFamily", "Spectrum", "correlation",
    "directional_difference", "dual", "influence", "influences", "inverse_wht", "m_alpha",
    "predicates", "spectral_correlation", "wht", "Dyadic", "ClassViolation", "DimensionMismatch",
    "HypercorrError", "ResourceLimit", "TribesParams", "count_families", "enumerate_families",
    "lift_pair", "majority", "principal", "random_increasing", "threshold", "tribes",
    "FlowInstance", "LambdaScheme", "check_kahn_flow", "flow_to", "kleitman_feasible",
    "REGISTRY", "equivalence_check", "evaluate", "evaluate_ensemble", "ScanSpec",
    "local_search", "scan", "tribes_sweep",
]
