"""Bounded integer programs solved and counted through exact enumeration of
short lattice vectors outside a hyperplane."""

from .model import BipInstance, BkpInstance, BudgetExceeded, validate_instance, verify_bip, verify_bkp
from .oracle import oracle_count, oracle_optimize, oracle_solutions, oracle_solve
from .pipeline import (
    count_bip,
    count_bkp_via_sap,
    optimize_bip,
    shortest_length_profile,
    solve_bip,
    solve_bkp_via_sap,
)
from .reduction import ReductionArtifacts, choose_params, reduce_bkp
from .sap import LatticeVector, Norm, SapQuery, enumerate_within, sap_shortest

__all__ = [
    "BipInstance", "BkpInstance", "BudgetExceeded", "LatticeVector", "Norm",
    "ReductionArtifacts", "SapQuery", "choose_params", "count_bip", "count_bkp_via_sap",
    "enumerate_within", "optimize_bip", "oracle_count", "oracle_optimize",
    "oracle_solutions", "oracle_solve", "reduce_bkp", "sap_shortest",
    "shortest_length_profile", "solve_bip", "solve_bkp_via_sap", "validate_instance",
    "verify_bip", "verify_bkp",
]
