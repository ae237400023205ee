"""Hybrid-quantum-walk variational ansatz toolkit.

Simulation of coin-conditioned walk circuits and their layered baseline,
analytic adjoint gradients, Pauli-string Lie and Jordan-Lie algebra
closures, Pontryagin analysis of the optimal coin, and a reproducible
Max-Cut / independent-set benchmark harness.
"""

from .ansatz import (
    HqwParams,
    QaoaParams,
    hqw_path_expansion,
    hqw_state,
    qaoa_reduction_check,
    qaoa_state,
    variant_params_from_hqw,
)
from .graphs import Graph, make_graph, max_cut_value, mis_optimum, random_connected_graph
from .hamiltonian import (
    PauliOperator,
    jordan_negativity,
    jordan_product,
    maxcut_hamiltonian,
    mis_hamiltonian,
    mixer_hamiltonian,
    sectional_curvature,
    taylor_bch_residuals,
)
from .optimizer import OptimizerConfig, optimize_run

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "HqwParams",
    "OptimizerConfig",
    "PauliOperator",
    "QaoaParams",
    "hqw_path_expansion",
    "hqw_state",
    "jordan_negativity",
    "jordan_product",
    "make_graph",
    "max_cut_value",
    "maxcut_hamiltonian",
    "mis_hamiltonian",
    "mis_optimum",
    "mixer_hamiltonian",
    "optimize_run",
    "qaoa_reduction_check",
    "qaoa_state",
    "random_connected_graph",
    "sectional_curvature",
    "taylor_bch_residuals",
    "variant_params_from_hqw",
]
