"""Separability probing for bipartite quantum states.

The package asks whether a mixed state on C^m (x) C^n admits a product
decomposition by treating the space of its decompositions (a Stiefel
manifold) as a mechanical configuration space: the sum of concurrences
squared is the energy, separability means the constrained ground-state
energy is zero, and canonical averages at large inverse temperature probe
the gap.  A closed-form pipeline for 2x2 Werner and Bell-diagonal states
reduces the one-particle partition function to a one-dimensional integral
with an explicit saddle condition.
"""
from .quantum_core import (DensityMatrix, EigenEnsemble, PureState,
                           eigen_ensemble, haar_unitary, partial_trace,
                           ppt_is_entangled, tensor_product)
from .concurrence import (HMatrixSet, SkewBasis, concurrence_sq,
                          concurrence_sq_skew, det_product_test, h_matrices,
                          is_product, skew_basis)
from .ensembles import (RhoEnsemble, StiefelPoint, caratheodory_length,
                        constraint_residual, ensemble_from_stiefel,
                        haar_stiefel, stiefel_from_gs)
from .costfn import (CostOperator, LagrangeMultipliers, cost_operator, energy,
                     energy_via_h, full_hamiltonian)
from .statmech import (McEstimate, ScalingFit, StateDensityEstimate,
                       estimate_state_density, fit_energy_scaling,
                       fit_power_law, mc_average_energy, mc_energy_curve,
                       weighted_stats, z1_mc)
from .werner import (ConstraintsUnsatisfiable, EquipartitionScan, OmegaPrime,
                     QuadratureError, SaddleResult, WernerParams,
                     avg_energy_werner, bell_diagonal_h, det_m,
                     energy_closed_form, equipartition_scan, grad_log_z1,
                     grad_log_z1_full, h_matrix, log_z1_quadrature,
                     saddle_search, werner_eigenensemble, werner_state)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix", "EigenEnsemble", "PureState", "eigen_ensemble",
    "haar_unitary", "partial_trace", "ppt_is_entangled", "tensor_product",
    "HMatrixSet", "SkewBasis", "concurrence_sq", "concurrence_sq_skew",
    "det_product_test", "h_matrices", "is_product", "skew_basis",
    "RhoEnsemble", "StiefelPoint", "caratheodory_length", "constraint_residual",
    "ensemble_from_stiefel", "haar_stiefel", "stiefel_from_gs",
    "CostOperator", "LagrangeMultipliers", "cost_operator", "energy",
    "energy_via_h", "full_hamiltonian",
    "McEstimate", "ScalingFit", "StateDensityEstimate",
    "estimate_state_density", "fit_energy_scaling", "fit_power_law",
    "mc_average_energy", "mc_energy_curve", "weighted_stats", "z1_mc",
    "ConstraintsUnsatisfiable", "EquipartitionScan", "OmegaPrime",
    "QuadratureError", "SaddleResult", "WernerParams", "avg_energy_werner",
    "bell_diagonal_h", "det_m", "energy_closed_form", "equipartition_scan",
    "grad_log_z1", "grad_log_z1_full", "h_matrix", "log_z1_quadrature",
    "saddle_search", "werner_eigenensemble", "werner_state",
]
