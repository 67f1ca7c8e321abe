"""Certify multipartite entanglement in Heisenberg and XY spin rings from the internal energy."""

from .hilbert import (Boundary, ChainSpec, ChainSpecError, HermitianOperator, Model,
                      PauliString, ResourceLimitError, build_hamiltonian,
                      build_witness_operator, expectation, sector_blocks)
from .thermo import (DensityMatrix, SpectralDecomposition, ThermalEnsemble, diagonalize,
                     internal_energy, reduced_density_matrix, thermal_density_matrix,
                     two_qubit_entangled)
from .witness import (BoundClass, EnergyBound, EntanglementVerdict, biseparable_witness_bound,
                      bound_value, classify, witness_verdict)
from .thresholds import (NoThresholdError, ThresholdResult, temperature_sweep,
                         threshold_temperature, xy_limit_internal_energy, xy_limit_threshold)

__version__ = "0.1.0"

__all__ = [
    "Boundary", "ChainSpec", "ChainSpecError", "HermitianOperator", "Model", "PauliString",
    "ResourceLimitError", "build_hamiltonian", "build_witness_operator", "expectation",
    "sector_blocks", "DensityMatrix", "SpectralDecomposition", "ThermalEnsemble", "diagonalize",
    "internal_energy", "reduced_density_matrix", "thermal_density_matrix",
    "two_qubit_entangled", "BoundClass", "EnergyBound", "EntanglementVerdict",
    "biseparable_witness_bound", "bound_value", "classify", "witness_verdict",
    "NoThresholdError", "ThresholdResult", "temperature_sweep", "threshold_temperature",
    "xy_limit_internal_energy", "xy_limit_threshold",
]
