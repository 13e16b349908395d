"""Ground states and block entanglement of the Lipkin-Meshkov-Glick model.

The heavy lifting happens in the polynomial-size Dicke basis (N+1 states
for N spins); a brute-force full-Hilbert-space oracle validates the
pipeline for small N.
"""

from .entanglement import (
    BlockDensityMatrix,
    EntanglementSpectrum,
    HypergeometricWeights,
    MajorizationOrder,
    gaussian_entropy,
    hypergeometric_entropy,
    hypergeometric_weights,
    majorization_compare,
    reduce_block,
    spectrum_of,
)
from .linalg import (
    ConvergenceError,
    LineFit,
    SymmetricEigenResult,
    eig_dense_symmetric,
    eig_pentadiagonal_all,
    eig_pentadiagonal_ground,
    fit_line,
)
from .model import (
    DickeVector,
    LmgParams,
    PentadiagonalSymmetric,
    build_hamiltonian,
    isotropic_ground_energy,
    isotropic_ground_m,
    isotropic_ground_up_count,
)
from .sweeps import (
    CoefficientReport,
    MajorizationStep,
    SweepError,
    SweepRecord,
    compute_record,
    fit_a,
    fit_b,
    fit_f,
    fit_iso_prefactor,
    majorization_chain,
    scan_block_sizes,
    scan_gammas,
    scan_h_fixed_ratio,
    sweep_plane,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDensityMatrix",
    "CoefficientReport",
    "ConvergenceError",
    "DickeVector",
    "EntanglementSpectrum",
    "HypergeometricWeights",
    "LineFit",
    "LmgParams",
    "MajorizationOrder",
    "MajorizationStep",
    "PentadiagonalSymmetric",
    "SweepError",
    "SweepRecord",
    "SymmetricEigenResult",
    "build_hamiltonian",
    "compute_record",
    "eig_dense_symmetric",
    "eig_pentadiagonal_all",
    "eig_pentadiagonal_ground",
    "fit_a",
    "fit_b",
    "fit_f",
    "fit_iso_prefactor",
    "fit_line",
    "gaussian_entropy",
    "hypergeometric_entropy",
    "hypergeometric_weights",
    "isotropic_ground_energy",
    "isotropic_ground_m",
    "isotropic_ground_up_count",
    "majorization_chain",
    "majorization_compare",
    "reduce_block",
    "scan_block_sizes",
    "scan_gammas",
    "scan_h_fixed_ratio",
    "spectrum_of",
    "sweep_plane",
    "__version__",
]
