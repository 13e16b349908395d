"""Block entanglement of Dicke-sector states.

A Dicke state splits over a block of L spins and its (N-L)-spin environment
as a Schmidt sum

    |N/2, n - N/2>  =  sum_l sqrt(p_l) |L/2, l - L/2> (x) |(N-L)/2, n-l - (N-L)/2>,

where p_l = C(L,l) C(N-L,n-l) / C(N,n) is a hypergeometric distribution.
Reduced density matrices of arbitrary superpositions of Dicke states follow
by tracing the environment index, so an (L+1) x (L+1) matrix captures the
entire block state.  Entropies are in bits (log base 2) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .linalg import eig_dense_symmetric
from .model import DickeVector

__all__ = [
    "HypergeometricWeights",
    "BlockDensityMatrix",
    "EntanglementSpectrum",
    "MajorizationOrder",
    "hypergeometric_weights",
    "hypergeometric_entropy",
    "reduce_block",
    "spectrum_of",
    "gaussian_entropy",
    "majorization_compare",
]

WEIGHT_SUM_TOL = 1e-12
TRACE_TOL = 1e-10
MATRIX_SYMMETRY_TOL = 1e-12
# Eigenvalues in [EIGENVALUE_CLIP_FLOOR, 0) are numerical noise and clipped
# to zero; anything below the floor marks an invalid density matrix.
EIGENVALUE_CLIP_FLOOR = -1e-10
MAJORIZATION_TOL = 1e-10
SPECTRUM_SUM_TOL = 1e-9


def _entropy_bits(probs: np.ndarray) -> float:
    """Shannon entropy in bits with the convention 0 log 0 = 0."""
    positive = probs[probs > 0.0]
    return float(-(positive * np.log2(positive)).sum()) + 0.0


@dataclass(frozen=True)
class HypergeometricWeights:
    """Squared Schmidt coefficients of one Dicke state across an L / N-L cut."""

    block_size: int
    environment_size: int
    up_count: int
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if np.any(weights < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("weights must sum to 1")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class BlockDensityMatrix:
    """Reduced density matrix of an L-spin block in the block Dicke basis."""

    block_size: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        dim = self.block_size + 1
        if entries.shape != (dim, dim):
            raise ValueError(f"entries must be {dim}x{dim}, got {entries.shape}")
        trace_dev = abs(float(np.trace(entries)) - 1.0)
        if trace_dev > TRACE_TOL:
            raise ValueError(f"trace deviates from 1 by {trace_dev:.3e}")
        asym = float(np.abs(entries - entries.T).max())
        if asym > MATRIX_SYMMETRY_TOL:
            raise ValueError(f"asymmetry {asym:.3e} exceeds {MATRIX_SYMMETRY_TOL:g}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class EntanglementSpectrum:
    """Descending eigenvalues of a block density matrix plus derived data.

    ``cumulants`` are the partial sums of the descending probabilities, the
    quantities compared in the majorization partial order.
    """

    probs: np.ndarray
    entropy_bits: float
    cumulants: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        cumulants = np.array(self.cumulants, dtype=float)
        if abs(float(probs.sum()) - 1.0) > SPECTRUM_SUM_TOL:
            raise ValueError("spectrum probabilities must sum to 1")
        if np.any(np.diff(cumulants) < -SPECTRUM_SUM_TOL) or abs(cumulants[-1] - 1.0) > SPECTRUM_SUM_TOL:
            raise ValueError("cumulants must be nondecreasing and end at 1")
        if self.entropy_bits > math.log2(probs.size) + 1e-9:
            raise ValueError("entropy exceeds log2 of the spectrum length")
        probs.setflags(write=False)
        cumulants.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "cumulants", cumulants)


class MajorizationOrder(Enum):
    EQUAL = "equal"
    X_MAJORIZES_Y = "x_majorizes_y"
    Y_MAJORIZES_X = "y_majorizes_x"
    INCOMPARABLE = "incomparable"


def _log_binomial(n: int, k: np.ndarray | int) -> np.ndarray:
    return gammaln(n + 1.0) - gammaln(np.asarray(k) + 1.0) - gammaln(n - np.asarray(k) + 1.0)


def _support(n_spins: int, block_size: int, n_up: int) -> tuple[int, int]:
    lo = max(0, n_up - (n_spins - block_size))
    hi = min(block_size, n_up)
    return lo, hi


def _weights_on_support(n_spins: int, block_size: int, n_up: int) -> tuple[int, int, np.ndarray]:
    """Normalized weights on [lo, hi], computed in log space.

    Log-gamma keeps binomials finite up to N of a few thousand; the final
    normalization squashes the ~1e-12 log-gamma rounding so the exact
    Vandermonde sum of 1 is restored.
    """
    lo, hi = _support(n_spins, block_size, n_up)
    ls = np.arange(lo, hi + 1)
    log_w = (
        _log_binomial(block_size, ls)
        + _log_binomial(n_spins - block_size, n_up - ls)
        - _log_binomial(n_spins, n_up)
    )
    w = np.exp(log_w)
    w /= w.sum()
    return lo, hi, w


def hypergeometric_weights(n_spins: int, block_size: int, n_up: int) -> HypergeometricWeights:
    """Weights p_l = C(L,l) C(N-L,n-l) / C(N,n) over l in [0, L].

    Entries outside the support l in [max(0, n-(N-L)), min(L, n)] are zero.
    """
    if not 0 <= block_size <= n_spins:
        raise ValueError(f"block_size must be in [0, {n_spins}], got {block_size}")
    if not 0 <= n_up <= n_spins:
        raise ValueError(f"up count must be in [0, {n_spins}], got {n_up}")
    lo, hi, w = _weights_on_support(n_spins, block_size, n_up)
    weights = np.zeros(block_size + 1)
    weights[lo : hi + 1] = w
    return HypergeometricWeights(block_size, n_spins - block_size, n_up, weights)


def hypergeometric_entropy(n_spins: int, block_size: int, n_up: int) -> float:
    """Block entropy -sum_l p_l log2 p_l of a single Dicke state."""
    return _entropy_bits(hypergeometric_weights(n_spins, block_size, n_up).weights)


def reduce_block(state: DickeVector, block_size: int) -> BlockDensityMatrix:
    """Trace a Dicke-sector state down to an L-spin block.

    Writing a_n for the state coefficients and q_l(n) = sqrt(p_l) for the
    (N, L, n) Schmidt weights, the matrix element is

        rho[l, l'] = sum_m a_{l+m} a_{l'+m} q_l(l+m) q_{l'}(l'+m),

    summed over environment up-counts m in [0, N-L].  The coefficient table
    a_n q_l(n) is assembled once and the m sum is a single matrix product,
    O(L^2 N) time and O(L N) memory.
    """
    n_spins = state.spin_count
    if not 1 <= block_size <= n_spins - 1:
        raise ValueError(f"block_size must be in [1, {n_spins - 1}], got {block_size}")
    env_size = n_spins - block_size
    coeff = np.zeros((block_size + 1, env_size + 1))
    for n_up in range(n_spins + 1):
        amp = state.coeffs[n_up]
        if amp == 0.0:
            continue
        lo, hi, w = _weights_on_support(n_spins, block_size, n_up)
        ls = np.arange(lo, hi + 1)
        coeff[ls, n_up - ls] = amp * np.sqrt(w)
    rho = coeff @ coeff.T
    rho = 0.5 * (rho + rho.T)
    return BlockDensityMatrix(block_size, rho)


def spectrum_of(rho: BlockDensityMatrix) -> EntanglementSpectrum:
    """Diagonalize a block density matrix into its entanglement spectrum.

    Eigenvalues in [-1e-10, 0) are clipped to zero and the spectrum is
    renormalized; an eigenvalue below the floor raises ``ValueError``.
    """
    eigenvalues = eig_dense_symmetric(rho.entries, with_vectors=False).eigenvalues
    lowest = float(eigenvalues[0])
    if lowest < EIGENVALUE_CLIP_FLOOR:
        raise ValueError(
            f"eigenvalue {lowest:.3e} below {EIGENVALUE_CLIP_FLOOR:g}: not a density matrix"
        )
    probs = np.clip(eigenvalues, 0.0, None)[::-1]
    probs = probs / probs.sum()
    return EntanglementSpectrum(probs, _entropy_bits(probs), np.cumsum(probs))


def gaussian_entropy(n_spins: int, block_size: int, n_up: int) -> float:
    """Large-N Gaussian approximation to the hypergeometric block entropy.

    The weight distribution has variance s2 = n (N-n) (N-L) L / N^3 (the
    subleading N-L factor keeps the L <-> N-L symmetry exact), and a
    Gaussian of variance s2 carries (1/2)(log2 e + log2 2pi + log2 s2) bits.
    """
    if not 0 <= block_size <= n_spins:
        raise ValueError(f"block_size must be in [0, {n_spins}], got {block_size}")
    if not 0 <= n_up <= n_spins:
        raise ValueError(f"up count must be in [0, {n_spins}], got {n_up}")
    small, large = sorted((int(block_size), int(n_spins - block_size)))
    # exact integer products, one float division: the L <-> N-L swap hits
    # identical operands, so the symmetry survives rounding bit for bit
    variance = (int(n_up) * int(n_spins - n_up)) * (small * large) / float(n_spins) ** 3
    if variance <= 0.0:
        raise ValueError(
            "zero-variance configuration: need 0 < n_up < N and 0 < block_size < N"
        )
    return 0.5 * (math.log2(math.e) + math.log2(2.0 * math.pi) + math.log2(variance))


def _padded_cumulants(spectrum: EntanglementSpectrum, length: int) -> np.ndarray:
    cum = spectrum.cumulants
    if cum.size >= length:
        return cum
    return np.concatenate([cum, np.full(length - cum.size, cum[-1])])


def majorization_compare(x: EntanglementSpectrum, y: EntanglementSpectrum) -> MajorizationOrder:
    """Compare two spectra in the majorization partial order.

    y majorizes x (x is the more disordered) iff every cumulant of x is at
    most the corresponding cumulant of y.  The shorter spectrum is padded
    with zeros, which extends its cumulants by repetition; comparisons use
    an absolute tolerance of 1e-10.
    """
    length = max(x.probs.size, y.probs.size)
    diff = _padded_cumulants(x, length) - _padded_cumulants(y, length)
    x_below = bool(np.all(diff <= MAJORIZATION_TOL))
    y_below = bool(np.all(diff >= -MAJORIZATION_TOL))
    if x_below and y_below:
        return MajorizationOrder.EQUAL
    if x_below:
        return MajorizationOrder.Y_MAJORIZES_X
    if y_below:
        return MajorizationOrder.X_MAJORIZES_Y
    return MajorizationOrder.INCOMPARABLE
