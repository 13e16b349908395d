"""Brute-force reference in the full 2^N Hilbert space.

Everything here works directly on the site Hamiltonian

    H = -(lam/N) sum_{i<j} (sx_i sx_j + gamma sy_i sy_j) - h sum_i sz_i

without any symmetry reduction, so it is exponentially expensive and capped
at N = 14 spins.  It exists to validate the Dicke-basis pipeline and is used
only by tests and the ``verify`` CLI command.

Conventions: basis index b runs over bitstrings, bit i (least significant
first) is site i, bit value 1 means spin up (sz = +1).  The product
sy_i sy_j is real in this basis, with matrix element -(1-2b_i)(1-2b_j) to
the doubly flipped string, so the whole matrix is real symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigvalsh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .entanglement import reduce_block, spectrum_of
from .linalg import eig_pentadiagonal_ground
from .model import LmgParams, build_hamiltonian

__all__ = [
    "MAX_ORACLE_SPINS",
    "DEGENERACY_GAP",
    "FullStateVector",
    "oracle_hamiltonian",
    "oracle_ground_state",
    "oracle_reduce",
    "VerificationPoint",
    "VerificationReport",
    "run_verification",
]

MAX_ORACLE_SPINS = 14
# Dense full diagonalization is cheap up to 2^10; larger systems use Lanczos.
DENSE_SOLVE_MAX_SPINS = 10
# Ground states with a lower gap are treated as degenerate and skipped in
# comparisons: the eigenvector is then an arbitrary mixture.
DEGENERACY_GAP = 1e-10
VERIFY_TOL = 1e-8
_LANCZOS_SEED = 171717


@dataclass(frozen=True)
class FullStateVector:
    """Unit-norm real state over all 2^N computational basis states."""

    spin_count: int
    amps: np.ndarray

    def __post_init__(self):
        if self.spin_count > MAX_ORACLE_SPINS:
            raise ValueError(f"full-space states are capped at N={MAX_ORACLE_SPINS}")
        amps = np.array(self.amps, dtype=float)
        if amps.shape != (1 << self.spin_count,):
            raise ValueError(f"amps must have length {1 << self.spin_count}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm deviates from 1 by {abs(norm - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)


def oracle_hamiltonian(params: LmgParams) -> np.ndarray:
    """Dense 2^N x 2^N site Hamiltonian from explicit Pauli pair terms.

    For each pair (i, j) the xy coupling connects b to b with bits i and j
    flipped, with amplitude -(lam/N)(1-gamma) when the bits agree and
    -(lam/N)(1+gamma) when they differ; the field contributes the diagonal
    -h (2 popcount(b) - N).
    """
    n_spins = params.spin_count
    if n_spins > MAX_ORACLE_SPINS:
        raise ValueError(
            f"refusing N={n_spins}: dense 2^N matrices are capped at N={MAX_ORACLE_SPINS}"
        )
    lam, gamma = params.coupling, params.anisotropy
    dim = 1 << n_spins
    states = np.arange(dim)
    popcount = np.zeros(dim, dtype=np.int64)
    for site in range(n_spins):
        popcount += (states >> site) & 1

    ham = np.zeros((dim, dim))
    ham[states, states] = -params.field * (2.0 * popcount - n_spins)
    for i in range(n_spins):
        bits_i = (states >> i) & 1
        for j in range(i + 1, n_spins):
            bits_j = (states >> j) & 1
            flipped = states ^ ((1 << i) | (1 << j))
            amplitude = np.where(
                bits_i == bits_j,
                -(lam / n_spins) * (1.0 - gamma),
                -(lam / n_spins) * (1.0 + gamma),
            )
            ham[flipped, states] += amplitude
    return ham


def oracle_ground_state(params: LmgParams) -> tuple[float, float, FullStateVector]:
    """Lowest eigenpair of the full Hamiltonian plus the gap above it.

    Returns (energy, gap, state).  Uses a full dense solve for N <= 10 and
    Lanczos with a fixed seed vector for larger systems; Lanczos results are
    residual-checked against the matrix.
    """
    ham = oracle_hamiltonian(params)
    n_spins = params.spin_count
    if n_spins <= DENSE_SOLVE_MAX_SPINS:
        w, v = eigh(ham)
        energy, gap, vec = float(w[0]), float(w[1] - w[0]), v[:, 0]
    else:
        rng = np.random.default_rng(_LANCZOS_SEED)
        v0 = rng.standard_normal(ham.shape[0])
        try:
            w, v = eigsh(ham, k=2, which="SA", v0=v0, maxiter=100 * ham.shape[0])
        except ArpackNoConvergence as exc:
            raise RuntimeError(f"Lanczos did not converge for N={n_spins}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        residual = float(np.abs(ham @ v[:, 0] - w[0] * v[:, 0]).max())
        scale = float(np.abs(ham).sum(axis=1).max())
        if residual > 1e-9 * scale:
            raise RuntimeError(
                f"Lanczos residual {residual:.3e} exceeds 1e-9 * ||H|| for N={n_spins}"
            )
        energy, gap, vec = float(w[0]), float(w[1] - w[0]), v[:, 0]

    nonzero = np.nonzero(vec)[0]
    if vec[nonzero[0]] < 0.0:
        vec = -vec
    return energy, gap, FullStateVector(n_spins, vec / np.linalg.norm(vec))


def oracle_reduce(state: FullStateVector, block_size: int) -> tuple[np.ndarray, float]:
    """Partial trace over the last N-L sites and the block entropy in bits.

    The block is sites 0..L-1 (the low bits), so the amplitude tensor
    reshapes into (environment, block) and rho = A^T A.
    """
    n_spins = state.spin_count
    if not 1 <= block_size <= n_spins - 1:
        raise ValueError(f"block_size must be in [1, {n_spins - 1}], got {block_size}")
    amp_table = state.amps.reshape(1 << (n_spins - block_size), 1 << block_size)
    rho = amp_table.T @ amp_table
    rho = 0.5 * (rho + rho.T)
    probs = np.clip(eigvalsh(rho), 0.0, None)
    probs = probs[probs > 0.0] / probs.sum()
    entropy = float(-(probs * np.log2(probs)).sum()) + 0.0
    return rho, entropy


@dataclass(frozen=True)
class VerificationPoint:
    spin_count: int
    gamma: float
    h: float
    block_size: int
    entropy_oracle: float
    entropy_pipeline: float

    @property
    def deviation(self) -> float:
        return abs(self.entropy_oracle - self.entropy_pipeline)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the oracle equivalence grid."""

    points: list[VerificationPoint]
    skipped: list[tuple[int, float, float, float]]  # (N, gamma, h, gap)
    tolerance: float = VERIFY_TOL

    @property
    def max_deviation(self) -> float:
        return max((p.deviation for p in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


DEFAULT_VERIFY_GAMMAS = (-0.5, 0.0, 0.5, 1.0)
DEFAULT_VERIFY_FIELDS = (0.0, 0.5, 1.0, 1.5)


def run_verification(
    max_spins: int,
    gammas: tuple[float, ...] = DEFAULT_VERIFY_GAMMAS,
    fields: tuple[float, ...] = DEFAULT_VERIFY_FIELDS,
    min_spins: int = 4,
) -> VerificationReport:
    """Compare oracle and Dicke-pipeline block entropies over a grid.

    For every non-degenerate (N, gamma, h) the entropies at L = 1 and
    L = N // 2 must agree; points whose full-space gap is below
    ``DEGENERACY_GAP`` are reported as skipped, not compared.
    """
    if not min_spins <= max_spins <= MAX_ORACLE_SPINS:
        raise ValueError(
            f"max_spins must be in [{min_spins}, {MAX_ORACLE_SPINS}], got {max_spins}"
        )
    points: list[VerificationPoint] = []
    skipped: list[tuple[int, float, float, float]] = []
    for n_spins in range(min_spins, max_spins + 1):
        for gamma in gammas:
            for h in fields:
                params = LmgParams(n_spins, gamma, h)
                _, gap, full_state = oracle_ground_state(params)
                if gap < DEGENERACY_GAP:
                    skipped.append((n_spins, gamma, h, gap))
                    continue
                _, dicke_state = eig_pentadiagonal_ground(build_hamiltonian(params))
                for block_size in {1, n_spins // 2}:
                    _, s_oracle = oracle_reduce(full_state, block_size)
                    s_pipeline = spectrum_of(reduce_block(dicke_state, block_size)).entropy_bits
                    points.append(
                        VerificationPoint(n_spins, gamma, h, block_size, s_oracle, s_pipeline)
                    )
    return VerificationReport(points, skipped)
