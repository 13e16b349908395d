"""Lipkin-Meshkov-Glick model in the symmetric (Dicke) basis.

The model couples N spin-1/2 sites pairwise with infinite range,

    H = -(lam/N) * sum_{i<j} (sx_i sx_j + gamma * sy_i sy_j) - h * sum_i sz_i,

with ferromagnetic coupling lam > 0, anisotropy gamma and transverse field h.
Permutation symmetry confines the low-energy physics to the maximum-spin
sector J = N/2, spanned by the N+1 Dicke states |N/2, M>.  In collective
operators,

    H = -(lam/N)(1+gamma)(J^2 - Jz^2 - N/2) - 2h Jz
        - (lam/(2N))(1-gamma)(J+ J+ + J- J-),

so the matrix in the Dicke basis is real symmetric and couples M only to
M +/- 2.  We index states by the up-spin count n = M + N/2 in [0, N] and
store the matrix as its diagonal plus the second superdiagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LmgParams",
    "PentadiagonalSymmetric",
    "DickeVector",
    "build_hamiltonian",
    "isotropic_ground_m",
    "isotropic_ground_up_count",
    "isotropic_ground_energy",
]

STATE_NORM_TOL = 1e-12


def _round_half_away(x: float) -> float:
    """Round to the nearest integer, halves away from zero."""
    return math.floor(x + 0.5) if x >= 0.0 else math.ceil(x - 0.5)


@dataclass(frozen=True)
class LmgParams:
    """Parameters of one Hamiltonian instance.

    spin_count   number of spin-1/2 sites N (>= 1)
    anisotropy   gamma, dimensionless (1 is the isotropic point)
    field        transverse field h along z
    coupling     ferromagnetic coupling lam > 0 (1 in all standard scans)
    """

    spin_count: int
    anisotropy: float
    field: float
    coupling: float = 1.0

    def __post_init__(self):
        if int(self.spin_count) != self.spin_count or self.spin_count < 1:
            raise ValueError(f"spin_count must be an integer >= 1, got {self.spin_count}")
        object.__setattr__(self, "spin_count", int(self.spin_count))
        for name in ("anisotropy", "field", "coupling"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.coupling <= 0.0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")


@dataclass(frozen=True)
class PentadiagonalSymmetric:
    """Real symmetric matrix with nonzero entries only on the main diagonal
    and the second off-diagonals (index n couples to n +/- 2 only).

    Stored as two vectors: ``diagonal`` of length N+1 and
    ``second_superdiagonal`` of length N-1, entry n holding the coupling
    between n and n+2.  The subdiagonal is implicit by symmetry.
    """

    diagonal: np.ndarray
    second_superdiagonal: np.ndarray

    def __post_init__(self):
        diag = np.array(self.diagonal, dtype=float)
        off = np.array(self.second_superdiagonal, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diagonal must be a nonempty 1-d vector")
        if off.ndim != 1 or off.size != max(diag.size - 2, 0):
            raise ValueError(
                f"second superdiagonal must have length {max(diag.size - 2, 0)}, got {off.size}"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise ValueError("matrix entries must be finite")
        diag.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "second_superdiagonal", off)

    @property
    def dimension(self) -> int:
        return self.diagonal.size

    def norm_inf(self) -> float:
        """Maximum absolute row sum."""
        rows = np.abs(self.diagonal).copy()
        off = np.abs(self.second_superdiagonal)
        rows[: off.size] += off
        rows[2 : 2 + off.size] += off
        return float(rows.max()) if rows.size else 0.0

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.dimension,):
            raise ValueError(f"vector must have shape ({self.dimension},)")
        out = self.diagonal * vec
        off = self.second_superdiagonal
        out[: off.size] += off * vec[2:]
        out[2:] += off * vec[: off.size]
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diagonal)
        if self.second_superdiagonal.size:
            dense += np.diag(self.second_superdiagonal, 2)
            dense += np.diag(self.second_superdiagonal, -2)
        return dense


@dataclass(frozen=True)
class DickeVector:
    """Normalized real state in the J = N/2 sector.

    ``coeffs[n]`` is the amplitude on the Dicke state |N/2, n - N/2> with n
    up-spins.  The Hamiltonian is real symmetric, so a real eigenbasis
    always exists and only real coefficients are supported.
    """

    spin_count: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.spin_count + 1,):
            raise ValueError(
                f"coeffs must have length {self.spin_count + 1}, got {coeffs.size}"
            )
        norm = float(np.linalg.norm(coeffs))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state norm deviates from 1 by {abs(norm - 1.0):.3e}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)


def build_hamiltonian(params: LmgParams) -> PentadiagonalSymmetric:
    """Assemble the collective-spin Hamiltonian in the Dicke basis.

    With J = N/2 and M = n - N/2:

        diagonal[n] = -(lam/N)(1+gamma)(J(J+1) - M^2 - N/2) - 2 h M
        offdiag[n]  = -(lam/(2N))(1-gamma)
                      * sqrt((J(J+1) - M(M+1)) (J(J+1) - (M+1)(M+2)))

    The off-diagonal entry is the <M+2| J+ J+ |M> matrix element; J- J-
    supplies the symmetric partner.  There is no single-step coupling since
    J+ J+ changes M by 2.
    """
    n_spins = params.spin_count
    lam, gamma, h = params.coupling, params.anisotropy, params.field
    j = n_spins / 2.0
    jj = j * (j + 1.0)
    m = np.arange(n_spins + 1, dtype=float) - j
    diagonal = -(lam / n_spins) * (1.0 + gamma) * (jj - m**2 - n_spins / 2.0) - 2.0 * h * m
    m_lo = m[: max(n_spins - 1, 0)]
    off = -(lam / (2.0 * n_spins)) * (1.0 - gamma) * np.sqrt(
        (jj - m_lo * (m_lo + 1.0)) * (jj - (m_lo + 1.0) * (m_lo + 2.0))
    )
    return PentadiagonalSymmetric(diagonal, off)


def isotropic_ground_up_count(params: LmgParams) -> int:
    """Up-spin count n of the isotropic (gamma=1) ground Dicke state.

    At gamma=1 the Hamiltonian is diagonal and the energy is a parabola in
    the continuous magnetization, minimized at M = h N / (2 lam).  The ground
    state is the Dicke state with n nearest to N/2 + h N / (2 lam), clipped
    at full polarization n = N for h >= lam.  Halves round away from zero;
    at an exact half-integer the two adjacent states are degenerate and the
    rounded one is returned.
    """
    if params.anisotropy != 1.0:
        raise ValueError("closed form requires anisotropy gamma = 1 exactly")
    if params.field < 0.0:
        raise ValueError("negative field is outside the analyzed region h >= 0")
    n_spins = params.spin_count
    n_star = n_spins / 2.0 + params.field * n_spins / (2.0 * params.coupling)
    return min(n_spins, int(_round_half_away(n_star)))


def isotropic_ground_m(params: LmgParams) -> float:
    """Ground-state magnetization M at gamma=1: I(hN/2) for 0 <= h < 1 and
    N/2 for h >= 1 (unit coupling), where I rounds halves away from zero.
    Integer-valued for even N, half-integer for odd N.
    """
    return isotropic_ground_up_count(params) - params.spin_count / 2.0


def isotropic_ground_energy(params: LmgParams, m: float) -> float:
    """Isotropic ground-state energy lam (-N/2 + 2 M^2 / N) - 2 h M.

    ``m`` is expected from :func:`isotropic_ground_m`; any magnetization on
    the Dicke ladder is accepted and evaluated.
    """
    if params.anisotropy != 1.0:
        raise ValueError("closed form requires anisotropy gamma = 1 exactly")
    n_spins = params.spin_count
    n_up = m + n_spins / 2.0
    if abs(n_up - round(n_up)) > 1e-9 or not (0 <= round(n_up) <= n_spins):
        raise ValueError(f"M={m} is not on the Dicke ladder of N={n_spins}")
    return params.coupling * (-n_spins / 2.0 + 2.0 * m * m / n_spins) - 2.0 * params.field * m
