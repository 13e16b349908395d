"""Symmetric eigensolvers and an ordinary least-squares line fit.

The pentadiagonal solver exploits the parity structure of the collective
Hamiltonian: couplings link n to n +/- 2 only, so even-n and odd-n indices
form two independent symmetric tridiagonal blocks.  Each block is handed to
LAPACK (bisection plus inverse iteration via ``eigh_tridiagonal``); dense
matrices go through ``eigh``.  Solver failures surface as
:class:`ConvergenceError`, never silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh, eigh_tridiagonal, eigvalsh

from .model import DickeVector, PentadiagonalSymmetric

__all__ = [
    "ConvergenceError",
    "SymmetricEigenResult",
    "LineFit",
    "eig_pentadiagonal_ground",
    "eig_pentadiagonal_all",
    "eig_dense_symmetric",
    "fit_line",
]

SYMMETRY_RTOL = 1e-10
# Below this relative gap the two parity blocks are treated as degenerate and
# the even block wins, selecting the symmetric cat combination at small h.
PARITY_TIE_RTOL = 1e-12


class ConvergenceError(RuntimeError):
    """An eigensolver exhausted its iteration budget."""


@dataclass
class SymmetricEigenResult:
    """Ascending eigenvalues and, optionally, matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    residual_rms: float
    point_count: int


def _parity_blocks(ham: PentadiagonalSymmetric):
    """Index sets and tridiagonal bands of the even and odd parity blocks."""
    for parity in (0, 1):
        idx = np.arange(parity, ham.dimension, 2)
        diag = ham.diagonal[idx]
        off = ham.second_superdiagonal[idx[:-1]] if idx.size > 1 else np.empty(0)
        yield parity, idx, diag, off


def _tridiagonal_ground(diag: np.ndarray, off: np.ndarray, parity: int):
    if diag.size == 1:
        return float(diag[0]), np.ones(1)
    try:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    except LinAlgError as exc:
        raise ConvergenceError(
            f"tridiagonal eigensolve did not converge on the parity-{parity} "
            f"block of size {diag.size}"
        ) from exc
    return float(w[0]), v[:, 0]


def eig_pentadiagonal_ground(ham: PentadiagonalSymmetric) -> tuple[float, DickeVector]:
    """Lowest eigenpair of the pentadiagonal collective Hamiltonian.

    Solves the even and odd parity blocks independently and returns the
    global minimum.  When the two block minima agree to within
    ``PARITY_TIE_RTOL * ||H||_inf`` the even block wins.  The eigenvector's
    first nonzero coefficient is made positive.
    """
    solved = [
        (parity, idx) + _tridiagonal_ground(diag, off, parity)
        for parity, idx, diag, off in _parity_blocks(ham)
    ]
    (_, idx_even, e_even, v_even), (_, idx_odd, e_odd, v_odd) = solved
    tie = abs(e_even - e_odd) <= PARITY_TIE_RTOL * max(ham.norm_inf(), 1e-300)
    if tie or e_even <= e_odd:
        energy, idx, vec = e_even, idx_even, v_even
    else:
        energy, idx, vec = e_odd, idx_odd, v_odd

    coeffs = np.zeros(ham.dimension)
    coeffs[idx] = vec
    nonzero = np.nonzero(coeffs)[0]
    if coeffs[nonzero[0]] < 0.0:
        coeffs = -coeffs
    return energy, DickeVector(ham.dimension - 1, coeffs)


def eig_pentadiagonal_all(ham: PentadiagonalSymmetric) -> np.ndarray:
    """Full ascending spectrum, merged from the two parity blocks."""
    spectra = []
    for parity, _, diag, off in _parity_blocks(ham):
        if diag.size == 1:
            spectra.append(diag)
            continue
        try:
            spectra.append(eigh_tridiagonal(diag, off, eigvals_only=True))
        except LinAlgError as exc:
            raise ConvergenceError(
                f"tridiagonal eigensolve did not converge on the parity-{parity} "
                f"block of size {diag.size}"
            ) from exc
    return np.sort(np.concatenate(spectra))


def eig_dense_symmetric(matrix: np.ndarray, with_vectors: bool = True) -> SymmetricEigenResult:
    """Full spectrum of a dense real symmetric matrix, ascending.

    Rejects matrices whose asymmetry exceeds ``SYMMETRY_RTOL`` relative to
    the largest entry.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    scale = max(float(np.abs(matrix).max()), 1e-300)
    asym = float(np.abs(matrix - matrix.T).max())
    if asym > SYMMETRY_RTOL * scale:
        raise ValueError(f"matrix asymmetry {asym:.3e} exceeds {SYMMETRY_RTOL:g} relative")
    try:
        if with_vectors:
            eigenvalues, eigenvectors = eigh(matrix)
            return SymmetricEigenResult(eigenvalues, eigenvectors)
        return SymmetricEigenResult(eigvalsh(matrix), None)
    except LinAlgError as exc:
        raise ConvergenceError(
            f"dense symmetric eigensolve did not converge (dimension {matrix.shape[0]})"
        ) from exc


def fit_line(xs: np.ndarray, ys: np.ndarray) -> LineFit:
    """Ordinary least squares y = slope * x + intercept.

    ``residual_rms`` is the root mean square of the vertical residuals.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be 1-d vectors of equal length")
    if xs.size < 2:
        raise ValueError("need at least two points to fit a line")
    if float(np.ptp(xs)) == 0.0:
        raise ValueError("xs are all equal; slope is undefined")
    dx = xs - xs.mean()
    slope = float(np.dot(dx, ys - ys.mean()) / np.dot(dx, dx))
    intercept = float(ys.mean() - slope * xs.mean())
    residuals = ys - (slope * xs + intercept)
    return LineFit(slope, intercept, float(np.sqrt(np.mean(residuals**2))), xs.size)
