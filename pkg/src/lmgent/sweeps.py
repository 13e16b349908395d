"""Parameter sweeps, scaling-law fits and the majorization chain.

Every grid point runs the same pure pipeline (build Hamiltonian, ground
state, block reduction, spectrum), so sweeps parallelize over points with a
process pool.  Records come back in grid order, never completion order, and
BLAS is pinned to one thread inside each point, which keeps the numbers
bit-for-bit independent of the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .entanglement import (
    EntanglementSpectrum,
    MajorizationOrder,
    gaussian_entropy,
    hypergeometric_entropy,
    majorization_compare,
    reduce_block,
    spectrum_of,
)
from .linalg import LineFit, eig_pentadiagonal_ground, fit_line
from .model import LmgParams, build_hamiltonian, isotropic_ground_up_count

__all__ = [
    "SweepError",
    "SweepRecord",
    "CoefficientReport",
    "MajorizationStep",
    "default_workers",
    "compute_record",
    "point_spectrum",
    "sweep_plane",
    "scan_h_fixed_ratio",
    "scan_block_sizes",
    "scan_gammas",
    "fit_iso_prefactor",
    "fit_a",
    "fit_b",
    "fit_f",
    "majorization_chain",
    "default_iso_block_grid",
    "default_critical_block_grid",
    "DEFAULT_A_WINDOW",
    "DEFAULT_F_GAMMA_GRID",
]

# Fits reject field points closer to the critical field than this floor.
FIELD_WINDOW_FLOOR = 1e-3
# fit_f rejects anisotropies with 1 - gamma below this floor: the gamma -> 1
# limit does not commute with the large-N limit, so the law breaks there.
GAMMA_WINDOW_FLOOR = 0.05

# Default fit windows; shipped as configs/ files as well so published runs
# are reproducible.  DEFAULT_A_WINDOW is (h_min, h_max, points).
DEFAULT_A_WINDOW = (0.85, 0.98, 27)
DEFAULT_F_GAMMA_GRID = tuple(np.arange(-1.0, 0.751, 0.25))


class SweepError(RuntimeError):
    """Pipeline failure carrying the offending grid point."""


@dataclass(frozen=True)
class SweepRecord:
    """One fully processed grid point."""

    spin_count: int
    block_size: int
    gamma: float
    h: float
    entropy_bits: float
    largest_prob: float
    ground_energy: float


@dataclass(frozen=True)
class CoefficientReport:
    """A fitted scaling coefficient plus the window that produced it."""

    name: str
    fitted_value: float
    window: str
    fit: LineFit
    note: str = ""


@dataclass(frozen=True)
class MajorizationStep:
    h_from: float
    h_to: float
    relation: MajorizationOrder


def default_workers() -> int:
    env = os.environ.get("LMG_WORKERS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"LMG_WORKERS must be an integer, got {env!r}") from exc
        if value < 1:
            raise ValueError(f"LMG_WORKERS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _ground_spectrum(spin_count: int, gamma: float, h: float, block_size: int):
    params = LmgParams(spin_count, gamma, h)
    with threadpool_limits(limits=1):
        energy, state = eig_pentadiagonal_ground(build_hamiltonian(params))
        spectrum = spectrum_of(reduce_block(state, block_size))
    return energy, spectrum


def point_spectrum(
    spin_count: int, gamma: float, h: float, block_size: int
) -> tuple[SweepRecord, EntanglementSpectrum]:
    """Run the full pipeline at one grid point, keeping the whole spectrum."""
    energy, spectrum = _ground_spectrum(spin_count, gamma, h, block_size)
    record = SweepRecord(
        spin_count=spin_count,
        block_size=block_size,
        gamma=gamma,
        h=h,
        entropy_bits=spectrum.entropy_bits,
        largest_prob=float(spectrum.probs[0]),
        ground_energy=energy,
    )
    return record, spectrum


def compute_record(spin_count: int, gamma: float, h: float, block_size: int) -> SweepRecord:
    """Run the full pipeline at one grid point."""
    return point_spectrum(spin_count, gamma, h, block_size)[0]


def _record_worker(point: tuple[int, float, float, int]) -> SweepRecord:
    spin_count, gamma, h, block_size = point
    try:
        return compute_record(spin_count, gamma, h, block_size)
    except Exception as exc:
        raise SweepError(
            f"pipeline failed at n={spin_count} gamma={gamma} h={h} l={block_size}: {exc}"
        ) from exc


def _run_grid(points: list[tuple[int, float, float, int]], workers: int | None) -> list[SweepRecord]:
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(points) <= 1:
        return [_record_worker(p) for p in points]
    with ProcessPoolExecutor(max_workers=min(workers, len(points))) as pool:
        return list(pool.map(_record_worker, points, chunksize=1))


def _validate_block(spin_count: int, block_size: int, label: str = "l") -> None:
    if not 1 <= block_size <= spin_count - 1:
        raise ValueError(f"{label} must be in [1, {spin_count - 1}], got {block_size}")


def sweep_plane(
    spin_count: int,
    block_size: int,
    gamma_grid,
    h_grid,
    workers: int | None = None,
) -> list[SweepRecord]:
    """Full pipeline over the anisotropy-field plane, gamma outer, h inner."""
    gamma_grid = [float(g) for g in gamma_grid]
    h_grid = [float(h) for h in h_grid]
    if not gamma_grid or not h_grid:
        raise ValueError("gamma and h grids must be nonempty")
    _validate_block(spin_count, block_size)
    points = [(spin_count, g, h, block_size) for g in gamma_grid for h in h_grid]
    return _run_grid(points, workers)


def scan_h_fixed_ratio(
    spin_counts,
    ratio: float,
    gamma: float,
    h_grid,
    workers: int | None = None,
) -> list[SweepRecord]:
    """Field scans at fixed block fraction L = ratio * N, one row per (N, h)."""
    h_grid = [float(h) for h in h_grid]
    if not h_grid:
        raise ValueError("h grid must be nonempty")
    if not spin_counts:
        raise ValueError("spin count list must be nonempty")
    points = []
    for spin_count in spin_counts:
        block_size = int(round(ratio * spin_count))
        if not 1 <= block_size <= spin_count - 1:
            raise ValueError(
                f"ratio {ratio} gives block size {block_size} outside [1, {spin_count - 1}]"
                f" for n={spin_count}"
            )
        points.extend((spin_count, float(gamma), h, block_size) for h in h_grid)
    return _run_grid(points, workers)


def scan_block_sizes(
    spin_count: int,
    gamma: float,
    h: float,
    block_grid,
    workers: int | None = None,
) -> list[SweepRecord]:
    """Entropy versus block size at fixed (N, gamma, h)."""
    block_grid = [int(b) for b in block_grid]
    if not block_grid:
        raise ValueError("block size grid must be nonempty")
    for block_size in block_grid:
        _validate_block(spin_count, block_size)
    points = [(spin_count, float(gamma), float(h), b) for b in block_grid]
    return _run_grid(points, workers)


def scan_gammas(
    spin_count: int,
    block_size: int,
    h: float,
    gamma_grid,
    workers: int | None = None,
) -> list[SweepRecord]:
    """Entropy versus anisotropy at fixed (N, L, h)."""
    gamma_grid = [float(g) for g in gamma_grid]
    if not gamma_grid:
        raise ValueError("gamma grid must be nonempty")
    _validate_block(spin_count, block_size)
    points = [(spin_count, g, float(h), block_size) for g in gamma_grid]
    return _run_grid(points, workers)


def default_iso_block_grid(spin_count: int) -> list[int]:
    """L from ~N/40 up to N/2 in ~N/40 steps (50..1000 for N=2000)."""
    step = max(spin_count // 40, 1)
    return list(range(step, spin_count // 2 + 1, step))


def default_critical_block_grid(spin_count: int) -> list[int]:
    """L from ~N/20 up to N/2 in ~N/20 steps (100..1000 for N=2000)."""
    step = max(spin_count // 20, 1)
    return list(range(step, spin_count // 2 + 1, step))


def _block_log_abscissa(spin_count: int, block_grid) -> np.ndarray:
    return np.array([math.log2(b * (spin_count - b) / spin_count) for b in block_grid])


def _validate_fit_grid(values, label: str) -> None:
    if len(values) < 2:
        raise ValueError(f"{label} needs at least two points, got {len(values)}")
    if len(set(values)) < 2:
        raise ValueError(f"{label} must contain at least two distinct points")


def fit_iso_prefactor(
    spin_count: int,
    block_grid=None,
    h: float = 0.0,
    method: str = "exact",
) -> CoefficientReport:
    """Slope of the isotropic block entropy against log2(L(N-L)/N).

    Uses the closed-form gamma=1 ground state: a single Dicke state whose
    block entropy is the hypergeometric-weight entropy (``method="exact"``)
    or its Gaussian approximation (``method="gaussian"``).
    """
    if not 0.0 <= h < 1.0:
        raise ValueError(f"isotropic scaling fit needs 0 <= h < 1, got h={h}")
    if method not in ("exact", "gaussian"):
        raise ValueError(f"method must be 'exact' or 'gaussian', got {method!r}")
    block_grid = default_iso_block_grid(spin_count) if block_grid is None else [int(b) for b in block_grid]
    _validate_fit_grid(block_grid, "block size grid")
    for block_size in block_grid:
        _validate_block(spin_count, block_size)
    n_up = isotropic_ground_up_count(LmgParams(spin_count, 1.0, h))
    entropy = hypergeometric_entropy if method == "exact" else gaussian_entropy
    ys = np.array([entropy(spin_count, b, n_up) for b in block_grid])
    fit = fit_line(_block_log_abscissa(spin_count, block_grid), ys)
    window = (
        f"L in [{min(block_grid)}, {max(block_grid)}] ({len(block_grid)} sizes), "
        f"N={spin_count}, h={h}, gamma=1, {method} entropy"
    )
    return CoefficientReport("iso_prefactor", fit.slope, window, fit)


def fit_a(
    spin_count: int,
    block_size: int,
    gamma: float,
    h_grid=None,
    workers: int | None = None,
) -> CoefficientReport:
    """Slope of the entropy against -log2|1-h| near the critical field.

    The window must sit strictly on one side of h=1 and keep
    |1-h| >= FIELD_WINDOW_FLOOR; by default it is the h_min..h_max grid
    DEFAULT_A_WINDOW = (0.85, 0.98, 27 points).
    """
    if gamma == 1.0:
        raise ValueError("field-divergence fit applies to gamma != 1 only")
    if h_grid is None:
        h_min, h_max, count = DEFAULT_A_WINDOW
        h_grid = np.linspace(h_min, h_max, count)
    h_grid = [float(h) for h in h_grid]
    _validate_fit_grid(h_grid, "h window")
    if any(abs(1.0 - h) < FIELD_WINDOW_FLOOR for h in h_grid):
        raise ValueError(
            f"h window touches the critical field: need |1-h| >= {FIELD_WINDOW_FLOOR:g}"
        )
    below = [h < 1.0 for h in h_grid]
    if any(below) and not all(below):
        raise ValueError("h window must lie strictly on one side of h=1")
    if any(h < 0.0 for h in h_grid):
        raise ValueError("h window must be nonnegative")
    _validate_block(spin_count, block_size)
    records = _run_grid([(spin_count, gamma, h, block_size) for h in h_grid], workers)
    xs = np.array([-math.log2(abs(1.0 - h)) for h in h_grid])
    fit = fit_line(xs, np.array([r.entropy_bits for r in records]))
    window = (
        f"h in [{min(h_grid)}, {max(h_grid)}] ({len(h_grid)} points), "
        f"N={spin_count}, L={block_size}, gamma={gamma}"
    )
    return CoefficientReport(
        "a", fit.slope, window, fit,
        note="finite-size fit near 1/6; the exact asymptotic coefficient is 1/4",
    )


def fit_b(
    spin_count: int,
    block_grid=None,
    gamma: float = 0.0,
    workers: int | None = None,
) -> CoefficientReport:
    """Critical-point (h=1) slope of the entropy against log2(L(N-L)/N)."""
    if gamma == 1.0:
        raise ValueError(
            "gamma=1 is the isotropic scaling family; use fit_iso_prefactor"
        )
    block_grid = (
        default_critical_block_grid(spin_count) if block_grid is None else [int(b) for b in block_grid]
    )
    _validate_fit_grid(block_grid, "block size grid")
    for block_size in block_grid:
        _validate_block(spin_count, block_size)
    records = _run_grid([(spin_count, float(gamma), 1.0, b) for b in block_grid], workers)
    fit = fit_line(
        _block_log_abscissa(spin_count, block_grid),
        np.array([r.entropy_bits for r in records]),
    )
    window = (
        f"L in [{min(block_grid)}, {max(block_grid)}] ({len(block_grid)} sizes), "
        f"N={spin_count}, h=1, gamma={gamma}"
    )
    return CoefficientReport(
        "b", fit.slope, window, fit,
        note="finite-size fit near 1/3; the exact asymptotic coefficient is 1/2",
    )


def fit_f(
    spin_count: int,
    block_size: int,
    gamma_grid=None,
    workers: int | None = None,
) -> CoefficientReport:
    """Critical-point slope of S(gamma) - S(gamma=0) against log2(1-gamma)."""
    gamma_grid = DEFAULT_F_GAMMA_GRID if gamma_grid is None else gamma_grid
    gamma_grid = [float(g) for g in gamma_grid]
    _validate_fit_grid(gamma_grid, "gamma grid")
    for gamma in gamma_grid:
        if gamma < -1.0 or 1.0 - gamma < GAMMA_WINDOW_FLOOR:
            raise ValueError(
                f"gamma grid must lie in [-1, {1.0 - GAMMA_WINDOW_FLOOR}], got {gamma}"
            )
    _validate_block(spin_count, block_size)
    records = _run_grid([(spin_count, g, 1.0, block_size) for g in gamma_grid], workers)
    baseline = next(
        (r.entropy_bits for r in records if r.gamma == 0.0),
        None,
    )
    if baseline is None:
        baseline = compute_record(spin_count, 0.0, 1.0, block_size).entropy_bits
    xs = np.array([math.log2(1.0 - g) for g in gamma_grid])
    ys = np.array([r.entropy_bits - baseline for r in records])
    fit = fit_line(xs, ys)
    window = (
        f"gamma in [{min(gamma_grid)}, {max(gamma_grid)}] ({len(gamma_grid)} points), "
        f"N={spin_count}, L={block_size}, h=1, baseline gamma=0"
    )
    return CoefficientReport("f", fit.slope, window, fit,
                             note="finite-size fit; the asymptotic coefficient is 1/6")


def _spectrum_worker(point: tuple[int, float, float, int]) -> EntanglementSpectrum:
    spin_count, gamma, h, block_size = point
    try:
        return _ground_spectrum(spin_count, gamma, h, block_size)[1]
    except Exception as exc:
        raise SweepError(
            f"pipeline failed at n={spin_count} gamma={gamma} h={h} l={block_size}: {exc}"
        ) from exc


def majorization_chain(
    spin_count: int,
    block_size: int,
    gamma: float,
    h_sequence,
) -> list[MajorizationStep]:
    """Majorization relation between consecutive field values.

    For ascending fields above the critical point the later spectrum is
    expected to majorize the earlier one (``Y_MAJORIZES_X``); any sequence
    of nonnegative fields is accepted and simply reported step by step.
    """
    h_sequence = [float(h) for h in h_sequence]
    if len(h_sequence) < 2:
        raise ValueError("need at least two fields to compare")
    if any(h < 0.0 for h in h_sequence):
        raise ValueError("fields must be nonnegative")
    _validate_block(spin_count, block_size)
    spectra = [_spectrum_worker((spin_count, gamma, h, block_size)) for h in h_sequence]
    return [
        MajorizationStep(h_sequence[k], h_sequence[k + 1],
                         majorization_compare(spectra[k], spectra[k + 1]))
        for k in range(len(h_sequence) - 1)
    ]
