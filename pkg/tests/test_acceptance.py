"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; every
tolerance is fixed here, nothing is calibrated at run time.
"""

import json
import math
import time

import numpy as np

from lmgent import (
    MajorizationOrder,
    compute_record,
    gaussian_entropy,
    hypergeometric_entropy,
    majorization_chain,
    reduce_block,
    spectrum_of,
)
from lmgent.cli import main
from lmgent.model import LmgParams, build_hamiltonian
from lmgent.linalg import eig_pentadiagonal_ground
from lmgent.oracle import run_verification

# Entropy bounds that are mathematically exact (1 bit for the ideal cat
# state, log2(L+1) for the maximally mixed block) may be overshot by
# eigensolver roundoff; this slack is 8 orders below every band width.
FLOAT_SLACK = 1e-9


def report(number, title, passed, detail):
    print(f"ACCEPTANCE {number} ({title}): {'PASS' if passed else 'FAIL'} [{detail}]")
    assert passed, f"criterion {number} ({title}): {detail}"


def test_criterion_01_oracle_equivalence():
    start = time.monotonic()
    result = run_verification(12)
    elapsed = time.monotonic() - start
    detail = (
        f"max dev {result.max_deviation:.3e} over {len(result.points)} points, "
        f"{len(result.skipped)} degenerate skipped, {elapsed:.0f}s"
    )
    report(1, "oracle equivalence N<=12", result.max_deviation < 1e-8 and elapsed < 300.0,
           detail)


def run_fit_cli(tmp_path, *argv):
    """Invoke `lmgent fit ...` and return the JSON report it writes."""
    target = tmp_path / "report.json"
    assert main(["fit", *argv, "--json", str(target)]) == 0
    return json.loads(target.read_text())


def test_criterion_02_isotropic_prefactor(tmp_path):
    start = time.monotonic()
    payload = run_fit_cli(tmp_path, "iso", "--n", "2000", "--h", "0",
                          "--l-grid", "50:1000:20")
    elapsed = time.monotonic() - start
    value = payload["fitted_value"]
    report(2, "isotropic prefactor 1/2", 0.45 <= value <= 0.55 and elapsed < 60.0,
           f"`fit iso` slope {value:.4f} in [0.45, 0.55], {elapsed:.1f}s")


def test_criterion_03_isotropic_field_law():
    start = time.monotonic()
    base = compute_record(500, 1.0, 0.0, 125).entropy_bits
    worst = 0.0
    for h in [0.1 * k for k in range(10)]:
        shift = compute_record(500, 1.0, h, 125).entropy_bits - base
        worst = max(worst, abs(shift - 0.5 * math.log2(1.0 - h * h)))
    elapsed = time.monotonic() - start
    report(3, "isotropic field law", worst < 0.1 and elapsed < 60.0,
           f"max deviation {worst:.4f} < 0.1 bits, {elapsed:.1f}s")


def test_criterion_04_anisotropic_critical_scaling(tmp_path):
    start = time.monotonic()
    values = {
        gamma: run_fit_cli(tmp_path, "b", "--n", "2000", "--gamma", str(gamma),
                           "--l-grid", "100:1000:10")["fitted_value"]
        for gamma in (0.0, 0.5)
    }
    elapsed = time.monotonic() - start
    passed = all(0.28 <= v <= 0.40 for v in values.values()) and elapsed < 600.0
    report(4, "critical block scaling b~1/3", passed,
           f"`fit b` gamma=0: {values[0.0]:.4f}, gamma=0.5: {values[0.5]:.4f} "
           f"in [0.28, 0.40], {elapsed:.0f}s")


def test_criterion_05_field_divergence(tmp_path):
    start = time.monotonic()
    payload = run_fit_cli(tmp_path, "a", "--n", "2000", "--l", "1000", "--gamma", "0")
    elapsed = time.monotonic() - start
    value = payload["fitted_value"]  # shipped window [0.85, 0.98]
    report(5, "field divergence a~1/6", 0.12 <= value <= 0.22 and elapsed < 300.0,
           f"`fit a` {value:.4f} in [0.12, 0.22], {elapsed:.0f}s")


def test_criterion_06_anisotropy_law(tmp_path):
    start = time.monotonic()
    payload = run_fit_cli(tmp_path, "f", "--n", "2000", "--l", "500",
                          "--gamma-grid=-1:0.75:8")
    elapsed = time.monotonic() - start
    value = payload["fitted_value"]
    report(6, "anisotropy law f~1/6", 0.12 <= value <= 0.20 and elapsed < 600.0,
           f"`fit f` {value:.4f} in [0.12, 0.20], {elapsed:.0f}s")


def test_criterion_07_limit_values():
    start = time.monotonic()
    s_cat = compute_record(500, 0.0, 0.0, 125).entropy_bits
    s_polarized = compute_record(500, 0.0, 20.0, 125).entropy_bits
    s_iso = [compute_record(500, 1.0, h, 125).entropy_bits for h in (1.0, 1.5)]
    elapsed = time.monotonic() - start
    passed = (
        0.95 <= s_cat <= 1.0 + FLOAT_SLACK
        and s_polarized < 0.01
        and all(s == 0.0 for s in s_iso)
        and elapsed < 60.0
    )
    report(7, "limit values", passed,
           f"S(cat) {s_cat:.6f} in [0.95, 1], S(h=20) {s_polarized:.2e} < 0.01, "
           f"S(iso, h>=1) {s_iso} == 0.0, {elapsed:.1f}s")


def test_criterion_08_bound_and_schmidt_symmetry():
    start = time.monotonic()
    rng = np.random.default_rng(424242)
    worst_symmetry = 0.0
    worst_excess = -math.inf
    for _ in range(200):
        n_spins = int(rng.integers(2, 601))
        gamma = float(rng.uniform(-1.0, 1.0))
        h = float(rng.uniform(0.0, 2.5))
        block = int(rng.integers(1, n_spins))
        _, state = eig_pentadiagonal_ground(
            build_hamiltonian(LmgParams(n_spins, gamma, h))
        )
        s_block = spectrum_of(reduce_block(state, block)).entropy_bits
        s_rest = spectrum_of(reduce_block(state, n_spins - block)).entropy_bits
        worst_symmetry = max(worst_symmetry, abs(s_block - s_rest))
        worst_excess = max(worst_excess, s_block - math.log2(block + 1))
    elapsed = time.monotonic() - start
    passed = worst_symmetry < 1e-8 and worst_excess <= FLOAT_SLACK and elapsed < 300.0
    report(8, "entropy bound and Schmidt symmetry", passed,
           f"max |S(L)-S(N-L)| {worst_symmetry:.2e} < 1e-8, "
           f"max S - log2(L+1) {worst_excess:.2e} <= 0, {elapsed:.0f}s")


def test_criterion_09_majorization_chain():
    start = time.monotonic()
    steps = majorization_chain(400, 100, 0.0, [1.2, 1.4, 1.6, 1.8, 2.0])
    elapsed = time.monotonic() - start
    relations = [s.relation for s in steps]
    passed = all(r is MajorizationOrder.Y_MAJORIZES_X for r in relations) and elapsed < 60.0
    report(9, "majorization chain above h=1", passed,
           f"{[r.value for r in relations]}, {elapsed:.1f}s")


def test_criterion_10_gaussian_convergence():
    start = time.monotonic()
    deviations = [
        abs(gaussian_entropy(n, n // 4, n // 2) - hypergeometric_entropy(n, n // 4, n // 2))
        for n in (100, 400, 1600)
    ]
    elapsed = time.monotonic() - start
    passed = (
        deviations[0] > deviations[1] > deviations[2]
        and deviations[2] < 0.02
        and elapsed < 60.0
    )
    report(10, "Gaussian approximation convergence", passed,
           f"deviations {[f'{d:.5f}' for d in deviations]} strictly decreasing, "
           f"last < 0.02, {elapsed:.1f}s")


def test_criterion_11_worker_determinism(tmp_path):
    start = time.monotonic()
    argv = ["sweep", "--n", "300", "--l", "75", "--gamma-grid", "0,0.5",
            "--h-grid", "0.6,1.0,1.6", "--out"]
    path_serial = tmp_path / "serial.csv"
    path_pool = tmp_path / "pool.csv"
    assert main(argv + [str(path_serial), "--workers", "1"]) == 0
    assert main(argv + [str(path_pool), "--workers", "8"]) == 0
    elapsed = time.monotonic() - start
    identical = path_serial.read_bytes() == path_pool.read_bytes()
    report(11, "worker-count determinism", identical and elapsed < 120.0,
           f"byte-identical CSV across --workers 1 and 8, {elapsed:.1f}s")


def test_plane_surface_qualitative_note():
    # not a numbered criterion: the gamma-h surface is reproduced in shape
    # only (entropy peak close to h=1 for gamma != 1, decay at large h)
    h_grid = [0.5, 0.8, 0.9, 0.95, 1.0, 1.1, 1.5, 2.0]
    entropies = [compute_record(500, 0.0, h, 125).entropy_bits for h in h_grid]
    h_peak = h_grid[int(np.argmax(entropies))]
    assert 0.85 <= h_peak <= 1.1
    assert entropies[-1] < 0.1 < max(entropies)
    assert compute_record(500, 1.0, 1.5, 125).entropy_bits == 0.0
