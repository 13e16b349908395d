import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmgent import (
    LmgParams,
    build_hamiltonian,
    eig_dense_symmetric,
    eig_pentadiagonal_all,
    eig_pentadiagonal_ground,
    fit_line,
)

RESIDUAL_RTOL = 1e-9


def random_params(rng):
    return LmgParams(
        int(rng.integers(2, 241)),
        float(rng.uniform(-1.0, 1.0)),
        float(rng.uniform(0.0, 2.5)),
    )


# ---------------------------------------------------------------- dense solver

def test_dense_2x2_swap():
    result = eig_dense_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(result.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_dense_diagonal_sorted():
    result = eig_dense_symmetric(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(result.eigenvalues, [1.0, 2.0, 3.0], atol=1e-14)


def test_dense_random_reconstruction():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((50, 50))
    a = 0.5 * (a + a.T)
    result = eig_dense_symmetric(a)
    v, w = result.eigenvectors, result.eigenvalues
    assert np.all(np.diff(w) >= 0.0)
    assert np.abs((v * w) @ v.T - a).max() < 1e-8
    gram = v.T @ v - np.eye(50)
    assert np.abs(gram).max() < 1e-9
    # eigenvalue sum equals the trace
    assert np.sum(w) == pytest.approx(np.trace(a), rel=1e-8)


def test_dense_rejects_asymmetric():
    with pytest.raises(ValueError):
        eig_dense_symmetric(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ValueError):
        eig_dense_symmetric(np.zeros((2, 3)))


def test_dense_without_vectors():
    result = eig_dense_symmetric(np.diag([2.0, -1.0]), with_vectors=False)
    assert result.eigenvectors is None
    assert np.allclose(result.eigenvalues, [-1.0, 2.0])


# --------------------------------------------------------- pentadiagonal solver

def test_ground_of_diagonal_matrix_is_min_entry():
    ham = build_hamiltonian(LmgParams(30, 1.0, 0.4))
    energy, state = eig_pentadiagonal_ground(ham)
    n_min = int(np.argmin(ham.diagonal))
    assert energy == pytest.approx(float(ham.diagonal.min()), abs=1e-12)
    expected = np.zeros(31)
    expected[n_min] = 1.0
    assert np.allclose(state.coeffs, expected, atol=1e-12)


def test_ground_residual_and_sign_over_random_sample():
    rng = np.random.default_rng(5)
    for _ in range(25):
        params = random_params(rng)
        ham = build_hamiltonian(params)
        energy, state = eig_pentadiagonal_ground(ham)
        residual = np.abs(ham.matvec(state.coeffs) - energy * state.coeffs).max()
        assert residual <= RESIDUAL_RTOL * max(ham.norm_inf(), 1e-300)
        nonzero = np.nonzero(state.coeffs)[0]
        assert state.coeffs[nonzero[0]] > 0.0


@pytest.mark.parametrize("n_spins", [5, 40, 200])
def test_parity_split_matches_dense_spectrum(n_spins):
    ham = build_hamiltonian(LmgParams(n_spins, 0.25, 0.8))
    merged = eig_pentadiagonal_all(ham)
    dense = np.linalg.eigvalsh(ham.to_dense())
    assert np.abs(merged - dense).max() < 1e-9
    # trace identity
    assert merged.sum() == pytest.approx(ham.diagonal.sum(), rel=1e-8)
    energy, _ = eig_pentadiagonal_ground(ham)
    assert energy == pytest.approx(dense[0], abs=1e-9)


def test_exact_parity_tie_prefers_even_block():
    # gamma=0, h=0 has an exactly degenerate parity doublet; the even-n
    # (symmetric cat) member must be returned
    ham = build_hamiltonian(LmgParams(40, 0.0, 0.0))
    _, state = eig_pentadiagonal_ground(ham)
    assert np.abs(state.coeffs[1::2]).max() == 0.0
    assert np.abs(state.coeffs[0::2]).max() > 0.0


# -------------------------------------------------------------------- fit_line

def test_fit_line_exact():
    xs = np.arange(8.0)
    fit = fit_line(xs, 2.0 * xs + 3.0)
    assert fit.slope == pytest.approx(2.0, abs=1e-13)
    assert fit.intercept == pytest.approx(3.0, abs=1e-13)
    assert fit.residual_rms == pytest.approx(0.0, abs=1e-13)
    assert fit.point_count == 8


def test_fit_line_two_points():
    fit = fit_line(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert fit.slope == pytest.approx(1.0)
    assert fit.intercept == pytest.approx(0.0, abs=1e-15)


def test_fit_line_noisy_slope():
    rng = np.random.default_rng(123)
    xs = np.linspace(0.0, 5.0, 50)
    ys = 0.5 * xs + rng.normal(0.0, 0.01, 50)
    fit = fit_line(xs, ys)
    assert abs(fit.slope - 0.5) < 0.02
    assert fit.residual_rms < 0.03


def test_fit_line_degenerate_inputs():
    with pytest.raises(ValueError):
        fit_line(np.array([1.0]), np.array([2.0]))
    with pytest.raises(ValueError):
        fit_line(np.array([1.0, 1.0, 1.0]), np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        fit_line(np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))


@settings(max_examples=60, deadline=None)
@given(
    scale=st.floats(-5.0, 5.0),
    offset=st.floats(-5.0, 5.0),
)
def test_fit_line_affine_equivariance(scale, offset):
    xs = np.linspace(-1.0, 2.0, 9)
    ys = np.array([0.3, -0.1, 0.5, 0.2, 0.9, 1.4, 1.1, 1.7, 2.2])
    base = fit_line(xs, ys)
    moved = fit_line(xs, scale * ys + offset)
    assert moved.slope == pytest.approx(scale * base.slope, abs=1e-12)
    assert moved.intercept == pytest.approx(scale * base.intercept + offset, abs=1e-12)
