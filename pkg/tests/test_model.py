import numpy as np
import pytest

from lmgent import (
    LmgParams,
    PentadiagonalSymmetric,
    build_hamiltonian,
    isotropic_ground_energy,
    isotropic_ground_m,
    isotropic_ground_up_count,
)


def test_params_validation():
    with pytest.raises(ValueError):
        LmgParams(0, 0.0, 0.0)
    with pytest.raises(ValueError):
        LmgParams(10, float("nan"), 0.0)
    with pytest.raises(ValueError):
        LmgParams(10, 0.0, float("inf"))
    with pytest.raises(ValueError):
        LmgParams(10, 0.0, 0.0, coupling=0.0)
    with pytest.raises(ValueError):
        LmgParams(10, 0.0, 0.0, coupling=-1.0)


def test_band_shapes():
    ham = build_hamiltonian(LmgParams(6, 0.3, 0.7))
    assert ham.dimension == 7
    assert ham.diagonal.shape == (7,)
    assert ham.second_superdiagonal.shape == (5,)
    # N=1 has no n -> n+2 coupling at all
    tiny = build_hamiltonian(LmgParams(1, 0.0, 1.0))
    assert tiny.second_superdiagonal.size == 0


def test_dense_expansion_is_symmetric_with_empty_first_offdiagonal():
    ham = build_hamiltonian(LmgParams(8, -0.4, 1.2))
    dense = ham.to_dense()
    assert np.array_equal(dense, dense.T)
    # J+J+ changes M by 2, so no single-step coupling exists anywhere
    assert np.all(np.diag(dense, 1) == 0.0)


@pytest.mark.parametrize("h", [0.0, 0.7, 1.3])
def test_isotropic_diagonal_matches_closed_form_n2(h):
    # at gamma=1 the N=2 diagonal is M^2 - 1 - 2hM and couplings vanish
    ham = build_hamiltonian(LmgParams(2, 1.0, h))
    m = np.array([-1.0, 0.0, 1.0])
    assert np.allclose(ham.diagonal, m**2 - 1.0 - 2.0 * h * m, atol=1e-14)
    assert np.allclose(ham.second_superdiagonal, 0.0)


def test_matvec_agrees_with_dense():
    rng = np.random.default_rng(3)
    ham = build_hamiltonian(LmgParams(9, 0.2, 0.9))
    vec = rng.standard_normal(10)
    assert np.allclose(ham.matvec(vec), ham.to_dense() @ vec, atol=1e-12)


def test_norm_inf_matches_dense():
    ham = build_hamiltonian(LmgParams(11, -0.7, 0.4))
    dense = ham.to_dense()
    assert ham.norm_inf() == pytest.approx(np.abs(dense).sum(axis=1).max(), abs=1e-12)


def test_spectrum_even_in_field():
    # reversing the basis n -> N-n maps H(h) onto H(-h) entry by entry
    for n_spins, gamma, h in [(7, 0.3, 0.8), (12, -0.5, 1.4), (20, 0.0, 0.25)]:
        plus = build_hamiltonian(LmgParams(n_spins, gamma, h))
        minus = build_hamiltonian(LmgParams(n_spins, gamma, -h))
        assert np.allclose(plus.diagonal[::-1], minus.diagonal, atol=1e-12)
        assert np.allclose(plus.second_superdiagonal[::-1], minus.second_superdiagonal,
                           atol=1e-12)
        w_plus = np.linalg.eigvalsh(plus.to_dense())
        w_minus = np.linalg.eigvalsh(minus.to_dense())
        assert np.allclose(w_plus, w_minus, atol=1e-9)


def test_isotropic_ground_m_branches():
    assert isotropic_ground_m(LmgParams(40, 1.0, 0.0)) == 0
    assert isotropic_ground_m(LmgParams(40, 1.0, 1.7)) == 20  # N/2 for h >= 1
    assert isotropic_ground_m(LmgParams(100, 1.0, 0.5)) == 25
    with pytest.raises(ValueError):
        isotropic_ground_m(LmgParams(40, 0.5, 0.0))
    with pytest.raises(ValueError):
        isotropic_ground_m(LmgParams(40, 1.0, -0.1))


def test_isotropic_half_integer_tie_rounds_away_and_is_degenerate():
    # N=2, h=0.5 puts hN/2 exactly at 0.5; rounding away from zero gives M=1
    # and the two adjacent Dicke states share the ground energy.
    params = LmgParams(2, 1.0, 0.5)
    m = isotropic_ground_m(params)
    assert m == 1
    assert isotropic_ground_energy(params, 0.0) == pytest.approx(
        isotropic_ground_energy(params, 1.0), abs=1e-14
    )


def test_isotropic_ground_energy_values():
    assert isotropic_ground_energy(LmgParams(2, 1.0, 0.0), 0.0) == pytest.approx(-1.0)
    for h in (1.0, 1.3, 2.0):
        params = LmgParams(100, 1.0, h)
        m = isotropic_ground_m(params)
        assert m == 50
        assert isotropic_ground_energy(params, m) == pytest.approx(-100.0 * h, abs=1e-12)


def test_isotropic_energy_is_min_diagonal_entry():
    # gamma=1 matrix is diagonal; its minimum must sit at n = M + N/2
    for n_spins, h in [(500, 0.3), (501, 0.42), (64, 0.9)]:
        params = LmgParams(n_spins, 1.0, h)
        ham = build_hamiltonian(params)
        assert np.allclose(ham.second_superdiagonal, 0.0)
        m = isotropic_ground_m(params)
        energy = isotropic_ground_energy(params, m)
        assert energy == pytest.approx(float(ham.diagonal.min()), abs=1e-9)
        assert int(np.argmin(ham.diagonal)) == isotropic_ground_up_count(params)


def test_isotropic_energy_respects_coupling():
    # with lam != 1 the parabola minimum shifts to M = hN/(2 lam)
    params = LmgParams(200, 1.0, 0.5, coupling=2.0)
    ham = build_hamiltonian(params)
    m = isotropic_ground_m(params)
    assert m == 25  # hN/(2 lam) = 25
    assert isotropic_ground_energy(params, m) == pytest.approx(
        float(ham.diagonal.min()), abs=1e-9
    )


def test_pentadiagonal_validation():
    with pytest.raises(ValueError):
        PentadiagonalSymmetric(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        PentadiagonalSymmetric(np.array([1.0, np.inf, 3.0]), np.array([1.0]))
