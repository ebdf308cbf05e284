"""Density-matrix plumbing: tensor products, partial traces, eigenensembles,
Haar unitaries, and the partial-transpose test."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sepmech import (DensityMatrix, PureState, eigen_ensemble, haar_unitary,
                     partial_trace, ppt_is_entangled, tensor_product,
                     werner_state)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_tensor_product_identities():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    out = tensor_product(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert np.array_equal(out, np.diag([0.0, 1.0, 0.0, 0.0]))


def test_tensor_product_flips_basis_state():
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    assert np.allclose(tensor_product(SIGMA_X, SIGMA_X) @ ket00,
                       [0, 0, 0, 1])


def test_partial_trace_singlet_is_maximally_mixed():
    psi = PureState(2, 2, np.array([0, 1, -1, 0]) / np.sqrt(2), normalized=True)
    assert np.allclose(partial_trace(psi, "A"), np.eye(2) / 2, atol=1e-12)
    assert np.allclose(partial_trace(psi, "B"), np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product_state():
    psi = PureState(2, 2, [1, 0, 0, 0], normalized=True)
    assert np.allclose(partial_trace(psi, "A"), np.diag([1.0, 0.0]), atol=1e-12)


def test_partial_trace_werner_reduction():
    for p in (0.0, 0.3, 1.0):
        red = partial_trace(werner_state(p), "A")
        assert np.allclose(red, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_rejects_bad_tag():
    psi = PureState(2, 2, [1, 0, 0, 0], normalized=True)
    with pytest.raises(ValueError):
        partial_trace(psi, "C")


@given(seed=st.integers(0, 10**6), m=st.integers(2, 3), n=st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_partial_trace_schmidt_symmetry(seed, m, n):
    # nonzero spectra of the two reductions of a pure state coincide
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m * n) + 1j * rng.standard_normal(m * n)
    psi = PureState(m, n, v / np.linalg.norm(v), normalized=True)
    ea = np.sort(np.linalg.eigvalsh(partial_trace(psi, "A")))[::-1]
    eb = np.sort(np.linalg.eigvalsh(partial_trace(psi, "B")))[::-1]
    k = min(m, n)
    assert np.allclose(ea[:k], eb[:k], atol=1e-10)


def test_density_matrix_validation():
    skew = np.eye(4, dtype=complex) / 4
    skew[0, 1] = 1e-6
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(2, 2, skew)
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(2, 2, np.eye(4) / 2)
    with pytest.raises(ValueError, match="eigenvalue"):
        DensityMatrix(2, 2, np.diag([1.1, -0.1, 0.0, 0.0]))
    with pytest.raises(ValueError, match="shape|expected"):
        DensityMatrix(2, 2, np.eye(3) / 3)


def test_density_matrix_json_roundtrip(rng, random_density):
    rho = random_density(rng, 2, 3)
    back = DensityMatrix.from_json(rho.to_json())
    assert (back.dimA, back.dimB) == (2, 3)
    assert np.allclose(back.mat, rho.mat, atol=1e-15)


def test_eigen_ensemble_maximally_mixed():
    ens = eigen_ensemble(werner_state(1.0))
    assert ens.rank == 4
    assert np.allclose([v.norm() ** 2 for v in ens.vectors], 0.25, atol=1e-12)


def test_eigen_ensemble_rank_one():
    rho = DensityMatrix(2, 2, np.diag([1.0, 0, 0, 0]))
    ens = eigen_ensemble(rho)
    assert ens.rank == 1
    assert np.allclose(np.abs(ens.vectors[0].amps), [1, 0, 0, 0], atol=1e-12)


def test_eigen_ensemble_werner_half_norms():
    norms = sorted(v.norm() ** 2 for v in eigen_ensemble(werner_state(0.5)).vectors)
    assert np.allclose(norms, [0.125, 0.125, 0.125, 0.625], atol=1e-12)


def test_eigen_ensemble_requires_positive_cutoff():
    with pytest.raises(ValueError):
        eigen_ensemble(werner_state(0.5), cutoff=0.0)


@given(seed=st.integers(0, 10**6), m=st.integers(2, 3), n=st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_eigen_ensemble_reconstruction(seed, m, n):
    rng = np.random.default_rng(seed)
    d = m * n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = DensityMatrix(m, n, g @ g.conj().T / np.trace(g @ g.conj().T).real)
    rec = eigen_ensemble(rho).reconstruct()
    assert np.max(np.abs(rec - rho.mat)) < 1e-10


def test_haar_unitary_is_unitary_and_seeded():
    u = haar_unitary(7, seed=3)
    assert np.max(np.abs(u.conj().T @ u - np.eye(7))) < 1e-12
    assert np.array_equal(u, haar_unitary(7, seed=3))
    assert not np.allclose(u, haar_unitary(7, seed=4))


def test_haar_unitary_d1_is_phase():
    u = haar_unitary(1, seed=0)
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_unitary_first_entry_marginal():
    # mean |U_11|^2 over many draws approaches 1/d
    d, reps = 4, 4000
    rng = np.random.default_rng(11)
    vals = np.array([np.abs(haar_unitary(d, rng)[0, 0]) ** 2 for _ in range(reps)])
    se = vals.std(ddof=1) / np.sqrt(reps)
    assert abs(vals.mean() - 1.0 / d) < 3 * se


def test_ppt_werner_boundary():
    assert ppt_is_entangled(werner_state(0.5))
    assert not ppt_is_entangled(werner_state(0.7))
    rho00 = DensityMatrix(2, 2, np.diag([1.0, 0, 0, 0]))
    assert not ppt_is_entangled(rho00)


def test_ppt_grid_matches_separability_threshold():
    for p in np.arange(0.0, 1.0001, 0.05):
        if abs(p - 2.0 / 3.0) < 1e-9:
            continue
        assert ppt_is_entangled(werner_state(p)) == (p < 2.0 / 3.0)


def test_ppt_large_dims_need_flag(rng, random_density):
    rho = random_density(rng, 3, 3)
    with pytest.raises(ValueError):
        ppt_is_entangled(rho)
    # with the flag a negative partial transpose is still conclusive evidence
    assert ppt_is_entangled(rho, allow_inconclusive=True) in (True, False)
