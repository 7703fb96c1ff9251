import numpy as np
import pytest

from vbsneg.oracle import (DenseOperator, OracleTooLarge, apply_hamiltonian, bond_projector,
                           build_state, energy, hamiltonian, oracle_negativity,
                           partial_transpose, reduce, reduced_density)
from vbsneg.vbs import ChainSpec, pbc_normalization


@pytest.mark.parametrize("S", [1, 2, 3])
def test_bond_projectors(S):
    p = 2 * S + 1
    total = np.zeros((p * p, p * p))
    for J in range(2 * S + 1):
        P = bond_projector(S, J)
        assert np.max(np.abs(P @ P - P)) < 1e-12
        assert abs(np.trace(P) - (2 * J + 1)) < 1e-12
        total += P
    assert np.max(np.abs(total - np.eye(p * p))) < 1e-12


@pytest.mark.parametrize("S, L", [(1, 2), (1, 4), (1, 6), (2, 3), (2, 6)])
def test_state_is_annihilated(S, L):
    st = build_state(ChainSpec(S, 0, L - 1, 0, 1, 0))
    assert st.norm2 > 0
    h_psi = apply_hamiltonian(st)
    assert np.linalg.norm(h_psi) / np.sqrt(st.norm2) < 1e-10
    assert abs(energy(st)) < 1e-12


def test_dense_hamiltonian_is_positive_and_matches_local_action():
    spec = ChainSpec(1, 0, 2, 0, 2, 0)
    H = hamiltonian(spec)
    assert np.max(np.abs(H.matrix - H.matrix.T)) < 1e-14
    assert np.min(np.linalg.eigvalsh(H.matrix)) > -1e-12
    st = build_state(spec)
    assert np.linalg.norm(H.matrix @ st.psi.ravel()) < 1e-12
    rng = np.random.default_rng(0)
    st.psi = rng.normal(size=st.psi.shape)
    assert np.allclose(H.matrix @ st.psi.ravel(), apply_hamiltonian(st).ravel(), atol=1e-12)


def test_open_chain_is_annihilated():
    st = build_state(ChainSpec(2, 1, 1, 1, 1, 1, "edges"))
    assert st.roles[0] == st.roles[-1] == "edge"
    assert np.linalg.norm(apply_hamiltonian(st)) < 1e-10


def test_translation_invariance():
    psi = build_state(ChainSpec(1, 0, 3, 0, 2, 0)).psi
    assert np.allclose(psi, np.moveaxis(psi, 0, -1), atol=1e-14)


@pytest.mark.parametrize("S, L", [(1, 3), (2, 4)])
def test_norm_matches_normalization(S, L):
    st = build_state(ChainSpec(S, 0, 1, 0, L - 1, 0))
    assert abs(st.norm2 - float(pbc_normalization(S, L))) < 1e-12


def test_reduce_all_sites_is_pure():
    st = build_state(ChainSpec(1, 0, 2, 0, 2, 0))
    rho = reduce(st)
    assert abs(rho.trace - 1) < 1e-12
    ev = rho.eigenvalues()
    assert np.sum(ev > 1e-12) == 1


def test_compressed_and_full_reductions_agree():
    spec = ChainSpec(1, 1, 2, 1, 2, 1)
    full = reduce(build_state(spec)).eigenvalues()
    small = reduced_density(spec).eigenvalues()
    assert np.max(np.abs(full[-small.size:] - small)) < 1e-12
    assert np.max(np.abs(full[:-small.size])) < 1e-12


def test_partial_transpose_rules():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 6))
    op = DenseOperator(m, (2, 3))
    ta = partial_transpose(op, "A")
    assert np.array_equal(partial_transpose(ta, "A").matrix, m)
    assert np.allclose(ta.matrix.T, partial_transpose(op, "B").matrix)
    assert abs(ta.trace - op.trace) < 1e-12
    with pytest.raises(ValueError):
        partial_transpose(op, "C")
    with pytest.raises(ValueError):
        DenseOperator(m, (2, 2))


def test_product_state_has_positive_partial_transpose():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(3, 3)); a = a @ a.T; a /= np.trace(a)
    b = rng.normal(size=(2, 2)); b = b @ b.T; b /= np.trace(b)
    pt = partial_transpose(DenseOperator(np.kron(a, b), (3, 2)))
    assert np.min(pt.eigenvalues()) > -1e-12


def test_negativity_values():
    assert abs(oracle_negativity(ChainSpec(1, 0, 2, 0, 2, 0)) - 10 / 7) < 1e-10
    assert abs(oracle_negativity(ChainSpec(2, 0, 3, 0, 1, 0)) - 2) < 1e-9
    assert abs(oracle_negativity(ChainSpec(1, 0, 2, 1, 2, 0, "edges"))) < 1e-11


def test_cap_is_enforced():
    with pytest.raises(OracleTooLarge):
        build_state(ChainSpec(2, 0, 6, 0, 6, 0), cap=10 ** 5)
    with pytest.raises(ValueError):
        build_state(ChainSpec(1, 0, 1, 0, 1, 0, "general"))
