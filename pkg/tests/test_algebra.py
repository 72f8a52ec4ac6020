import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from beables.algebra import (
    BlockMismatch,
    OperatorAlgebra,
    algebras_equal,
    block_direct_sum,
    commutant,
    full_algebra,
    generate,
    minimal_central_projections,
    scalars,
)
from beables.beable import MeasurementContext, cyclic_subspace, maximal_beable
from beables.linalg import DimensionMismatch, is_projection
from beables.sampling import random_hermitian, random_unitary

from conftest import I2, SINGLET, SX, SY, SZ, UP_Z, DOWN_Z, kron

seeds = st.integers(0, 2**32 - 1)


def brute_force_span_dim(gens, d, max_len=6):
    """Dimension of span of all words of length <= max_len in gens and their adjoints."""
    letters = [np.asarray(g, complex) for g in gens] + [np.asarray(g, complex).conj().T for g in gens]
    words = [np.eye(d, dtype=complex)]
    frontier = list(words)
    for _ in range(max_len):
        frontier = [w @ l for w in frontier for l in letters]
        words += frontier
        # prune frontier to a spanning subset to keep the enumeration small
        stack = np.array([w.reshape(-1) for w in frontier])
        if stack.size == 0:
            break
        _, s, Vh = np.linalg.svd(stack, full_matrices=False)
        frontier = [v.reshape(d, d) for v in Vh[s > 1e-9 * s[0]]]
    return np.linalg.matrix_rank(np.array([w.reshape(-1) for w in words]), tol=1e-8)


def block_algebra(blocks, rng):
    """Conjugated ⊕_k M_{n_k} ⊗ I_{m_k}; returns (algebra, dim M, dim M', U)."""
    d = sum(n * m for n, m in blocks)
    U = random_unitary(d, rng)
    gens, off = [], 0
    for n, m in blocks:
        H = random_hermitian(n, rng) if n > 1 else np.array([[1.0]])
        K = random_hermitian(n, rng) if n > 1 else np.array([[1.0]])
        for X in (H, K):
            G = np.zeros((d, d), complex)
            G[off:off + n * m, off:off + n * m] = np.kron(X, np.eye(m))
            gens.append(U @ G @ U.conj().T)
        off += n * m
    dim_M = sum(n * n for n, _ in blocks)
    dim_Mp = sum(m * m for _, m in blocks)
    return generate(gens, d), dim_M, dim_Mp, U


def test_generate_examples():
    W = generate([SZ], 2)
    assert W.linear_dim == 2
    assert algebras_equal(W, OperatorAlgebra.from_span([UP_Z, DOWN_Z], 2))
    assert generate([], 2).linear_dim == 1
    D = generate([kron(SZ, I2), kron(I2, SZ)], 4)
    assert D.linear_dim == 4 == brute_force_span_dim([kron(SZ, I2), kron(I2, SZ)], 4)
    assert all(np.allclose(X, np.diag(np.diag(X))) for X in D.basis)


@given(seeds, st.integers(2, 5), st.integers(1, 2))
def test_generate_matches_brute_force_closure(seed, d, k):
    rng = np.random.default_rng(seed)
    P = np.diag(rng.integers(0, 2, d)).astype(complex)
    gens = [P @ random_hermitian(d, rng) @ P for _ in range(k)]
    assert generate(gens, d).linear_dim == brute_force_span_dim(gens, d, max_len=2 * d)


def test_generate_rejects_wrong_shape():
    with pytest.raises(DimensionMismatch):
        generate([np.eye(3)], 2)


def test_commutant_examples():
    assert commutant(scalars(2)).linear_dim == 4
    assert commutant(full_algebra(2)).linear_dim == 1
    D = generate([SZ], 2)
    assert algebras_equal(commutant(D), D)


def test_center_examples():
    Z = full_algebra(2).center
    assert Z.linear_dim == 1
    atoms = minimal_central_projections(full_algebra(2))
    assert len(atoms) == 1 and np.allclose(atoms[0], I2)

    D = generate([SZ], 2)
    assert algebras_equal(D.center, D)
    atoms = sorted(D.central_atoms, key=lambda P: P[0, 0].real)
    np.testing.assert_allclose(atoms[0], DOWN_Z, atol=1e-10)
    np.testing.assert_allclose(atoms[1], UP_Z, atol=1e-10)

    T = generate([kron(SZ, I2), kron(I2, SX)], 4)
    assert T.center.linear_dim == 4
    assert [round(np.trace(P).real) for P in T.central_atoms] == [1, 1, 1, 1]


def test_contains_examples():
    W = generate([SZ], 2)
    assert W.contains(SZ)
    assert not W.contains(SX)
    ctx = MeasurementContext(SINGLET, kron(SZ, I2))
    assert maximal_beable(ctx).contains(kron(I2, SZ))
    with pytest.raises(DimensionMismatch):
        W.contains(np.eye(3))


def test_algebras_equal_examples():
    W = generate([SZ], 2)
    assert algebras_equal(W, W)
    assert algebras_equal(W, generate([-SZ], 2))
    assert not algebras_equal(W, generate([SX], 2))
    with pytest.raises(DimensionMismatch):
        algebras_equal(W, scalars(3))


def test_block_direct_sum_examples():
    W = generate([SZ], 2)
    assert algebras_equal(block_direct_sum(I2, W), W)
    assert algebras_equal(block_direct_sum(np.zeros((2, 2)), W), full_algebra(2))
    ctx = MeasurementContext(SINGLET, kron(SZ, I2))
    P = cyclic_subspace(ctx)
    B = block_direct_sum(P, generate([ctx.A], 4))
    assert B.linear_dim == 6
    assert B.is_valid()
    with pytest.raises(BlockMismatch):
        block_direct_sum(UP_Z, generate([SX], 2))


@pytest.mark.parametrize("blocks", [[(1, 1), (2, 1)], [(2, 2)], [(1, 2), (1, 1), (2, 1)], [(1, 1)] * 4, [(3, 1), (1, 2)]])
def test_block_algebra_dimension_counts(blocks):
    M, dim_M, dim_Mp, _ = block_algebra(blocks, np.random.default_rng(len(blocks)))
    assert M.linear_dim == dim_M
    assert M.commutant.linear_dim == dim_Mp
    assert len(M.central_atoms) == len(blocks)
    assert M.is_valid()


@given(seeds)
def test_double_commutant_and_central_atoms(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 6))
    P = np.diag(rng.integers(0, 2, d)).astype(complex)
    gens = [P @ random_hermitian(d, rng) @ P, (np.eye(d) - P) @ random_hermitian(d, rng) @ (np.eye(d) - P)]
    M = generate(gens, d)
    assert algebras_equal(M.commutant.commutant, M)
    atoms = M.central_atoms
    assert np.allclose(sum(atoms), np.eye(d), atol=1e-9)
    for a, b in itertools.combinations(atoms, 2):
        assert np.linalg.norm(a @ b) < 1e-9
    for z in atoms:
        assert is_projection(z) and M.contains(z) and M.commutant.contains(z)
    assert algebras_equal(generate(list(M.basis), d), M)


@given(seeds)
def test_commutant_reverses_inclusion(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 6))
    H1, H2 = random_hermitian(d, rng), random_hermitian(d, rng)
    M = generate([H1 @ H1], d)
    N = generate([H1 @ H1, H2], d)
    assert all(N.contains(X) for X in M.basis)
    assert all(M.commutant.contains(X) for X in N.commutant.basis)


def test_pauli_generate_full():
    assert generate([SX, SY], 2).linear_dim == 4
    assert generate([SX, SY, SZ], 2).center.linear_dim == 1
