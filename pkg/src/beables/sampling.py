"""Seeded random instances: Hermitians, states, projections, block algebras."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .algebra import generate
from .linalg import TOL, Tolerance

__all__ = [
    "random_hermitian",
    "random_state",
    "random_unitary",
    "random_projection",
    "random_commuting_pair",
    "random_block_instance",
]


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (G + G.conj().T) / 2


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.array([[np.exp(2j * np.pi * rng.uniform())]])
    return unitary_group.rvs(d, random_state=rng)


def random_projection(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(0, d + 1))
    V = random_unitary(d, rng)[:, :rank]
    return V @ V.conj().T


def random_commuting_pair(d: int, rng: np.random.Generator):
    """Two projections diagonal in a common random basis."""
    U = random_unitary(d, rng)
    a = rng.integers(0, 2, d).astype(float)
    b = rng.integers(0, 2, d).astype(float)
    return U @ np.diag(a) @ U.conj().T, U @ np.diag(b) @ U.conj().T


def random_block_instance(d: int, rng: np.random.Generator, tol: Tolerance = TOL):
    """A random algebra built from compressions of random Hermitians, and a state.

    The space splits as ``C^a ⊕ C^b`` in a random basis.  The first block carries
    a single compressed Hermitian (abelian part), the second one or two (a full
    matrix block when two).  The state is drawn inside the abelian block, on the
    whole space, or as an eigenvector of the first generator, so both verdicts
    occur with reasonable frequency.

    Returns ``(algebra, psi, kind)``.
    """
    U = random_unitary(d, rng)
    a = int(rng.integers(1, d + 1))
    P1 = U[:, :a] @ U[:, :a].conj().T
    P2 = np.eye(d) - P1
    gens = [P1 @ random_hermitian(d, rng) @ P1]
    n_second = int(rng.integers(0, 3)) if a < d else 0
    gens += [P2 @ random_hermitian(d, rng) @ P2 for _ in range(n_second)]
    M = generate(gens, d, tol)
    kind = rng.choice(["abelian_block", "anywhere", "eigvec"])
    if kind == "abelian_block":
        v = U[:, :a] @ (rng.standard_normal(a) + 1j * rng.standard_normal(a))
        psi = v / np.linalg.norm(v)
    elif kind == "eigvec":
        _, V = np.linalg.eigh(gens[-1])
        psi = V[:, int(rng.integers(0, d))]
    else:
        psi = random_state(d, rng)
    return M, psi, str(kind)
