"""Finite-dimensional von Neumann algebras as concrete matrix *-algebras.

An :class:`OperatorAlgebra` is stored as an orthonormal basis (trace inner
product ``<A, B> = tr(A^dagger B)``) of its linear span.  Membership, equality
and conjugation are then plain span tests.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .linalg import TOL, DimensionMismatch, Tolerance, hermitian_eig, identity

__all__ = [
    "OperatorAlgebra",
    "BlockMismatch",
    "generate",
    "commutant",
    "center",
    "minimal_central_projections",
    "minimal_projections_abelian",
    "contains",
    "block_direct_sum",
    "algebras_equal",
    "hermitian_basis",
    "full_algebra",
    "scalars",
]


class BlockMismatch(ValueError):
    pass


def _vec(mats) -> np.ndarray:
    mats = np.asarray(mats, dtype=complex)
    return mats.reshape(mats.shape[0], -1)


def _extend_basis(basis: np.ndarray, candidates: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Append to the orthonormal rows ``basis`` whatever part of ``candidates`` is new.

    Rows are vectorized matrices.  Candidates are normalized first so the rank
    cutoff is relative.
    """
    if candidates.shape[0] == 0:
        return basis
    norms = np.linalg.norm(candidates, axis=1)
    candidates = candidates[norms > tol.rank_tol]
    if candidates.shape[0] == 0:
        return basis
    R = candidates / np.linalg.norm(candidates, axis=1, keepdims=True)
    # two Gram-Schmidt passes keep the basis orthonormal to working precision
    for _ in range(2):
        if basis.shape[0]:
            R = R - (R @ basis.conj().T) @ basis
    _, s, Vh = np.linalg.svd(R, full_matrices=False)
    new = Vh[s > np.sqrt(tol.rank_tol)]
    if new.shape[0] == 0:
        return basis
    if basis.shape[0]:
        new = new - (new @ basis.conj().T) @ basis
        q, _ = np.linalg.qr(new.T)
        new = q.T
    return np.vstack([basis, new]) if basis.shape[0] else new


def _orthonormal_span(mats, dim: int, tol: Tolerance) -> np.ndarray:
    empty = np.zeros((0, dim * dim), dtype=complex)
    if len(mats) == 0:
        return empty
    return _extend_basis(empty, _vec(mats), tol)


def _null_vectors(M: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal columns spanning the kernel of ``M``."""
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, Vh = np.linalg.svd(M)
    cutoff = tol.rank_tol * max(1.0, s[0])
    rank = int(np.sum(s > cutoff))
    return Vh[rank:].conj().T


class OperatorAlgebra:
    """A unital *-subalgebra of ``L(C^dim)``.

    ``basis`` has shape ``(k, dim, dim)`` and is orthonormal in the trace inner
    product.  ``generators`` records the matrices the algebra was built from,
    when known; it is used only to report readable witnesses.
    """

    def __init__(self, dim: int, basis, tol: Tolerance = TOL, generators=()):
        self.dim = int(dim)
        basis = np.asarray(basis, dtype=complex)
        self._rows = basis.reshape(basis.shape[0], self.dim * self.dim)
        self.tol = tol
        self.generators = tuple(np.asarray(g, dtype=complex) for g in generators)

    @classmethod
    def from_span(cls, mats, dim: int, tol: Tolerance = TOL, generators=()):
        rows = _orthonormal_span(list(mats), dim, tol)
        return cls(dim, rows.reshape(-1, dim, dim), tol, generators)

    @property
    def basis(self) -> np.ndarray:
        return self._rows.reshape(-1, self.dim, self.dim)

    @property
    def linear_dim(self) -> int:
        return self._rows.shape[0]

    def __len__(self):
        return self.linear_dim

    def __repr__(self):
        return f"OperatorAlgebra(dim={self.dim}, linear_dim={self.linear_dim})"

    def residual(self, X) -> float:
        x = np.asarray(X, dtype=complex).reshape(-1)
        if self.linear_dim == 0:
            return float(np.linalg.norm(x))
        return float(np.linalg.norm(x - (self._rows.conj() @ x) @ self._rows))

    def contains(self, X) -> bool:
        X = np.asarray(X, dtype=complex)
        if X.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"matrix shape {X.shape} vs algebra dim {self.dim}")
        return bool(self.residual(X) <= self.tol.eq_tol * max(1.0, np.linalg.norm(X)))

    def conjugate(self, U) -> "OperatorAlgebra":
        """The algebra ``U^dagger M U``."""
        U = np.asarray(U, dtype=complex)
        basis = U.conj().T @ self.basis @ U
        return OperatorAlgebra(self.dim, basis, self.tol)

    def hermitian_basis(self) -> np.ndarray:
        return hermitian_basis(self)

    def is_valid(self) -> bool:
        """Check *-closure, product closure, unit, and the bicommutant identity."""
        B = self.basis
        if not self.contains(identity(self.dim)):
            return False
        if not all(self.contains(X.conj().T) for X in B):
            return False
        for X in B:
            for Y in B:
                if not self.contains(X @ Y):
                    return False
        return algebras_equal(self.commutant.commutant, self)

    @cached_property
    def commutant(self) -> "OperatorAlgebra":
        return commutant(self)

    @cached_property
    def center(self) -> "OperatorAlgebra":
        return center(self)

    @cached_property
    def central_atoms(self) -> list:
        return minimal_central_projections(self)


def scalars(dim: int, tol: Tolerance = TOL) -> OperatorAlgebra:
    return OperatorAlgebra.from_span([identity(dim)], dim, tol)


def full_algebra(dim: int, tol: Tolerance = TOL) -> OperatorAlgebra:
    return OperatorAlgebra(dim, np.eye(dim * dim, dtype=complex).reshape(-1, dim, dim), tol)


def generate(gens, dim: int, tol: Tolerance = TOL) -> OperatorAlgebra:
    """Smallest unital *-algebra containing ``gens``.

    Starts from span{I, g, g^dagger} and multiplies the current span on the
    right by the generators until the dimension stops growing.
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    for g in gens:
        if g.shape != (dim, dim):
            raise DimensionMismatch(f"generator shape {g.shape}, expected {(dim, dim)}")
    seed = [identity(dim)] + gens + [g.conj().T for g in gens]
    G = _orthonormal_span(seed, dim, tol)
    Gm = G.reshape(-1, dim, dim)
    rows = G
    while True:
        cur = rows.reshape(-1, dim, dim)
        prods = np.einsum("aij,bjk->abik", cur, Gm).reshape(-1, dim * dim)
        grown = _extend_basis(rows, prods, tol)
        if grown.shape[0] == rows.shape[0]:
            break
        rows = grown
    return OperatorAlgebra(dim, rows.reshape(-1, dim, dim), tol, generators=gens)


def _commutator_map(mats: np.ndarray, dim: int) -> np.ndarray:
    """Stacked matrix of ``vec(B) -> vec(A_i B - B A_i)`` over the given ``A_i``."""
    I = np.eye(dim)
    blocks = [np.kron(A, I) - np.kron(I, A.T) for A in mats]
    if not blocks:
        return np.zeros((0, dim * dim), dtype=complex)
    return np.vstack(blocks)


def commutant(M: OperatorAlgebra) -> OperatorAlgebra:
    """All matrices commuting with every basis element of ``M``."""
    d = M.dim
    N = _null_vectors(_commutator_map(M.basis, d), M.tol)
    rows = _orthonormal_span(N.T.reshape(-1, d, d), d, M.tol)
    return OperatorAlgebra(d, rows.reshape(-1, d, d), M.tol)


def center(M: OperatorAlgebra) -> OperatorAlgebra:
    """``M ∩ M'``: combinations sum_j c_j b_j commuting with every b_i."""
    d, B = M.dim, M.basis
    cols = []
    for Bj in B:
        cols.append(np.concatenate([(Bj @ Bi - Bi @ Bj).reshape(-1) for Bi in B]))
    C = _null_vectors(np.column_stack(cols), M.tol)
    elems = np.einsum("jc,jik->cik", C, B)
    return OperatorAlgebra.from_span(elems, d, M.tol)


def _hermitian_span(mats, dim: int, cutoff: float) -> np.ndarray:
    """Real-orthonormal Hermitian basis for the Hermitian and skew parts of ``mats``.

    Directions with singular value at most ``cutoff * max(1, s0)`` are dropped.
    """
    mats = np.asarray(mats, dtype=complex).reshape(-1, dim, dim)
    if not len(mats):
        return np.zeros((0, dim, dim), dtype=complex)
    herm = np.concatenate([(mats + mats.conj().transpose(0, 2, 1)) / 2,
                           (mats - mats.conj().transpose(0, 2, 1)) / 2j])
    # Hermitian d x d matrices embed isometrically in R^{2 d^2}
    real_rows = np.concatenate([herm.real.reshape(len(herm), -1),
                                herm.imag.reshape(len(herm), -1)], axis=1)
    _, s, Vh = np.linalg.svd(real_rows, full_matrices=False)
    Vh = Vh[s > cutoff * max(1.0, s[0])]
    half = dim * dim
    out = (Vh[:, :half] + 1j * Vh[:, half:]).reshape(-1, dim, dim)
    return (out + out.conj().transpose(0, 2, 1)) / 2


def hermitian_basis(M: OperatorAlgebra) -> np.ndarray:
    """Real-orthonormal Hermitian matrices spanning the self-adjoint part of ``M``."""
    return _hermitian_span(M.basis, M.dim, M.tol.rank_tol)


def minimal_projections_abelian(mats, dim: int, tol: Tolerance = TOL, seed: int = 0) -> list:
    """Minimal projections of the abelian *-algebra generated by commuting ``mats``.

    Takes the spectral projections of a random real combination of the
    Hermitian parts, then verifies every generator acts as a scalar on each
    projection; on an accidental degeneracy it retries with a new seed.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    # an orthonormal span keeps rounding noise in near-dependent inputs from being amplified
    herm = list(_hermitian_span(mats, dim, np.sqrt(tol.rank_tol)))
    if not herm:
        return [identity(dim)]
    for attempt in range(8):
        rng = np.random.default_rng(seed + attempt)
        H = sum(c * h for c, h in zip(rng.uniform(0.5, 1.5, len(herm)), herm))
        projs = list(hermitian_eig(H, Tolerance(tol.eq_tol, tol.rank_tol, 1e-6)).projections)
        if all(_acts_as_scalar(h, P, tol) for P in projs for h in herm):
            return projs
    raise RuntimeError("could not separate minimal projections; inputs may not commute")


def _acts_as_scalar(X, P, tol: Tolerance) -> bool:
    r = np.trace(P).real
    c = np.trace(X @ P) / r
    scale = max(1.0, np.linalg.norm(X))
    return (np.linalg.norm(X @ P - c * P) <= 1e3 * tol.eq_tol * scale
            and np.linalg.norm(P @ X - c * P) <= 1e3 * tol.eq_tol * scale)


def minimal_central_projections(M: OperatorAlgebra) -> list:
    """Atoms of the center: pairwise orthogonal, summing to I, one per central block."""
    Z = M.center
    atoms = minimal_projections_abelian(list(Z.basis), M.dim, M.tol)
    if len(atoms) != Z.linear_dim:
        raise RuntimeError(f"found {len(atoms)} central atoms for a {Z.linear_dim}-dim center")
    return atoms


def contains(M: OperatorAlgebra, X) -> bool:
    return M.contains(X)


def algebras_equal(M: OperatorAlgebra, N: OperatorAlgebra) -> bool:
    if M.dim != N.dim:
        raise DimensionMismatch(f"algebras act on dimensions {M.dim} and {N.dim}")
    if M.linear_dim != N.linear_dim:
        return False
    return all(M.contains(X) for X in N.basis) and all(N.contains(X) for X in M.basis)


def block_direct_sum(P, on_block: OperatorAlgebra, full_on_complement: bool = True) -> OperatorAlgebra:
    """The algebra ``on_block·P ⊕ L(P⊥H)`` (or ``on_block·P ⊕ C·P⊥``).

    Every element of ``on_block`` must commute with ``P``.
    """
    P = np.asarray(P, dtype=complex)
    d, tol = on_block.dim, on_block.tol
    if P.shape != (d, d):
        raise DimensionMismatch(f"projection shape {P.shape} vs algebra dim {d}")
    for X in on_block.basis:
        if np.linalg.norm(X @ P - P @ X) > tol.eq_tol * max(1.0, np.linalg.norm(X)):
            raise BlockMismatch("algebra element does not commute with the block projection")
    Pc = identity(d) - P
    mats = [X @ P for X in on_block.basis]
    if full_on_complement:
        w, V = np.linalg.eigh((Pc + Pc.conj().T) / 2)
        W = V[:, w > 0.5]
        mats += [np.outer(W[:, a], W[:, b].conj()) for a in range(W.shape[1]) for b in range(W.shape[1])]
    else:
        mats.append(Pc)
    return OperatorAlgebra.from_span(mats, d, tol)
