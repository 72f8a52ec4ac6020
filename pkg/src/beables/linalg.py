"""Dense complex linear algebra with an explicit tolerance policy.

Matrices and projections are plain ``numpy`` arrays.  Every numerical
decision (equality, rank, eigenvalue clustering) goes through a
:class:`Tolerance` so results are reproducible across runs.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Tolerance",
    "default_tolerance",
    "NotHermitian",
    "DimensionMismatch",
    "SpectralResolution",
    "hermitian_eig",
    "is_hermitian",
    "is_projection",
    "as_state",
    "projector_onto",
    "range_basis",
    "meet",
    "join",
    "ortho",
    "proj_leq",
    "proj_equal",
    "identity",
    "zero",
]


class NotHermitian(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every operation.

    eq_tol        Frobenius-norm threshold for matrix equality.
    rank_tol      relative singular-value cutoff for numerical rank.
    eig_merge_tol width used to cluster eigenvalues into one eigenspace.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-9
    eig_merge_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eq_tol", "rank_tol", "eig_merge_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.eq_tol < np.finfo(float).eps:
            raise ValueError("eq_tol below machine epsilon")


def default_tolerance() -> Tolerance:
    """Default policy; ``BEABLE_TOL`` in the environment overrides ``eq_tol``."""
    raw = os.environ.get("BEABLE_TOL")
    if raw:
        return Tolerance(eq_tol=float(raw))
    return Tolerance()


TOL = Tolerance()


def _check_square(X, dim=None):
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {X.shape}")
    if dim is not None and X.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {X.shape[0]}")
    return X


def _same_dim(*mats):
    dims = {np.shape(m)[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"operands have different dimensions {sorted(dims)}")


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def zero(dim: int) -> np.ndarray:
    return np.zeros((dim, dim), dtype=complex)


def is_hermitian(X, tol: Tolerance = TOL) -> bool:
    X = _check_square(X)
    return bool(np.linalg.norm(X - X.conj().T) <= tol.eq_tol)


def is_projection(P, tol: Tolerance = TOL) -> bool:
    P = _check_square(P)
    return is_hermitian(P, tol) and bool(np.linalg.norm(P @ P - P) <= tol.eq_tol)


def as_state(psi, dim=None, tol: Tolerance = TOL) -> np.ndarray:
    """Validate a unit vector and return it as a complex 1-d array."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if dim is not None and psi.shape[0] != dim:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, expected {dim}")
    if abs(np.linalg.norm(psi) - 1.0) > tol.eq_tol:
        raise ValueError("state not unit")
    return psi


@dataclass(frozen=True)
class SpectralResolution:
    """Finite resolution of the identity: distinct eigenvalues with their projections.

    ``cumulative(lam)`` is the right-continuous step function
    ``F(lam) = sum{P_i : lambda_i <= lam}``.  Eigenvalues within ``merge_tol``
    above ``lam`` still count as ``<= lam`` so floating noise never flips a cut.
    """

    eigenvalues: np.ndarray
    projections: tuple
    merge_tol: float = field(default=TOL.eig_merge_tol)

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    def cumulative(self, lam: float) -> np.ndarray:
        F = zero(self.dim)
        for ev, P in zip(self.eigenvalues, self.projections):
            if ev <= lam + self.merge_tol:
                F = F + P
        return F

    def cuts(self) -> list:
        """All distinct values of the cumulative function: F at each eigenvalue."""
        out, F = [], zero(self.dim)
        for P in self.projections:
            F = F + P
            out.append(F)
        return out

    def reassemble(self) -> np.ndarray:
        return sum(ev * P for ev, P in zip(self.eigenvalues, self.projections))


def hermitian_eig(X, tol: Tolerance = TOL) -> SpectralResolution:
    """Spectral resolution of a Hermitian matrix with clustered eigenvalues.

    Eigenvalues are grouped by single linkage: sorted neighbours closer than
    ``tol.eig_merge_tol`` share an eigenspace.  Each cluster reports the mean of
    its members as eigenvalue.
    """
    X = _check_square(X)
    if not is_hermitian(X, tol):
        raise NotHermitian(f"||X - X^dagger|| = {np.linalg.norm(X - X.conj().T):.3e}")
    w, V = np.linalg.eigh((X + X.conj().T) / 2)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= tol.eig_merge_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues = np.array([float(np.mean(w[g])) for g in groups])
    projections = tuple(V[:, g] @ V[:, g].conj().T for g in groups)
    return SpectralResolution(eigenvalues, projections, tol.eig_merge_tol)


def range_basis(M, tol: Tolerance = TOL) -> np.ndarray:
    """Orthonormal columns spanning the column space of ``M``."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    cutoff = tol.rank_tol * max(1.0, s[0] if s.size else 0.0)
    return U[:, s > cutoff]


def projector_onto(vectors, tol: Tolerance = TOL) -> np.ndarray:
    """Orthogonal projection onto the span of the given vectors."""
    vectors = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vectors:
        raise ValueError("projector_onto needs at least one vector")
    if len({v.shape[0] for v in vectors}) != 1:
        raise DimensionMismatch("vectors have different dimensions")
    B = range_basis(np.column_stack(vectors), tol)
    return B @ B.conj().T


def _null_space(M, tol: Tolerance) -> np.ndarray:
    _, s, Vh = np.linalg.svd(M)
    cutoff = tol.rank_tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return Vh[rank:].conj().T


def meet(P, Q, tol: Tolerance = TOL) -> np.ndarray:
    """Projection onto range(P) ∩ range(Q), via the joint kernel of I-P and I-Q."""
    _same_dim(P, Q)
    d = np.shape(P)[0]
    I = identity(d)
    N = _null_space(np.vstack([I - P, I - Q]), tol)
    return N @ N.conj().T


def join(P, Q, tol: Tolerance = TOL) -> np.ndarray:
    """Projection onto range(P) + range(Q)."""
    _same_dim(P, Q)
    B = range_basis(np.hstack([P, Q]), tol)
    return B @ B.conj().T


def ortho(P) -> np.ndarray:
    return identity(np.shape(P)[0]) - P


def proj_leq(P, Q, tol: float = TOL.eq_tol) -> bool:
    """Range containment ``P <= Q``: ``||P - QP|| <= tol``."""
    _same_dim(P, Q)
    return bool(np.linalg.norm(P - Q @ P) <= tol)


def proj_equal(P, Q, tol: float = TOL.eq_tol) -> bool:
    _same_dim(P, Q)
    return bool(np.linalg.norm(np.asarray(P) - np.asarray(Q)) <= tol)
