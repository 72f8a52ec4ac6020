"""The projection lattice as a quantum logic: Sasaki operations and commutators."""
from __future__ import annotations

import numpy as np

from .algebra import _orthonormal_span, generate
from .linalg import TOL, DimensionMismatch, Tolerance, join, meet, ortho

__all__ = [
    "sasaki_arrow",
    "sasaki_product",
    "commutes",
    "takeuti_commutator",
    "two_projection_commutator_oracle",
    "dedupe_projections",
]


def sasaki_arrow(P, Q, tol: Tolerance = TOL) -> np.ndarray:
    """``P -> Q = P⊥ ∨ (P ∧ Q)``."""
    return join(ortho(P), meet(P, Q, tol), tol)


def sasaki_product(P, Q, tol: Tolerance = TOL) -> np.ndarray:
    """``P * Q = P ∧ (P⊥ ∨ Q)``, the Sasaki projection of Q onto P."""
    return meet(P, join(ortho(P), Q, tol), tol)


def commutes(P, Q, tol: Tolerance = TOL) -> bool:
    if np.shape(P) != np.shape(Q):
        raise DimensionMismatch(f"shapes {np.shape(P)} and {np.shape(Q)}")
    return bool(np.linalg.norm(P @ Q - Q @ P) <= tol.eq_tol)


def two_projection_commutator_oracle(P, Q, tol: Tolerance = TOL) -> np.ndarray:
    """Closed form ``(P∧Q) ∨ (P∧Q⊥) ∨ (P⊥∧Q) ∨ (P⊥∧Q⊥)`` for a pair."""
    if np.shape(P) != np.shape(Q):
        raise DimensionMismatch(f"shapes {np.shape(P)} and {np.shape(Q)}")
    Pc, Qc = ortho(P), ortho(Q)
    out = meet(P, Q, tol)
    for a, b in ((P, Qc), (Pc, Q), (Pc, Qc)):
        out = join(out, meet(a, b, tol), tol)
    return out


def dedupe_projections(projs, tol: Tolerance = TOL) -> list:
    out = []
    for P in projs:
        if not any(np.linalg.norm(P - R) <= tol.eq_tol for R in out):
            out.append(P)
    return out


def _pairwise_commuting(mats: np.ndarray, dim: int, tol: Tolerance) -> bool:
    # bilinearity: the span commutes iff an orthonormal basis of it does
    B = _orthonormal_span(mats, dim, tol).reshape(-1, dim, dim)
    if len(B) < 2:
        return True
    C = np.einsum("aij,bjk->abik", B, B)
    return bool(np.max(np.abs(C - C.transpose(1, 0, 2, 3))) <= tol.eq_tol)


def takeuti_commutator(S, dim: int | None = None, tol: Tolerance = TOL) -> np.ndarray:
    """Largest central projection of ``W*(S)`` on which all members of ``S`` commute.

    The central atoms ``z_k`` of the generated algebra are tested one by one:
    ``z_k`` is kept when ``[P, Q] z_k = 0`` for all ``P, Q`` in ``S``.
    An empty ``S`` gives the identity.
    """
    S = [np.asarray(P, dtype=complex) for P in S]
    if dim is None:
        if not S:
            raise ValueError("dimension required for an empty projection set")
        dim = S[0].shape[0]
    for P in S:
        if P.shape != (dim, dim):
            raise DimensionMismatch(f"projection shape {P.shape}, expected {(dim, dim)}")
    S = dedupe_projections(S, tol)
    N = generate(S, dim, tol)
    out = np.zeros((dim, dim), dtype=complex)
    stack = np.asarray(S) if S else np.zeros((0, dim, dim), dtype=complex)
    for z in N.central_atoms:
        if _pairwise_commuting(stack @ z, dim, tol):
            out = out + z
    return out
