"""Internal real numbers and the correspondence with self-adjoint matrices.

An internal real is represented by the spectral resolution of its observable.
Its value on the standard rational ``r`` is the cumulative projection
``F(r) = E(r)``; between consecutive eigenvalues the cut function is constant,
so every infimum over the rationals reduces to a finite meet over eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import dedupe_projections, sasaki_arrow, takeuti_commutator
from .linalg import TOL, DimensionMismatch, SpectralResolution, Tolerance, hermitian_eig, identity, meet, zero

__all__ = [
    "InternalReal",
    "to_internal",
    "from_internal",
    "standard_real",
    "leq_truth",
    "eq_truth",
    "support",
    "com_of_reals",
    "grid",
]


@dataclass(frozen=True)
class InternalReal:
    resolution: SpectralResolution
    label: str | None = None

    @property
    def dim(self) -> int:
        return self.resolution.dim

    def cut(self, r: float) -> np.ndarray:
        """Truth value of ``r ∈ u`` for a standard rational ``r``."""
        return self.resolution.cumulative(r)

    def __repr__(self):
        name = f"{self.label!r}, " if self.label else ""
        return f"InternalReal({name}spectrum={list(np.round(self.resolution.eigenvalues, 12))})"


def to_internal(A, tol: Tolerance = TOL, label: str | None = None) -> InternalReal:
    return InternalReal(hermitian_eig(A, tol), label)


def standard_real(r: float, dim: int, tol: Tolerance = TOL) -> InternalReal:
    """The internal real of the scalar operator ``r·I``."""
    res = SpectralResolution(np.array([float(r)]), (identity(dim),), tol.eig_merge_tol)
    return InternalReal(res, label=f"{r!r}~")


def from_internal(u: InternalReal) -> np.ndarray:
    return u.resolution.reassemble()


def grid(*us: InternalReal) -> np.ndarray:
    """Eigenvalues of all operands plus one point above their maximum."""
    pts = np.unique(np.concatenate([u.resolution.eigenvalues for u in us]))
    return np.append(pts, pts[-1] + 1.0)


def _check(*us):
    if len({u.dim for u in us}) != 1:
        raise DimensionMismatch("internal reals live on different dimensions")


def leq_truth(u: InternalReal, v: InternalReal, tol: Tolerance = TOL) -> np.ndarray:
    """Truth value of ``u <= v``: the meet over r of ``(r ∈ v) -> (r ∈ u)``."""
    _check(u, v)
    out = identity(u.dim)
    for r in grid(u, v):
        out = meet(out, sasaki_arrow(v.cut(r), u.cut(r), tol), tol)
    return out


def eq_truth(u: InternalReal, v: InternalReal, tol: Tolerance = TOL) -> np.ndarray:
    return meet(leq_truth(u, v, tol), leq_truth(v, u, tol), tol)


def support(u: InternalReal) -> list:
    """Distinct values of the cut function, together with 0."""
    return [zero(u.dim)] + u.resolution.cuts()


def com_of_reals(us, tol: Tolerance = TOL, dim: int | None = None) -> np.ndarray:
    us = list(us)
    if not us:
        if dim is None:
            raise ValueError("dimension required for an empty tuple")
        return identity(dim)
    _check(*us)
    projs = dedupe_projections([P for u in us for P in support(u)], tol)
    return takeuti_commutator(projs, us[0].dim, tol)
