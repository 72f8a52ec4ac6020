"""Beable subalgebras for a state and the maximal definable one for a context.

An algebra ``M`` is beable for ``psi`` when the expectation functional of
``psi`` is a mixture of dispersion-free states of ``M``.  At finite dimension
this is decided by the commutator test ``[X, Y] psi = 0`` over a basis, and the
mixture is then built explicitly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .algebra import (
    OperatorAlgebra,
    algebras_equal,
    block_direct_sum,
    generate,
    hermitian_basis,
    minimal_projections_abelian,
)
from .linalg import TOL, DimensionMismatch, Tolerance, as_state, hermitian_eig, is_hermitian, projector_onto, range_basis
from .reals import com_of_reals, to_internal

__all__ = [
    "MeasurementContext",
    "DispersionFreeState",
    "IgnoranceMeasure",
    "BeableReport",
    "DefinabilityReport",
    "NotBeable",
    "SeedRequired",
    "is_beable",
    "construct_ignorance_measure",
    "com_bound_check",
    "commutator_bound",
    "cyclic_subspace",
    "maximal_beable",
    "sample_context_unitary",
    "definability_test",
    "a_priv_check",
    "bilateral_z_rotation",
]


class NotBeable(ValueError):
    pass


class SeedRequired(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementContext:
    psi: np.ndarray
    A: np.ndarray
    tol: Tolerance = field(default=TOL, compare=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"observable has shape {A.shape}")
        if not is_hermitian(A, self.tol):
            raise ValueError("observable not Hermitian")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "psi", as_state(self.psi, A.shape[0], self.tol))

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def spectral_projections(self) -> tuple:
        return hermitian_eig(self.A, self.tol).projections


@dataclass(frozen=True)
class DispersionFreeState:
    """A vector state ``X -> (e, X e)`` that is dispersion-free on the algebra."""

    eigvec: np.ndarray
    values: tuple  # expectation of each algebra basis element

    def __call__(self, X) -> complex:
        return complex(np.vdot(self.eigvec, np.asarray(X) @ self.eigvec))

    def is_dispersion_free(self, M: OperatorAlgebra, tol: float = 1e-8) -> bool:
        B = M.basis
        mats = list(B) + [X @ Y for X, Y in itertools.product(B, B)]
        return all(bool(abs(self(X.conj().T @ X) - abs(self(X)) ** 2) <= tol) for X in mats)


@dataclass(frozen=True)
class IgnoranceMeasure:
    weights: tuple
    states: tuple

    def expectation(self, X) -> complex:
        return sum(w * s(X) for w, s in zip(self.weights, self.states))

    def reproduction_error(self, M: OperatorAlgebra, psi) -> float:
        """Largest ``|(psi, X psi) - sum_i w_i omega_i(X)|`` over the basis of ``M``."""
        psi = np.asarray(psi, dtype=complex)
        return max(abs(np.vdot(psi, X @ psi) - self.expectation(X)) for X in M.basis)


@dataclass
class BeableReport:
    verdict: bool
    witness: tuple | None = None  # (X, Y, ||[X, Y] psi||)
    measure: IgnoranceMeasure | None = None
    com_bound_holds: bool | None = None
    max_commutator_norm: float = 0.0

    @property
    def conditions_agree(self) -> bool:
        return self.com_bound_holds is None or self.com_bound_holds == self.verdict


def _commutator_norms(mats, psi):
    mats = np.asarray(mats)
    v = mats @ psi  # X psi for every X
    XY = np.einsum("aij,bj->abi", mats, v)  # X (Y psi)
    return np.linalg.norm(XY - XY.transpose(1, 0, 2), axis=2)


def is_beable(M: OperatorAlgebra, psi, check_com_bound: bool = True) -> BeableReport:
    """Decide ``[X, Y] psi = 0`` for all X, Y in ``M`` over basis pairs.

    A positive verdict carries an explicit ignorance measure; a negative one
    carries a witness pair, preferring the algebra's own generators.
    """
    tol = M.tol
    psi = as_state(psi, M.dim, tol)
    norms = _commutator_norms(M.basis, psi)
    worst = float(norms.max()) if norms.size else 0.0
    report = BeableReport(verdict=worst <= tol.eq_tol, max_commutator_norm=worst)
    if report.verdict:
        report.measure = construct_ignorance_measure(M, psi)
    else:
        report.witness = _witness(M, psi, norms)
    if check_com_bound:
        report.com_bound_holds = com_bound_check(M, psi)
    return report


def _witness(M, psi, basis_norms):
    gens = [g for g in M.generators]
    gens += [g.conj().T for g in gens if not is_hermitian(g, M.tol)]
    if len(gens) >= 2:
        g = _commutator_norms(gens, psi)
        i, j = np.unravel_index(np.argmax(g), g.shape)
        if g[i, j] > M.tol.eq_tol:
            return gens[i], gens[j], float(g[i, j])
    i, j = np.unravel_index(np.argmax(basis_norms), basis_norms.shape)
    return M.basis[i], M.basis[j], float(basis_norms[i, j])


def construct_ignorance_measure(M: OperatorAlgebra, psi) -> IgnoranceMeasure:
    """Mixture of dispersion-free vector states reproducing ``psi`` on ``M``.

    On ``K = span{X psi}`` the algebra acts abelianly with ``psi`` cyclic, so its
    minimal projections ``Q_i`` there are rank one.  Weights are ``||Q_i psi||^2``
    and states are the normalized ``Q_i psi``.
    """
    tol = M.tol
    psi = as_state(psi, M.dim, tol)
    norms = _commutator_norms(M.basis, psi)
    if norms.size and norms.max() > tol.eq_tol:
        raise NotBeable(f"||[X, Y] psi|| reaches {norms.max():.3e}")
    W = range_basis(np.column_stack([X @ psi for X in M.basis]), tol)
    compressed = [W.conj().T @ X @ W for X in M.basis]
    atoms = minimal_projections_abelian(compressed, W.shape[1], tol)
    phi = W.conj().T @ psi
    weights, states = [], []
    for Q in atoms:
        v = W @ (Q @ phi)
        w = float(np.vdot(v, v).real)
        if w <= tol.eq_tol:
            continue
        e = v / np.sqrt(w)
        vals = tuple(complex(np.vdot(e, X @ e)) for X in M.basis)
        weights.append(w)
        states.append(DispersionFreeState(e, vals))
    total = sum(weights)
    return IgnoranceMeasure(tuple(w / total for w in weights), tuple(states))


def commutator_bound(M: OperatorAlgebra) -> np.ndarray:
    """``com`` of the internal reals of a self-adjoint spanning family of ``M``."""
    us = [to_internal(H, M.tol) for H in hermitian_basis(M)]
    return com_of_reals(us, M.tol, dim=M.dim)


def com_bound_check(M: OperatorAlgebra, psi) -> bool:
    """Whether ``|psi><psi| <= com(u_1, ..., u_n)`` for a spanning tuple of reals."""
    psi = as_state(psi, M.dim, M.tol)
    C = commutator_bound(M)
    return bool(np.linalg.norm(C @ psi - psi) <= M.tol.eq_tol)


def cyclic_subspace(ctx: MeasurementContext) -> np.ndarray:
    """Projection onto span{P_a psi} over the spectral projections of A."""
    vecs = [P @ ctx.psi for P in ctx.spectral_projections()]
    vecs = [v for v in vecs if np.linalg.norm(v) > ctx.tol.rank_tol]
    return projector_onto(vecs, ctx.tol)


def maximal_beable(ctx: MeasurementContext) -> OperatorAlgebra:
    """``W*(A) P ⊕ L(P⊥ H)`` with ``P`` the cyclic projection of the context."""
    P = cyclic_subspace(ctx)
    WA = generate([ctx.A], ctx.dim, ctx.tol)
    return block_direct_sum(P, WA, full_on_complement=True)


def _haar(n, rng):
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.uniform())]])
    return unitary_group.rvs(n, random_state=rng)


def sample_context_unitary(ctx: MeasurementContext, seed) -> np.ndarray:
    """Random unitary with ``[U, A] = 0`` and ``U psi = psi``.

    Inside each eigenspace of ``A`` the ray of ``P_a psi`` is fixed and its
    orthocomplement gets a Haar-random unitary; eigenspaces that miss ``psi``
    get a Haar-random unitary times a random phase.
    """
    if seed is None:
        raise SeedRequired("sample_context_unitary needs an explicit seed")
    rng = np.random.default_rng(seed)
    tol = ctx.tol
    U = np.zeros((ctx.dim, ctx.dim), dtype=complex)
    for P in ctx.spectral_projections():
        V = range_basis(P, tol)
        v = P @ ctx.psi
        nv = np.linalg.norm(v)
        if nv > tol.rank_tol:
            e = v / nv
            W = range_basis(V - np.outer(e, e.conj()) @ V, tol)
            R = _haar(W.shape[1], rng)
            U += np.outer(e, e.conj()) + W @ R @ W.conj().T
        else:
            phase = np.exp(2j * np.pi * rng.uniform())
            U += phase * (V @ _haar(V.shape[1], rng) @ V.conj().T)
    return U


@dataclass
class DefinabilityReport:
    passed: bool
    n_samples: int
    witness: np.ndarray | None = None
    witness_index: int | None = None

    @property
    def summary(self) -> str:
        if self.passed:
            return f"no violation found in {self.n_samples} samples"
        return f"violation at sample {self.witness_index}"


def definability_test(M: OperatorAlgebra, ctx: MeasurementContext, n_samples: int, seed) -> DefinabilityReport:
    """Search for a context-preserving unitary that moves ``M``.

    Passing is a necessary condition only: no violation among ``n_samples``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if M.dim != ctx.dim:
        raise DimensionMismatch(f"algebra dim {M.dim} vs context dim {ctx.dim}")
    if seed is None:
        raise SeedRequired("definability_test needs an explicit seed")
    children = np.random.SeedSequence(seed).spawn(n_samples)
    for k, child in enumerate(children):
        U = sample_context_unitary(ctx, child)
        if not algebras_equal(M.conjugate(U), M):
            return DefinabilityReport(False, n_samples, U, k)
    return DefinabilityReport(True, n_samples)


def a_priv_check(M: OperatorAlgebra, ctx: MeasurementContext) -> bool:
    """Whether ``A`` is affiliated with ``M``: all its spectral projections lie in ``M``."""
    return all(M.contains(P) for P in ctx.spectral_projections())


def bilateral_z_rotation(phi: float) -> np.ndarray:
    """``exp(i phi sigma_z) ⊗ exp(i phi sigma_z)`` on two qubits."""
    r = np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    return np.kron(r, r)
