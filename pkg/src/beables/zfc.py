"""Probes of ZFC-satisfiability over internal reals.

A fixed suite of order-theoretic theorems is evaluated on tuples of
observables of an algebra.  Each result records the Born probability in the
state and whether the commutator lower bound ``com(tuple) <= [[phi]]`` holds.
The satisfiability verdict itself comes from the commutator test in
:mod:`beables.beable`; the probes are evidence for it, never its definition.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import OperatorAlgebra, hermitian_basis
from .beable import com_bound_check, is_beable
from .linalg import TOL, DimensionMismatch, as_state, proj_leq
from .proplang import Environment, parse, rename, truth
from .reals import com_of_reals

__all__ = [
    "TEMPLATES",
    "SUITES",
    "ProbeResult",
    "ObservableNotInAlgebra",
    "probe_suite",
    "probe_tuple",
    "satisfiability_verdict",
    "SatisfiabilityRecord",
]


class ObservableNotInAlgebra(ValueError):
    pass


# name -> (arity, formula over variables x, y, z)
TEMPLATES = {
    "antisymmetry": (2, "(leq(x, y) & leq(y, x)) -> eq(x, y)"),
    "eq_symmetry": (2, "eq(x, y) -> eq(y, x)"),
    "reflexivity": (1, "leq(x, x)"),
    "totality": (2, "leq(x, y) | leq(y, x)"),
    "transitivity": (3, "(leq(x, y) & leq(y, z)) -> leq(x, z)"),
}

SUITES = {"order-axioms": tuple(sorted(TEMPLATES))}

_VARS = ("x", "y", "z")


@functools.cache
def _parsed(template):
    return parse(TEMPLATES[template][1])


@dataclass
class ProbeResult:
    probe_name: str
    observables: tuple
    truth_projection: np.ndarray
    probability: float
    com_lower_bound: np.ndarray
    transfer_holds: bool

    def as_dict(self) -> dict:
        return {
            "probe": self.probe_name,
            "observables": list(self.observables),
            "probability": self.probability,
            "transfer_holds": self.transfer_holds,
            "truth_rank": int(round(np.trace(self.truth_projection).real)),
            "com_rank": int(round(np.trace(self.com_lower_bound).real)),
        }


def probe_tuple(template: str, tup, env: Environment, psi, bound_tol: float = 1e-8,
                _com_cache: dict | None = None) -> ProbeResult:
    """Evaluate one template on one tuple of observable names."""
    arity, formula = TEMPLATES[template]
    tup = tuple(tup)
    if len(tup) != arity:
        raise ValueError(f"{template} takes {arity} observables, got {len(tup)}")
    T = truth(rename(_parsed(template), dict(zip(_VARS, tup))), env)
    key = frozenset(tup)
    if _com_cache is not None and key in _com_cache:
        C = _com_cache[key]
    else:
        C = com_of_reals([env.real(n) for n in sorted(key)], env.tol)
        if _com_cache is not None:
            _com_cache[key] = C
    prob = float(np.linalg.norm(T @ psi) ** 2)
    return ProbeResult(template, tup, T, min(1.0, prob), C, proj_leq(C, T, bound_tol))


def probe_suite(M: OperatorAlgebra | None, psi, obs: dict, suite: str = "order-axioms",
                max_tuples: int | None = None) -> list:
    """Run every template of ``suite`` over all tuples drawn from ``obs``.

    Results are ordered by template name, then tuple index.  ``max_tuples``
    caps the tuples per template.
    """
    tol = M.tol if M is not None else TOL
    env = Environment(dict(obs), tol)
    if M is not None:
        for name, X in env.observables.items():
            if X.shape[0] != M.dim:
                raise DimensionMismatch(f"observable {name!r} has dimension {X.shape[0]}")
            if not M.contains(X):
                raise ObservableNotInAlgebra(name)
    psi = as_state(psi, env.dim, tol)
    results, coms = [], {}
    for template in SUITES[suite]:
        arity = TEMPLATES[template][0]
        tuples = itertools.product(sorted(env.observables), repeat=arity)
        if max_tuples is not None:
            tuples = itertools.islice(tuples, max_tuples)
        results.extend(probe_tuple(template, t, env, psi, _com_cache=coms) for t in tuples)
    return results


@dataclass
class SatisfiabilityRecord:
    verdict: bool
    com_bound_agrees: bool
    all_probes_certain: bool
    failing_probes: list = field(default_factory=list)
    n_probes: int = 0

    @property
    def consistent(self) -> bool:
        """The cross-checks required of a positive verdict hold."""
        if not self.com_bound_agrees:
            return False
        return self.all_probes_certain if self.verdict else True


def satisfiability_verdict(M: OperatorAlgebra, psi, obs: dict | None = None,
                           max_tuples: int | None = None, certain_tol: float = 1e-8) -> SatisfiabilityRecord:
    """Verdict from the commutator test, cross-checked against com and the probe suite.

    ``obs`` defaults to a Hermitian spanning family of ``M``.
    """
    report = is_beable(M, psi, check_com_bound=False)
    agrees = com_bound_check(M, psi) == report.verdict
    if obs is None:
        obs = {f"h{i}": H for i, H in enumerate(hermitian_basis(M))}
    probes = probe_suite(M, psi, obs, max_tuples=max_tuples)
    failing = [p for p in probes if p.probability < 1 - certain_tol]
    return SatisfiabilityRecord(report.verdict, agrees, not failing, failing, len(probes))
