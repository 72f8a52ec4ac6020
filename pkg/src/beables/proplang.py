"""Observational propositions: parser, projection-valued truth, Born probabilities.

Grammar (loosest binding first)::

    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?             right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | primary
    primary := '(' iff ')'
             | 'leq' '(' NAME ',' NAME ')'
             | 'eq' '(' NAME ',' NAME ')'
             | NAME '<=' NUMBER

Only negation and conjunction are primitive; ``|``, ``->`` and ``<->`` are
expanded while parsing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import reals
from .linalg import TOL, DimensionMismatch, Tolerance, as_state, hermitian_eig, is_hermitian, meet, ortho

__all__ = [
    "AtomLeq", "RelLeq", "RelEq", "Not", "And", "Proposition",
    "or_", "implies", "iff",
    "PropSyntaxError", "UnknownToken", "UnresolvedName",
    "Environment", "parse", "truth", "born_probability", "embedding_truth", "embedding_check",
    "names", "rename",
]


@dataclass(frozen=True)
class AtomLeq:
    name: str
    bound: float


@dataclass(frozen=True)
class RelLeq:
    left: str
    right: str


@dataclass(frozen=True)
class RelEq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    child: "Proposition"


@dataclass(frozen=True)
class And:
    left: "Proposition"
    right: "Proposition"


Proposition = Union[AtomLeq, RelLeq, RelEq, Not, And]


def or_(a, b):
    return Not(And(Not(a), Not(b)))


def implies(a, b):
    return or_(Not(a), And(a, b))


def iff(a, b):
    return And(implies(a, b), implies(b, a))


def names(p) -> set:
    """Observable names referenced by a proposition."""
    if isinstance(p, AtomLeq):
        return {p.name}
    if isinstance(p, (RelLeq, RelEq)):
        return {p.left, p.right}
    if isinstance(p, Not):
        return names(p.child)
    return names(p.left) | names(p.right)


def rename(p, mapping: dict):
    """Substitute observable names according to ``mapping``."""
    if isinstance(p, AtomLeq):
        return AtomLeq(mapping.get(p.name, p.name), p.bound)
    if isinstance(p, RelLeq):
        return RelLeq(mapping.get(p.left, p.left), mapping.get(p.right, p.right))
    if isinstance(p, RelEq):
        return RelEq(mapping.get(p.left, p.left), mapping.get(p.right, p.right))
    if isinstance(p, Not):
        return Not(rename(p.child, mapping))
    return And(rename(p.left, mapping), rename(p.right, mapping))


# -- parsing ------------------------------------------------------------------

class PropSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownToken(PropSyntaxError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|<=|[~&|(),])
""", re.VERBOSE)


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise UnknownToken(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self, value=None, kind=None):
        k, v, pos = self.peek()
        if (value is not None and v != value) or (kind is not None and k != kind):
            want = value if value is not None else kind
            got = v if k != "end" else "end of input"
            raise PropSyntaxError(f"expected {want!r}, got {got!r}", pos)
        self.i += 1
        return v

    def parse(self):
        p = self.iff()
        k, v, pos = self.peek()
        if k != "end":
            raise PropSyntaxError(f"unexpected {v!r}", pos)
        return p

    def iff(self):
        p = self.imp()
        while self.peek()[1] == "<->":
            self.take("<->")
            p = iff(p, self.imp())
        return p

    def imp(self):
        p = self.or_()
        if self.peek()[1] == "->":
            self.take("->")
            return implies(p, self.imp())
        return p

    def or_(self):
        p = self.and_()
        while self.peek()[1] == "|":
            self.take("|")
            p = or_(p, self.and_())
        return p

    def and_(self):
        p = self.unary()
        while self.peek()[1] == "&":
            self.take("&")
            p = And(p, self.unary())
        return p

    def unary(self):
        if self.peek()[1] == "~":
            self.take("~")
            return Not(self.unary())
        return self.primary()

    def primary(self):
        k, v, pos = self.peek()
        if v == "(":
            self.take("(")
            p = self.iff()
            self.take(")")
            return p
        if k == "name" and v in ("leq", "eq") and self.peek(1)[1] == "(":
            self.take(v)
            self.take("(")
            a = self.take(kind="name")
            self.take(",")
            b = self.take(kind="name")
            self.take(")")
            return RelLeq(a, b) if v == "leq" else RelEq(a, b)
        if k == "name":
            self.take(kind="name")
            self.take("<=")
            return AtomLeq(v, float(self.take(kind="number")))
        got = v if k != "end" else "end of input"
        raise PropSyntaxError(f"expected a proposition, got {got!r}", pos)


def parse(text: str) -> Proposition:
    return _Parser(text).parse()


# -- evaluation ---------------------------------------------------------------

class UnresolvedName(KeyError):
    pass


@dataclass
class Environment:
    """Named Hermitian observables on a common Hilbert space."""

    observables: dict
    tol: Tolerance = field(default=TOL)
    dim: int = field(init=False)

    def __post_init__(self):
        obs = {k: np.asarray(v, dtype=complex) for k, v in self.observables.items()}
        dims = {v.shape[0] for v in obs.values()}
        if len(dims) > 1:
            raise DimensionMismatch(f"observables of different dimensions {sorted(dims)}")
        for k, v in obs.items():
            if not is_hermitian(v, self.tol):
                raise ValueError(f"observable {k!r} not Hermitian")
        self.observables = obs
        self.dim = dims.pop() if dims else 0
        self._reals = {}
        self._relations = {}

    def real(self, name) -> reals.InternalReal:
        if name not in self.observables:
            raise UnresolvedName(name)
        if name not in self._reals:
            self._reals[name] = reals.InternalReal(hermitian_eig(self.observables[name], self.tol), name)
        return self._reals[name]

    def relation(self, p) -> np.ndarray:
        """Truth of a relational atom, cached per (kind, left, right)."""
        key = (type(p).__name__, p.left, p.right)
        if key not in self._relations:
            f = reals.leq_truth if isinstance(p, RelLeq) else reals.eq_truth
            self._relations[key] = f(self.real(p.left), self.real(p.right), self.tol)
        return self._relations[key]


def _evaluate(p, env: Environment, atom) -> np.ndarray:
    if isinstance(p, AtomLeq):
        return atom(p, env)
    if isinstance(p, (RelLeq, RelEq)):
        return env.relation(p)
    if isinstance(p, Not):
        return ortho(_evaluate(p.child, env, atom))
    if isinstance(p, And):
        return meet(_evaluate(p.left, env, atom), _evaluate(p.right, env, atom), env.tol)
    raise TypeError(f"not a proposition: {p!r}")


def _direct_atom(p, env):
    return env.real(p.name).cut(p.bound)


def _internal_atom(p, env):
    return reals.leq_truth(env.real(p.name), reals.standard_real(p.bound, env.dim, env.tol), env.tol)


def truth(p: Proposition, env: Environment) -> np.ndarray:
    """Projection-valued truth: atoms are spectral cuts, ∧ is meet, ¬ is complement."""
    return _evaluate(p, env, _direct_atom)


def embedding_truth(p: Proposition, env: Environment) -> np.ndarray:
    """Truth of ``p`` after rewriting each atom ``X <= x`` as ``X~ <= x~`` between internal reals."""
    return _evaluate(p, env, _internal_atom)


def embedding_check(p: Proposition, env: Environment) -> bool:
    return bool(np.linalg.norm(truth(p, env) - embedding_truth(p, env)) <= env.tol.eq_tol)


def born_probability(p: Proposition, psi, env: Environment) -> float:
    psi = as_state(psi, env.dim, env.tol)
    return float(np.clip(np.linalg.norm(truth(p, env) @ psi) ** 2, 0.0, 1.0))
