import numpy as np
import pytest
from hypothesis import given, strategies as st

from beables.lattice import sasaki_arrow
from beables.linalg import join, proj_equal
from beables.proplang import (
    And,
    AtomLeq,
    Environment,
    Not,
    PropSyntaxError,
    RelEq,
    RelLeq,
    UnknownToken,
    UnresolvedName,
    born_probability,
    embedding_check,
    implies,
    or_,
    parse,
    truth,
)
from beables.sampling import random_hermitian, random_unitary

from conftest import DOWN_Z, I2, SINGLET, SX, SZ, kron

seeds = st.integers(0, 2**32 - 1)


def propositions(names, max_leaves=6):
    atom = st.one_of(
        st.builds(AtomLeq, st.sampled_from(names), st.sampled_from([-1.5, -0.5, 0.0, 0.3, 1.0, 2.5])),
        st.builds(RelLeq, st.sampled_from(names), st.sampled_from(names)),
        st.builds(RelEq, st.sampled_from(names), st.sampled_from(names)),
    )
    return st.recursive(
        atom,
        lambda kids: st.one_of(
            st.builds(Not, kids), st.builds(And, kids, kids),
            st.builds(or_, kids, kids), st.builds(implies, kids, kids),
        ),
        max_leaves=max_leaves,
    )


def test_parse_atoms_and_connectives():
    assert parse("A <= 0.5") == AtomLeq("A", 0.5)
    assert parse("~(A <= 0 & B <= 1)") == Not(And(AtomLeq("A", 0), AtomLeq("B", 1)))
    phi, psi = AtomLeq("A", 0), AtomLeq("B", 0)
    assert parse("A <= 0 -> B <= 0") == Not(And(Not(Not(phi)), Not(And(phi, psi))))
    assert parse("leq(A, B) | eq(B, A)") == Not(And(Not(RelLeq("A", "B")), Not(RelEq("B", "A"))))
    assert parse("A <= -1e-1") == AtomLeq("A", -0.1)


def test_parse_precedence_and_associativity():
    a, b, c = (AtomLeq(n, 0) for n in "abc")
    assert parse("a <= 0 & b <= 0 | c <= 0") == or_(And(a, b), c)
    assert parse("a <= 0 -> b <= 0 -> c <= 0") == implies(a, implies(b, c))
    assert parse("~a <= 0 & b <= 0") == And(Not(a), b)
    assert parse("a <= 0 <-> b <= 0") == And(implies(a, b), implies(b, a))


@pytest.mark.parametrize("text, pos", [("A <= ", 5), ("A 0.5", 2), ("(A <= 1", 7), ("A <= 1 )", 7), ("leq(A)", 5)])
def test_parse_syntax_errors_carry_position(text, pos):
    with pytest.raises(PropSyntaxError) as err:
        parse(text)
    assert err.value.position == pos


def test_parse_unknown_token():
    with pytest.raises(UnknownToken) as err:
        parse("A < 1")
    assert err.value.position == 2


def test_truth_examples():
    env = Environment({"Z": SZ, "X": SX})
    assert proj_equal(truth(parse("Z <= 0"), env), DOWN_Z)
    assert proj_equal(truth(parse("X <= 0.2 | ~X <= 0.2"), env), I2)
    assert proj_equal(truth(parse("Z <= 1"), env), I2)
    with pytest.raises(UnresolvedName):
        truth(parse("Y <= 0"), env)


def test_born_probability_examples():
    env = Environment({"A": kron(SZ, I2)})
    assert born_probability(parse("A <= 0"), SINGLET, env) == pytest.approx(0.5, abs=1e-12)
    assert born_probability(parse("A <= 0 | ~A <= 0"), SINGLET, env) == pytest.approx(1.0, abs=1e-12)
    assert born_probability(parse("Z <= 0"), np.array([1, 0]), Environment({"Z": SZ})) == pytest.approx(0.0)


def test_environment_validation():
    with pytest.raises(ValueError):
        Environment({"A": np.array([[0, 1], [0, 0]])})
    with pytest.raises(ValueError):
        Environment({"A": SZ, "B": np.eye(3)})


def test_embedding_single_atoms():
    rng = np.random.default_rng(5)
    env = Environment({"H": random_hermitian(3, rng)})
    for bound in (-3.0, -0.4, 0.0, 0.7, 3.0):
        assert embedding_check(AtomLeq("H", bound), env)


@given(seeds, propositions(["A", "B"]))
def test_embedding_commuting_observables(seed, p):
    rng = np.random.default_rng(seed)
    U = random_unitary(3, rng)
    A = U @ np.diag(rng.integers(-1, 2, 3).astype(float)) @ U.conj().T
    B = U @ np.diag(rng.integers(-1, 2, 3).astype(float)) @ U.conj().T
    assert embedding_check(p, Environment({"A": A, "B": B}))


@given(seeds, propositions(["A", "B", "C"]))
def test_embedding_noncommuting_observables(seed, p):
    rng = np.random.default_rng(seed)
    env = Environment({n: random_hermitian(3, rng) for n in "ABC"})
    assert embedding_check(p, env)


@given(seeds, propositions(["X"]))
def test_single_observable_logic_is_classical(seed, p):
    rng = np.random.default_rng(seed)
    U = random_unitary(3, rng)
    w = rng.integers(-2, 3, 3).astype(float)
    X = U @ np.diag(w) @ U.conj().T
    env = Environment({"X": X})
    T = truth(p, env)
    # evaluate the same proposition pointwise on the eigenvalues
    def holds(q, x):
        if isinstance(q, AtomLeq):
            return x <= q.bound
        if isinstance(q, (RelLeq, RelEq)):
            return True
        if isinstance(q, Not):
            return not holds(q.child, x)
        return holds(q.left, x) and holds(q.right, x)
    expected = U @ np.diag([float(holds(p, x)) for x in w]) @ U.conj().T
    assert proj_equal(T, expected, 1e-8)
    assert np.linalg.norm(T @ X - X @ T) <= 1e-8


@given(seeds, st.integers(2, 4))
def test_implication_is_sasaki_arrow(seed, d):
    rng = np.random.default_rng(seed)
    env = Environment({"A": random_hermitian(d, rng), "B": random_hermitian(d, rng)})
    p, q = parse("A <= 0.1"), parse("B <= -0.2")
    assert proj_equal(truth(implies(p, q), env), sasaki_arrow(truth(p, env), truth(q, env)))


@given(seeds, st.integers(2, 4))
def test_pythagoras_for_truth_and_negation(seed, d):
    rng = np.random.default_rng(seed)
    env = Environment({"A": random_hermitian(d, rng), "B": random_hermitian(d, rng)})
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    p = parse("A <= 0 & B <= 0.5")
    total = born_probability(p, psi, env) + born_probability(Not(p), psi, env)
    assert total == pytest.approx(1.0, abs=1e-10)
    assert 0.0 <= born_probability(p, psi, env) <= 1.0


def test_disjunction_is_join():
    env = Environment({"A": SZ, "B": SX})
    assert proj_equal(truth(parse("A <= 0 | B <= 0"), env),
                      join(truth(parse("A <= 0"), env), truth(parse("B <= 0"), env)))
