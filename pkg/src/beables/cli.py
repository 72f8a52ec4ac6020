"""Command line interface driven by a single JSON scenario file.

Scenario format::

    {
      "dim": 4,
      "observables": {"A": [[1, 0], ...]},            # Hermitian, row-major
      "projections": {"P": [[...]]},                  # optional
      "states": {"psi": [0, [0.7, 0], ...]},          # unit vectors
      "algebras": {"B": ["A", [[...inline...]]]},     # generator lists
      "contexts": {"ctx": {"state": "psi", "observable": "A"}}
    }

Complex entries are ``[re, im]`` pairs; plain numbers are read as real.
Contexts may also be given as ``["psi", "A"]``.

Exit codes: 0 computed and every asserted check passed, 1 a check failed,
2 input or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import OperatorAlgebra, generate, hermitian_basis
from .beable import (
    MeasurementContext,
    a_priv_check,
    cyclic_subspace,
    definability_test,
    is_beable,
    maximal_beable,
)
from .lattice import takeuti_commutator
from .linalg import Tolerance, default_tolerance, is_hermitian, is_projection
from .proplang import Environment, PropSyntaxError, UnresolvedName, parse, truth
from .zfc import SUITES, probe_suite

__all__ = ["Scenario", "ScenarioError", "ScenarioParseError", "ScenarioValidationError",
           "load_scenario", "bundled_scenario", "main"]

SIG_DIGITS = 12


class ScenarioError(Exception):
    pass


class ScenarioParseError(ScenarioError):
    def __init__(self, path, line, column, msg):
        super().__init__(f"{path}:{line}:{column}: {msg}")
        self.line, self.column = line, column


class ScenarioValidationError(ScenarioError):
    pass


@dataclass
class Scenario:
    dim: int
    observables: dict = field(default_factory=dict)
    projections: dict = field(default_factory=dict)
    states: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    contexts: dict = field(default_factory=dict)
    tol: Tolerance = field(default_factory=default_tolerance)

    def state(self, name):
        if name not in self.states:
            raise ScenarioValidationError(f"unknown state {name!r}")
        return self.states[name]

    def algebra(self, name) -> OperatorAlgebra:
        if name not in self.algebras:
            raise ScenarioValidationError(f"unknown algebra {name!r}")
        return generate(self.algebras[name], self.dim, self.tol)

    def context(self, name) -> MeasurementContext:
        if name not in self.contexts:
            raise ScenarioValidationError(f"unknown context {name!r}")
        s, a = self.contexts[name]
        return MeasurementContext(self.states[s], self.observables[a], self.tol)

    def projection(self, name):
        if name in self.projections:
            return self.projections[name]
        if name in self.observables and is_projection(self.observables[name], self.tol):
            return self.observables[name]
        raise ScenarioValidationError(f"unknown projection {name!r}")


def _entry(x, where):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise ScenarioValidationError(f"{where}: entry {x!r} is neither a number nor a [re, im] pair")


def _matrix(raw, dim, where):
    if not isinstance(raw, list) or len(raw) != dim or any(not isinstance(r, list) or len(r) != dim for r in raw):
        raise ScenarioValidationError(f"{where}: expected a {dim}x{dim} nested array")
    return np.array([[_entry(x, where) for x in row] for row in raw], dtype=complex)


def _vector(raw, dim, where):
    if not isinstance(raw, list) or len(raw) != dim:
        raise ScenarioValidationError(f"{where}: expected {dim} amplitudes")
    return np.array([_entry(x, where) for x in raw], dtype=complex)


def parse_scenario(data: dict, tol: Tolerance | None = None) -> Scenario:
    tol = tol or default_tolerance()
    if not isinstance(data, dict) or not isinstance(data.get("dim"), int) or data["dim"] < 1:
        raise ScenarioValidationError("scenario: 'dim' must be a positive integer")
    d = data["dim"]
    sc = Scenario(d, tol=tol)
    for name, raw in data.get("observables", {}).items():
        X = _matrix(raw, d, f"observable {name!r}")
        if not is_hermitian(X, tol):
            raise ScenarioValidationError(f"observable {name!r}: observable not Hermitian")
        sc.observables[name] = X
    for name, raw in data.get("projections", {}).items():
        P = _matrix(raw, d, f"projection {name!r}")
        if not is_projection(P, tol):
            raise ScenarioValidationError(f"projection {name!r}: not a Hermitian idempotent")
        sc.projections[name] = P
    for name, raw in data.get("states", {}).items():
        v = _vector(raw, d, f"state {name!r}")
        if abs(np.linalg.norm(v) - 1) > tol.eq_tol:
            raise ScenarioValidationError(f"state {name!r}: state not unit (norm {np.linalg.norm(v):.6g})")
        sc.states[name] = v
    for name, gens in data.get("algebras", {}).items():
        if not isinstance(gens, list):
            raise ScenarioValidationError(f"algebra {name!r}: expected a list of generators")
        mats = []
        for g in gens:
            if isinstance(g, str):
                if g in sc.observables:
                    mats.append(sc.observables[g])
                elif g in sc.projections:
                    mats.append(sc.projections[g])
                else:
                    raise ScenarioValidationError(f"algebra {name!r}: unknown generator {g!r}")
            else:
                mats.append(_matrix(g, d, f"algebra {name!r} inline generator"))
        sc.algebras[name] = mats
    for name, raw in data.get("contexts", {}).items():
        if isinstance(raw, dict):
            pair = (raw.get("state"), raw.get("observable"))
        elif isinstance(raw, list) and len(raw) == 2:
            pair = tuple(raw)
        else:
            raise ScenarioValidationError(f"context {name!r}: expected {{state, observable}}")
        if pair[0] not in sc.states:
            raise ScenarioValidationError(f"context {name!r}: unknown state {pair[0]!r}")
        if pair[1] not in sc.observables:
            raise ScenarioValidationError(f"context {name!r}: unknown observable {pair[1]!r}")
        sc.contexts[name] = pair
    return sc


def load_scenario(path, tol: Tolerance | None = None) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(path, e.lineno, e.colno, e.msg) from None
    return parse_scenario(data, tol)


def bundled_scenario(name: str = "epr_singlet.json") -> Path:
    return Path(str(resources.files("beables") / "data" / name))


# -- report encoding ------------------------------------------------------------

def _num(x: float) -> float:
    v = float(f"{float(x):.{SIG_DIGITS}g}")
    return 0.0 if v == 0 else v


def _cnum(z) -> list:
    return [_num(np.real(z)), _num(np.imag(z))]


def _mat(M) -> list:
    M = np.asarray(M)
    if M.ndim == 1:
        return [_cnum(z) for z in M]
    return [[_cnum(z) for z in row] for row in M]


def _rank(P) -> int:
    return int(round(float(np.trace(P).real)))


def _name_of(X, named: dict, tol: Tolerance):
    for name, Y in named.items():
        if np.linalg.norm(np.asarray(X) - Y) <= tol.eq_tol:
            return name
    return None


# -- commands -------------------------------------------------------------------

def cmd_eval(sc: Scenario, args):
    env = Environment(sc.observables, sc.tol)
    try:
        prop = parse(args.prop)
        T = truth(prop, env)
    except PropSyntaxError as e:
        raise ScenarioValidationError(f"proposition: {e}") from None
    except UnresolvedName as e:
        raise ScenarioValidationError(f"proposition: unknown observable {e.args[0]!r}") from None
    psi = sc.state(args.state)
    prob = float(np.linalg.norm(T @ psi) ** 2)
    report = {"command": "eval", "proposition": args.prop, "state": args.state,
              "truth_projection": _mat(T), "rank": _rank(T), "probability": _num(prob)}
    text = [f"proposition: {args.prop}", f"rank of truth projection: {_rank(T)}",
            f"Pr{{prop || {args.state}}} = {prob:.12g}", "truth projection:", np.array2string(T, precision=6)]
    return 0, report, text


def cmd_beable_check(sc: Scenario, args):
    M = sc.algebra(args.algebra)
    psi = sc.state(args.state)
    rep = is_beable(M, psi)
    named = {n: X for n, X in sc.observables.items() if M.contains(X)}
    report = {"command": "beable-check", "algebra": args.algebra, "state": args.state,
              "linear_dim": M.linear_dim, "verdict": rep.verdict,
              "max_commutator_norm": _num(rep.max_commutator_norm),
              "com_bound_holds": rep.com_bound_holds, "conditions_agree": rep.conditions_agree,
              "witness": None, "measure": None}
    text = [f"algebra {args.algebra} (linear dim {M.linear_dim}), state {args.state}",
            f"beable: {rep.verdict}   com bound holds: {rep.com_bound_holds}"]
    if rep.verdict:
        rows = []
        for w, s in zip(rep.measure.weights, rep.measure.states):
            rows.append({"weight": _num(w), "vector": _mat(s.eigvec),
                         "values": {n: _num(s(X).real) for n, X in sorted(named.items())}})
        report["measure"] = {"weights": [_num(w) for w in rep.measure.weights], "states": rows}
        cols = sorted(named)
        text.append("weight      " + "  ".join(f"{c:>10}" for c in cols))
        for r in rows:
            text.append(f"{r['weight']:<10.6g}  " + "  ".join(f"{r['values'][c]:>10.6g}" for c in cols))
    else:
        X, Y, nrm = rep.witness
        report["witness"] = {"X": _mat(X), "Y": _mat(Y), "norm": _num(nrm),
                             "X_name": _name_of(X, sc.observables, sc.tol),
                             "Y_name": _name_of(Y, sc.observables, sc.tol)}
        text.append(f"witness: ||[X, Y] psi|| = {nrm:.6g} with X = {report['witness']['X_name'] or 'basis element'},"
                    f" Y = {report['witness']['Y_name'] or 'basis element'}")
    code = 0 if rep.verdict and rep.conditions_agree else 1
    return code, report, text


def cmd_maximal_beable(sc: Scenario, args):
    ctx = sc.context(args.context)
    P = cyclic_subspace(ctx)
    B = maximal_beable(ctx)
    beable = is_beable(B, ctx.psi, check_com_bound=False).verdict
    apriv = a_priv_check(B, ctx)
    containment = {n: B.contains(X) for n, X in sorted(sc.observables.items())}
    report = {"command": "maximal-beable", "context": args.context, "linear_dim": B.linear_dim,
              "cyclic_rank": _rank(P), "beable": beable, "a_priv": apriv, "containment": containment}
    if args.emit_basis:
        report["basis"] = [_mat(X) for X in B.basis]
    text = [f"context {args.context}: cyclic projection rank {_rank(P)}",
            f"maximal beable algebra: linear dim {B.linear_dim}, beable {beable}, A affiliated {apriv}"]
    text += [f"  {n:<12} {'in' if c else 'not in'}" for n, c in containment.items()]
    if args.emit_basis:
        text += [np.array2string(X, precision=6) for X in B.basis]
    return (0 if beable and apriv else 1), report, text


def cmd_commutator(sc: Scenario, args):
    names = [n for n in args.projections.split(",") if n]
    projs = [sc.projection(n) for n in names]
    C = takeuti_commutator(projs, sc.dim, sc.tol)
    report = {"command": "commutator", "projections": names, "com": _mat(C), "rank": _rank(C)}
    text = [f"com({', '.join(names)}) has rank {_rank(C)}", np.array2string(C, precision=6)]
    return 0, report, text


def cmd_defcheck(sc: Scenario, args):
    M = sc.algebra(args.algebra)
    ctx = sc.context(args.context)
    rep = definability_test(M, ctx, args.samples, args.seed)
    report = {"command": "defcheck", "algebra": args.algebra, "context": args.context,
              "passed": rep.passed, "n_samples": rep.n_samples, "seed": args.seed,
              "witness_index": rep.witness_index,
              "witness_unitary": None if rep.witness is None else _mat(rep.witness)}
    text = [f"definability of {args.algebra} under context {args.context}: {rep.summary}"]
    if rep.witness is not None:
        text.append(np.array2string(rep.witness, precision=6))
    return (0 if rep.passed else 1), report, text


def cmd_zfc_probe(sc: Scenario, args):
    M = sc.algebra(args.algebra)
    psi = sc.state(args.state)
    obs = {n: X for n, X in sorted(sc.observables.items()) if M.contains(X)}
    if not obs:
        obs = {f"h{i}": H for i, H in enumerate(hermitian_basis(M))}
    probes = probe_suite(M, psi, obs, suite=args.suite, max_tuples=args.max_tuples)
    verdict = is_beable(M, psi, check_com_bound=False).verdict
    rows = []
    for p in probes:
        row = p.as_dict()
        row["probability"] = _num(row["probability"])
        rows.append(row)
    transfer_ok = all(p.transfer_holds for p in probes)
    certain = all(p.probability >= 1 - 1e-8 for p in probes)
    report = {"command": "zfc-probe", "algebra": args.algebra, "state": args.state, "suite": args.suite,
              "beable": verdict, "all_transfer_hold": transfer_ok, "all_certain": certain, "probes": rows}
    text = [f"{'probe':<14}{'observables':<28}{'probability':>14}  transfer"]
    text += [f"{r['probe']:<14}{','.join(r['observables']):<28}{r['probability']:>14.10f}  "
             f"{'ok' if r['transfer_holds'] else 'VIOLATED'}" for r in rows]
    text.append(f"ZFC-satisfiable (beable): {verdict}; all probes certain: {certain}")
    return (0 if transfer_ok and verdict else 1), report, text


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="beables", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--scenario", required=True, help="path to the scenario JSON file")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "truth projection and Born probability of a proposition")
    p.add_argument("--state", required=True)
    p.add_argument("--prop", required=True)
    p = add("beable-check", cmd_beable_check, "is an algebra beable for a state")
    p.add_argument("--algebra", required=True)
    p.add_argument("--state", required=True)
    p = add("maximal-beable", cmd_maximal_beable, "maximal definable beable algebra of a context")
    p.add_argument("--context", required=True)
    p.add_argument("--emit-basis", action="store_true")
    p = add("commutator", cmd_commutator, "commutator projection of named projections")
    p.add_argument("--projections", required=True, help="comma separated names")
    p = add("defcheck", cmd_defcheck, "sampled implicit-definability test")
    p.add_argument("--algebra", required=True)
    p.add_argument("--context", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p = add("zfc-probe", cmd_zfc_probe, "order-axiom probes over the algebra's named observables")
    p.add_argument("--algebra", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--suite", choices=sorted(SUITES), default="order-axioms")
    p.add_argument("--max-tuples", type=int, default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        code, report, text = args.func(sc, args)
    except (ScenarioError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(text))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
