"""Axiom recognition, Hilbert-style proof checking and soundness fuzzing for AX.

Schemas are matched structurally on desugared formulas, so ``a -> b`` and
``~(a & ~b)`` are the same line.  D6 is rigid: exactly ``n`` disjuncts in
agent order, right-associated.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Union

from .checker import valid_in_model
from .errors import ProofFormatError, ParseError
from .formula import (
    And,
    FalseLit,
    Def,
    Formula,
    Implies,
    Not,
    Report,
    agents,
    desugar,
    disjunction_parts,
    implication_parts,
    is_nec_agent_independent,
    is_prop_tautology,
)
from .generate import AXIOM_NAMES, axiom_instance, formula_pool
from .parser import parse, render
from .structures import random_structure, structure_to_json


def _k_shape(core, op):
    parts = implication_parts(core)
    if not parts:
        return False
    boxed, rest = parts
    if not isinstance(boxed, op):
        return False
    inner = implication_parts(boxed.body)
    after = implication_parts(rest)
    if not inner or not after:
        return False
    j, (a, b) = boxed.agent, inner
    return after == (op(j, a), op(j, b))


def _four_shape(core, op):
    parts = implication_parts(core)
    return bool(parts) and isinstance(parts[0], op) and parts[1] == op(parts[0].agent, parts[0])


def _five_shape(core, op):
    parts = implication_parts(core)
    if not parts:
        return False
    neg, rest = parts
    return (
        isinstance(neg, Not)
        and isinstance(neg.arg, op)
        and rest == op(neg.arg.agent, neg)
    )


def _seriality_shape(core, op):
    return isinstance(core, Not) and isinstance(core.arg, op) and isinstance(core.arg.body, FalseLit)


def _truth_shape(core, agent=None):
    parts = implication_parts(core)
    if not parts or not isinstance(parts[0], Def):
        return None
    if agent is not None and parts[0].agent != agent:
        return None
    return parts[1] if parts[0].body == parts[1] else None


def _d6_shape(core, n):
    rest = core
    for k in range(1, n):
        split = disjunction_parts(rest)
        if not split or _truth_shape(split[0], k) is None:
            return False
        rest = split[1]
    return _truth_shape(rest, n) is not None


def match_axiom(phi: Formula, n: int) -> set:
    """Names of all AX schemas that ``phi`` instantiates for ``n`` agents."""
    core = desugar(phi)
    names = set()
    if is_prop_tautology(core):
        names.add("Taut")
    for tag, op in (("R", Report), ("D", Def)):
        if _k_shape(core, op):
            names.add(tag + "1")
        if _four_shape(core, op):
            names.add(tag + "2")
        if _five_shape(core, op):
            names.add(tag + "3")
        if _seriality_shape(core, op):
            names.add(tag + "4")
    body = _truth_shape(core)
    if body is not None and is_nec_agent_independent(body):
        names.add("D5")
    if _d6_shape(core, n):
        names.add("D6")
    return names


# -- proofs -------------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    name: str


@dataclass(frozen=True)
class MP:
    """Modus ponens: ``premise`` holds ``phi``, ``implication`` holds ``phi -> psi``."""

    premise: int
    implication: int


@dataclass(frozen=True)
class NecR:
    line: int
    agent: int


@dataclass(frozen=True)
class NecD:
    line: int
    agent: int


Justification = Union[Axiom, MP, NecR, NecD]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    by: Justification


@dataclass(frozen=True)
class Proof:
    n: int
    lines: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class ProofCheck:
    ok: bool
    line: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self):
        if self.ok:
            return {"ok": True}
        return {"ok": False, "line": self.line, "reason": self.reason}


def _check_line(proof, k, cores):
    line = proof.lines[k]
    core = cores[k]
    bad_agents = [a for a in agents(core) if a > proof.n]
    if bad_agents:
        return f"agent {max(bad_agents)} exceeds the agent count {proof.n}"
    by = line.by

    def earlier(ref):
        if not isinstance(ref, int) or isinstance(ref, bool) or not 0 <= ref < k:
            raise _BadRef(f"line reference {ref!r} is not an earlier line")
        return cores[ref]

    try:
        if isinstance(by, Axiom):
            if by.name not in AXIOM_NAMES:
                return f"unknown axiom {by.name!r}"
            matched = match_axiom(core, proof.n)
            if by.name in matched:
                return None
            if by.name == "Taut":
                return "not a tautology"
            found = ", ".join(sorted(matched)) or "no schema"
            return f"not an instance of {by.name} (matches {found})"
        if isinstance(by, MP):
            premise = earlier(by.premise)
            implication = earlier(by.implication)
            expected = Not(And(premise, Not(core)))
            if implication != expected:
                surface = proof.lines
                return (
                    f"modus ponens expects line {by.implication} to be "
                    f"{render(Implies(surface[by.premise].formula, line.formula))}, "
                    f"found {render(surface[by.implication].formula)}"
                )
            return None
        if isinstance(by, (NecR, NecD)):
            source = earlier(by.line)
            if not isinstance(by.agent, int) or not 1 <= by.agent <= proof.n:
                return f"agent {by.agent!r} outside 1..{proof.n}"
            op = Report if isinstance(by, NecR) else Def
            expected = op(by.agent, source)
            if core != expected:
                shown = op(by.agent, proof.lines[by.line].formula)
                return f"necessitation expects {render(shown)}, found {render(line.formula)}"
            return None
    except _BadRef as exc:
        return str(exc)
    return f"unknown justification {by!r}"


class _BadRef(Exception):
    pass


def check_proof(proof: Proof) -> ProofCheck:
    """Check every line; report the first one that is neither an axiom nor a rule application."""
    cores = [desugar(line.formula) for line in proof.lines]
    for k in range(len(proof.lines)):
        reason = _check_line(proof, k, cores)
        if reason is not None:
            return ProofCheck(False, k, reason)
    return ProofCheck(True)


def proof_from_json(data) -> Proof:
    if not isinstance(data, dict) or set(data) - {"agents", "lines"} or "lines" not in data:
        raise ProofFormatError("proof JSON must be an object with 'agents' and 'lines'")
    n = data.get("agents", 1)
    if not isinstance(n, int) or n < 1:
        raise ProofFormatError("'agents' must be a positive integer")
    lines = []
    for k, entry in enumerate(data["lines"]):
        if not isinstance(entry, dict) or set(entry) != {"formula", "by"}:
            raise ProofFormatError(f"line {k}: expected keys 'formula' and 'by'")
        try:
            formula = parse(entry["formula"])
        except ParseError as exc:
            raise ProofFormatError(f"line {k}: {exc}") from exc
        lines.append(ProofLine(formula, _justification_from_json(entry["by"], k)))
    return Proof(n, tuple(lines))


def _justification_from_json(by, k):
    if isinstance(by, str):
        return Axiom(by)
    if isinstance(by, dict) and len(by) == 1:
        (key, args), = by.items()
        if isinstance(args, list) and len(args) == 2 and all(isinstance(a, int) for a in args):
            if key == "mp":
                return MP(*args)
            if key == "necR":
                return NecR(*args)
            if key == "necD":
                return NecD(*args)
    raise ProofFormatError(f"line {k}: malformed justification {by!r}")


def proof_to_json(proof: Proof) -> dict:
    def by_json(by):
        if isinstance(by, Axiom):
            return by.name
        if isinstance(by, MP):
            return {"mp": [by.premise, by.implication]}
        if isinstance(by, NecR):
            return {"necR": [by.line, by.agent]}
        return {"necD": [by.line, by.agent]}

    return {
        "agents": proof.n,
        "lines": [{"formula": render(line.formula), "by": by_json(line.by)} for line in proof.lines],
    }


def load_proof(path) -> Proof:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofFormatError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return proof_from_json(data)


# -- soundness fuzzing ----------------------------------------------------------


@dataclass
class FuzzReport:
    trials: int
    seed: object
    violations: list = field(default_factory=list)
    per_axiom: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "violations": self.violations,
            "perAxiom": dict(sorted(self.per_axiom.items())),
        }


def soundness_fuzz(
    trials: int = 10_000,
    seed=0,
    agent_counts=(1, 2, 3),
    props=("p", "q", "c"),
    objective_props=("c",),
    pool_size: int = 200,
    depth: int = 3,
    max_states: int = 3,
    necessitate: float = 0.2,
) -> FuzzReport:
    """Check sampled axiom instances (optionally necessitated) in sampled structures.

    Each trial derives its own generator from ``(seed, trial)`` so the report
    does not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    pools = {n: formula_pool(pool_size, seed, props, n, depth) for n in agent_counts}
    report = FuzzReport(trials, seed)
    for t in range(trials):
        rng = random.Random(f"fuzz/{seed}/{t}")
        n = rng.choice(agent_counts)
        name = rng.choice(AXIOM_NAMES)
        instance = axiom_instance(name, rng, pools[n], n, props)
        label = name
        if rng.random() < necessitate:
            op = rng.choice((Report, Def))
            instance = op(rng.randint(1, n), instance)
            label = f"Nec{'R' if op is Report else 'D'}({name})"
        assert name in match_axiom(instance if label == name else instance.body, n), (name, render(instance))
        M = random_structure(
            n,
            max_states,
            max_states,
            props,
            seed=rng.getrandbits(64),
            objective_props=objective_props,
        )
        report.per_axiom[label] = report.per_axiom.get(label, 0) + 1
        verdict = valid_in_model(M, instance)
        if verdict is not True:
            report.violations.append(
                {
                    "trial": t,
                    "axiom": label,
                    "formula": render(instance),
                    "structure": structure_to_json(M),
                    "point": verdict.to_json(),
                }
            )
    return report
