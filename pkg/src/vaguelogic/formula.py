"""Abstract syntax for the report/definitely modal language and syntactic analyses.

Formulas are immutable trees.  ``Or`` and ``Implies`` exist only on the
surface; :func:`desugar` rewrites them into ``Not``/``And``.  Agent indices
are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Union


@dataclass(frozen=True)
class TrueLit:
    def __repr__(self):
        return "TrueLit()"


@dataclass(frozen=True)
class FalseLit:
    def __repr__(self):
        return "FalseLit()"


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Report:
    """``R_agent body``: the agent would report ``body``."""

    agent: int
    body: "Formula"


@dataclass(frozen=True)
class Def:
    """``D_agent body``: according to the agent, ``body`` is definitely the case."""

    agent: int
    body: "Formula"


Formula = Union[TrueLit, FalseLit, Prop, Not, And, Or, Implies, Report, Def]

TRUE = TrueLit()
FALSE = FalseLit()

BINARY = (And, Or, Implies)
MODAL = (Report, Def)


def children(phi: Formula) -> tuple:
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, MODAL):
        return (phi.body,)
    return ()


def disjoin(*parts: Formula) -> Formula:
    """Right-associated disjunction of one or more formulas."""
    if not parts:
        return FALSE
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Or(part, result)
    return result


def conjoin(*parts: Formula) -> Formula:
    if not parts:
        return TRUE
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = And(part, result)
    return result


def desugar(phi: Formula) -> Formula:
    """Eliminate ``Or`` and ``Implies`` using their classical definitions."""
    if isinstance(phi, (TrueLit, FalseLit, Prop)):
        return phi
    if isinstance(phi, Not):
        return Not(desugar(phi.arg))
    if isinstance(phi, And):
        return And(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Or):
        return Not(And(Not(desugar(phi.left)), Not(desugar(phi.right))))
    if isinstance(phi, Implies):
        return Not(And(desugar(phi.left), Not(desugar(phi.right))))
    if isinstance(phi, Report):
        return Report(phi.agent, desugar(phi.body))
    if isinstance(phi, Def):
        return Def(phi.agent, desugar(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def subformulas(phi: Formula) -> list:
    """Distinct subtrees of ``phi``, each once, children before parents."""
    seen = set()
    order = []

    def visit(node):
        if node in seen:
            return
        for child in children(node):
            visit(child)
        seen.add(node)
        order.append(node)

    visit(phi)
    return order


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def modal_depth(phi: Formula) -> int:
    if isinstance(phi, MODAL):
        return 1 + modal_depth(phi.body)
    return max((modal_depth(c) for c in children(phi)), default=0)


def agents(phi: Formula) -> frozenset:
    return frozenset(node.agent for node in walk(phi) if isinstance(node, MODAL))


def props(phi: Formula) -> frozenset:
    return frozenset(node.name for node in walk(phi) if isinstance(node, Prop))


def size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


def is_nec_agent_independent(phi: Formula) -> bool:
    """Boolean combination of ``R_j``/``D_j`` formulas (literals allowed)."""
    if isinstance(phi, MODAL):
        return True
    if isinstance(phi, (TrueLit, FalseLit)):
        return True
    if isinstance(phi, Prop):
        return False
    return all(is_nec_agent_independent(c) for c in children(phi))


def propositional_atoms(phi: Formula) -> list:
    """Maximal modal subformulas and bare primitives of ``desugar(phi)``, in first-seen order."""
    atoms = []
    seen = set()

    def visit(node):
        if isinstance(node, (Prop, Report, Def)):
            if node not in seen:
                seen.add(node)
                atoms.append(node)
            return
        for child in children(node):
            visit(child)

    visit(desugar(phi))
    return atoms


def _truth(node, assignment):
    if isinstance(node, TrueLit):
        return True
    if isinstance(node, FalseLit):
        return False
    if isinstance(node, Not):
        return not _truth(node.arg, assignment)
    if isinstance(node, And):
        return _truth(node.left, assignment) and _truth(node.right, assignment)
    return assignment[node]


def is_prop_tautology(phi: Formula) -> bool:
    """Truth-table check treating maximal modal subformulas and primitives as atoms."""
    core = desugar(phi)
    atoms = propositional_atoms(core)
    for values in product((False, True), repeat=len(atoms)):
        if not _truth(core, dict(zip(atoms, values))):
            return False
    return True


def implication_parts(phi: Formula):
    """Return ``(a, b)`` if desugared ``phi`` has the shape of ``a -> b``, else ``None``."""
    if isinstance(phi, Not) and isinstance(phi.arg, And) and isinstance(phi.arg.right, Not):
        return phi.arg.left, phi.arg.right.arg
    return None


def disjunction_parts(phi: Formula):
    """Return ``(a, b)`` if desugared ``phi`` has the shape of ``a | b``, else ``None``."""
    if (
        isinstance(phi, Not)
        and isinstance(phi.arg, And)
        and isinstance(phi.arg.left, Not)
        and isinstance(phi.arg.right, Not)
    ):
        return phi.arg.left.arg, phi.arg.right.arg
    return None
