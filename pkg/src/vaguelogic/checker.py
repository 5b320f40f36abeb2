"""Model checking of ``(M, w, i) |= phi`` plus validity, agent-independence and degrees.

Evaluation computes, for each subformula, one bitmask of satisfying worlds
per agent.  The cache lives in an :class:`Evaluator` and is scoped to the
structure it was built for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import AgentIndexError, UnknownPropositionError, VagueLogicError
from .formula import (
    And,
    Def,
    FalseLit,
    Formula,
    Not,
    Prop,
    Report,
    TrueLit,
    agents,
    desugar,
    subformulas,
)
from .structures import VagueStructure, iter_bits


@dataclass(frozen=True)
class EvalPoint:
    world: int
    agent: int

    def to_json(self):
        return {"world": self.world, "agent": self.agent}


@dataclass(frozen=True)
class Degree:
    """Number of agents (out of ``agents``) at which a formula holds."""

    count: int
    agents: int

    def __post_init__(self):
        if not 0 <= self.count <= self.agents:
            raise ValueError(f"degree count {self.count} outside 0..{self.agents}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.agents)

    def complement(self) -> "Degree":
        return Degree(self.agents - self.count, self.agents)

    def __str__(self):
        return f"{self.count}/{self.agents}"


class Evaluator:
    """Caches truth sets of subformulas for a single structure."""

    def __init__(self, M: VagueStructure):
        self.M = M
        self._cache = {}

    def truth_masks(self, phi: Formula) -> tuple:
        """Per agent (index ``i-1``), the bitmask of worlds ``w`` with ``(M, w, i) |= phi``."""
        core = desugar(phi)
        self._check_agents(core)
        for sub in subformulas(core):
            if sub not in self._cache:
                self._cache[sub] = self._compute(sub)
        return self._cache[core]

    def _check_agents(self, core):
        bad = [j for j in agents(core) if j > self.M.n]
        if bad:
            raise AgentIndexError(f"formula mentions agent {max(bad)} but the structure has {self.M.n}")

    def _compute(self, sub):
        M = self.M
        full = M.all_mask
        if isinstance(sub, TrueLit):
            return (full,) * M.n
        if isinstance(sub, FalseLit):
            return (0,) * M.n
        if isinstance(sub, Prop):
            try:
                return M.valuation_masks[sub.name]
            except KeyError:
                raise UnknownPropositionError(f"proposition {sub.name!r} has no valuation") from None
        if isinstance(sub, Not):
            return tuple(full & ~m for m in self._cache[sub.arg])
        if isinstance(sub, And):
            left, right = self._cache[sub.left], self._cache[sub.right]
            return tuple(a & b for a, b in zip(left, right))
        if isinstance(sub, Report):
            target = self._cache[sub.body][sub.agent - 1]
            neighbours = M.report_masks[sub.agent - 1]
        elif isinstance(sub, Def):
            target = self._cache[sub.body][sub.agent - 1]
            neighbours = M.def_masks
        else:
            raise TypeError(f"unexpected node {sub!r} after desugaring")
        mask = 0
        for k, nb in enumerate(neighbours):
            if nb & ~target == 0:
                mask |= 1 << k
        return (mask,) * M.n

    def holds(self, w, i: int, phi: Formula) -> bool:
        k = self.M.world_index(w)
        self.M.check_agent(i)
        return bool(self.truth_masks(phi)[i - 1] >> k & 1)


def evaluate(M: VagueStructure, w, i: int, phi: Formula) -> bool:
    """Truth of ``phi`` at world ``w`` according to agent ``i``."""
    return Evaluator(M).holds(w, i, phi)


def valid_in_model(M: VagueStructure, phi: Formula):
    """``True`` if ``phi`` holds at every point, else the first falsifying :class:`EvalPoint`.

    Points are ordered by world index, then agent.
    """
    masks = Evaluator(M).truth_masks(phi)
    full = M.all_mask
    if all(m == full for m in masks):
        return True
    for k in range(len(M.worlds)):
        for i in range(1, M.n + 1):
            if not masks[i - 1] >> k & 1:
                return EvalPoint(k, i)
    raise AssertionError("unreachable")


def agent_independent_in_model(M: VagueStructure, phi: Formula) -> bool:
    masks = Evaluator(M).truth_masks(phi)
    return all(m == masks[0] for m in masks)


def degree(M: VagueStructure, w, phi: Formula) -> Degree:
    """Fraction of agents at whose point ``(w, i)`` the formula holds."""
    k = M.world_index(w)
    masks = Evaluator(M).truth_masks(phi)
    return Degree(sum(m >> k & 1 for m in masks), M.n)


def expected_degree(M: VagueStructure, o: int, dist: Mapping, phi: Formula) -> Fraction:
    """Expected degree of ``phi`` over the worlds with objective state ``o``.

    ``dist`` maps world indices to probabilities; it must be supported on
    exactly the worlds whose objective coordinate is ``o`` and sum to 1.
    """
    if o not in M.objective_class_masks:
        raise VagueLogicError(f"objective state {o!r} has no worlds")
    support = set(iter_bits(M.objective_class_masks[o]))
    weights = {M.world_index(w): Fraction(p) for w, p in dist.items()}
    positive = {w for w, p in weights.items() if p != 0}
    if any(p < 0 for p in weights.values()):
        raise VagueLogicError("distribution has negative weights")
    if positive != support:
        raise VagueLogicError(
            f"distribution support {sorted(positive)} differs from worlds with objective state {o}: {sorted(support)}"
        )
    if sum(weights.values()) != 1:
        raise VagueLogicError(f"distribution sums to {sum(weights.values())}, not 1")
    ev = Evaluator(M)
    masks = ev.truth_masks(phi)
    total = Fraction(0)
    for w, p in weights.items():
        total += p * Fraction(sum(m >> w & 1 for m in masks), M.n)
    return total
