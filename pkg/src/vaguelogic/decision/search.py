"""Bounded countermodel search over finite vagueness structures.

Frames (world sets) are enumerated in canonical order: by world count, then
lexicographically, keeping only one representative per relabeling of the
objective and subjective states (each coordinate's labels first appear in
increasing order).  For each frame, the plausibility sets and valuations are
left to a SAT solver: the formula is unfolded over the frame into a CNF
whose models are exactly the valid structures on that frame that falsify the
formula somewhere.  Every witness is re-checked with the model checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import pycosat

from ..checker import evaluate
from ..errors import AgentIndexError
from ..formula import And, Def, FalseLit, Formula, Not, Prop, Report, TrueLit, agents, desugar, props
from ..structures import VagueStructure, World, from_local_valuation


@dataclass(frozen=True)
class SearchBounds:
    max_objective: int = 3
    max_subjective: int = 3
    max_worlds: int = 6
    n: int = 1

    def __post_init__(self):
        if min(self.max_objective, self.max_subjective, self.max_worlds, self.n) < 1:
            raise ValueError("search bounds must be positive")
        if self.max_worlds > self.max_objective * self.max_subjective ** self.n:
            raise ValueError("max_worlds exceeds the number of available coordinate tuples")

    @classmethod
    def parse(cls, text: str, n: int) -> "SearchBounds":
        o, s, w = (int(x) for x in text.split(","))
        return cls(o, s, w, n)


DEFAULT_BOUNDS = (3, 3, 6)


@dataclass(frozen=True)
class Witness:
    """A structure with an evaluation point."""

    structure: VagueStructure
    world: int
    agent: int

    def to_json(self):
        out = self.structure.to_json()
        out["world"] = self.world
        out["agent"] = self.agent
        return out


@dataclass(frozen=True)
class SearchResult:
    witness: Witness | None
    complete: bool  # False if the frame budget ran out first
    frames: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def canonical_frames(n: int, max_objective: int, max_subjective: int, size: int):
    """World sets of exactly ``size`` tuples, one per state-relabeling class.

    A set qualifies when, listing its tuples in sorted order, every
    coordinate introduces labels in the order 0, 1, 2, ...  Relabeling each
    coordinate by order of first appearance (objective first) maps any world
    set onto such a representative.
    """
    cells = list(product(range(max_objective), *[range(max_subjective)] * n))
    start_max = (-1,) * (n + 1)

    def extend(start, seen_max, chosen):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for c in range(start, len(cells) - (size - len(chosen)) + 1):
            cell = cells[c]
            if all(v <= m + 1 for v, m in zip(cell, seen_max)):
                chosen.append(cell)
                yield from extend(c + 1, tuple(max(v, m) for v, m in zip(cell, seen_max)), chosen)
                chosen.pop()

    yield from extend(0, start_max, [])


class _Circuit:
    """Tseitin encoding with constant folding; literals are ints or Python bools."""

    def __init__(self):
        self.nvars = 0
        self.clauses = []
        self._gates = {}

    def var(self):
        self.nvars += 1
        return self.nvars

    @staticmethod
    def neg(lit):
        if lit is True:
            return False
        if lit is False:
            return True
        return -lit

    def conj(self, lits):
        out = []
        for lit in lits:
            if lit is False:
                return False
            if lit is True:
                continue
            out.append(lit)
        if not out:
            return True
        key = tuple(sorted(set(out)))
        if len(key) == 1:
            return key[0]
        if any(-x in key for x in key):
            return False
        if key in self._gates:
            return self._gates[key]
        g = self.var()
        for lit in key:
            self.clauses.append([-g, lit])
        self.clauses.append([g] + [-lit for lit in key])
        self._gates[key] = g
        return g

    def disj(self, lits):
        return self.neg(self.conj([self.neg(x) for x in lits]))


class _FrameEncoding:
    def __init__(self, frame, n, core, objective, plausible_all):
        self.frame = frame
        self.n = n
        self.c = _Circuit()
        self.objective = objective
        self.by_o = {}
        self.by_s = [dict() for _ in range(n)]
        for k, cell in enumerate(frame):
            self.by_o.setdefault(cell[0], []).append(k)
            for j in range(n):
                self.by_s[j].setdefault(cell[j + 1], []).append(k)
        if plausible_all:
            self.plaus = [[True] * len(frame) for _ in range(n)]
        else:
            self.plaus = [[self.c.var() for _ in frame] for _ in range(n)]
            for j in range(n):
                for members in self.by_s[j].values():
                    self.c.clauses.append([self.plaus[j][k] for k in members])
        self.prop_vars = {}
        self.memo = {}

    def prop(self, name, k, i):
        cell = self.frame[k]
        key = (name, cell[0]) if name in self.objective else (name, i, cell[0], cell[i])
        if key not in self.prop_vars:
            self.prop_vars[key] = self.c.var()
        return self.prop_vars[key]

    def value(self, sub, k, i):
        if isinstance(sub, TrueLit):
            return True
        if isinstance(sub, FalseLit):
            return False
        if isinstance(sub, Prop):
            return self.prop(sub.name, k, i)
        if isinstance(sub, Report):
            key = (sub, "s", self.frame[k][sub.agent])
        elif isinstance(sub, Def):
            key = (sub, "o", self.frame[k][0])
        else:
            key = (sub, k, i)
        if key in self.memo:
            return self.memo[key]
        c = self.c
        if isinstance(sub, Not):
            out = c.neg(self.value(sub.arg, k, i))
        elif isinstance(sub, And):
            left = self.value(sub.left, k, i)
            out = False if left is False else c.conj([left, self.value(sub.right, k, i)])
        elif isinstance(sub, Report):
            j = sub.agent
            members = self.by_s[j - 1][self.frame[k][j]]
            out = c.conj(
                [c.disj([c.neg(self.plaus[j - 1][m]), self.value(sub.body, m, j)]) for m in members]
            )
        else:
            members = self.by_o[self.frame[k][0]]
            out = c.conj([self.value(sub.body, m, sub.agent) for m in members])
        self.memo[key] = out
        return out


def _decode(frame, n, names, objective, enc, model):
    true_vars = {v for v in model if v > 0}

    def lit_value(lit):
        if lit is True or lit is False:
            return lit
        return (lit in true_vars) if lit > 0 else (-lit not in true_vars)

    worlds = [World(cell[0], tuple(cell[1:])) for cell in frame]
    plausible = [{k for k in range(len(frame)) if lit_value(enc.plaus[j][k])} for j in range(n)]
    local = {}
    obj = {}
    n_obj = 1 + max(cell[0] for cell in frame)
    n_subj = [1 + max(cell[j + 1] for cell in frame) for j in range(n)]
    for name in names:
        if name in objective:
            obj[name] = {
                o for o in range(n_obj) if (name, o) in enc.prop_vars and lit_value(enc.prop_vars[(name, o)])
            }
        else:
            local[name] = [
                {
                    (cell[0], cell[i])
                    for cell in frame
                    if (name, i, cell[0], cell[i]) in enc.prop_vars
                    and lit_value(enc.prop_vars[(name, i, cell[0], cell[i])])
                }
                for i in range(1, n + 1)
            ]
    return from_local_valuation(
        n,
        [f"o{k}" for k in range(n_obj)],
        [[f"s{j + 1}_{k}" for k in range(n_subj[j])] for j in range(n)],
        worlds,
        plausible,
        local,
        obj,
    )


def find_model(
    phi: Formula,
    bounds: SearchBounds,
    objective=(),
    plausible_all: bool = False,
    max_frames: int | None = None,
) -> SearchResult:
    """First point (in canonical frame order) of a valid structure satisfying ``phi``.

    ``objective`` names propositions constrained to be objective.  With
    ``plausible_all`` only structures with ``P_i = W`` are considered.
    """
    core = desugar(phi)
    if agents(core) and max(agents(core)) > bounds.n:
        raise AgentIndexError(f"formula mentions agent {max(agents(core))} but bounds allow {bounds.n}")
    names = sorted(props(core))
    objective = frozenset(objective)
    frames = 0
    for size in range(1, bounds.max_worlds + 1):
        for frame in canonical_frames(bounds.n, bounds.max_objective, bounds.max_subjective, size):
            if max_frames is not None and frames >= max_frames:
                return SearchResult(None, False, frames)
            frames += 1
            enc = _FrameEncoding(frame, bounds.n, core, objective, plausible_all)
            goal = [enc.value(core, k, i) for k in range(size) for i in range(1, bounds.n + 1)]
            if all(g is False for g in goal):
                continue
            clauses = list(enc.c.clauses)
            if not any(g is True for g in goal):
                clauses.append([g for g in goal if g is not False])
            model = pycosat.solve(clauses) if clauses else []
            if model == "UNSAT":
                continue
            structure = _decode(frame, bounds.n, names, objective, enc, model)
            true_vars = {v for v in model if v > 0}
            for idx, g in enumerate(goal):
                if g is True or (g is not False and ((g in true_vars) if g > 0 else (-g not in true_vars))):
                    k, i = divmod(idx, bounds.n)
                    witness = Witness(structure, k, i + 1)
                    if not evaluate(structure, k, i + 1, phi):
                        raise AssertionError("search witness does not satisfy the formula")
                    return SearchResult(witness, True, frames)
            raise AssertionError("SAT model satisfies no goal literal")
    return SearchResult(None, True, frames)


def find_countermodel(phi: Formula, bounds: SearchBounds, **kwargs) -> SearchResult:
    """Search for a point falsifying ``phi``; see :func:`find_model`."""
    return find_model(Not(phi), bounds, **kwargs)
