"""Labelled tableau for validity of report/definitely formulas.

A branch holds worlds as coordinate tuples ``(o, s_1, ..., s_n)`` of
symbolic labels, so ``~_o`` and ``~_j`` are equivalence relations by
construction.  Facts are attached to points ``(world, agent)``; modal facts
are stored per class because their truth ignores the evaluating agent:
``R_j`` facts on agent ``j``'s subjective class, ``D_j`` facts on the
objective class.

Rules
  * alpha/beta decomposition at a point (beta uses semantic branching);
  * ``R_j g`` pushes ``g`` to ``(w', j)`` for every plausible ``w'`` in the
    class, creating a plausible witness when the class has none (seriality);
  * ``~R_j g`` creates a fresh plausible world in the class carrying ``~g``;
  * ``D_j g`` pushes ``g`` to ``(w', j)`` for every world sharing ``o``;
  * ``~D_j g`` creates a fresh world with the same ``o`` carrying ``~g``;
  * ``D_j g`` with ``g`` necessarily agent-independent also adds ``g`` at the
    current point;
  * once a branch is otherwise saturated, each point receives instances of
    the D6 disjunction built from the ``D``-subformulas present there.

A clash is ``f`` and ``~f`` at one point (or class), ``false`` at a point,
two agents' opposite literals for an objective proposition in one objective
class, or a locality conflict.  Every rule is sound, so a closed tableau
proves validity.  An open saturated branch is turned into a structure and
re-checked with the model checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice, product

from ..checker import evaluate
from ..errors import AgentIndexError
from ..formula import (
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
    disjoin,
    is_nec_agent_independent,
    props,
    walk,
)
from ..parser import render
from ..structures import VagueStructure, World, validate
from .search import Witness

DEFAULT_BUDGET = 200_000


class _Closed(Exception):
    pass


class _OutOfBudget(Exception):
    pass


@dataclass
class TableauResult:
    status: str  # "valid", "open" or "unknown"
    nodes: int
    closures: int = 0
    clashes: list = field(default_factory=list)
    hint: Witness | None = None

    @property
    def valid(self):
        return self.status == "valid"

    def trace_json(self):
        return {"closedBranches": self.closures, "clashes": self.clashes}


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.nodes = 0
        self.closures = 0
        self.clashes = []

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget()


class _Branch:
    def __init__(self, n, objective, counter, d6_limit):
        self.n = n
        self.objective = objective
        self.counter = counter
        self.d6_limit = d6_limit
        self.worlds = []
        self.fresh = [0] * (n + 1)
        self.point = {}
        self.lits = {}
        self.objlits = {}
        self.rpos = {}
        self.rneg = {}
        self.dpos = {}
        self.dneg = {}
        self.plaus = set()
        self.agenda = []
        self.betas = []
        self.d6_done = set()

    def copy(self):
        b = _Branch.__new__(_Branch)
        b.n, b.objective, b.counter, b.d6_limit = self.n, self.objective, self.counter, self.d6_limit
        b.worlds = list(self.worlds)
        b.fresh = list(self.fresh)
        b.point = {k: set(v) for k, v in self.point.items()}
        b.lits = {k: dict(v) for k, v in self.lits.items()}
        b.objlits = {k: dict(v) for k, v in self.objlits.items()}
        b.rpos = {k: set(v) for k, v in self.rpos.items()}
        b.rneg = {k: set(v) for k, v in self.rneg.items()}
        b.dpos = {k: set(v) for k, v in self.dpos.items()}
        b.dneg = {k: set(v) for k, v in self.dneg.items()}
        b.plaus = set(self.plaus)
        b.agenda = list(self.agenda)
        b.betas = list(self.betas)
        b.d6_done = set(self.d6_done)
        return b

    # -- worlds --------------------------------------------------------------

    def _label(self, sort):
        label = self.fresh[sort]
        self.fresh[sort] += 1
        return label

    def new_world(self, o=None, shared_agent=None, shared_state=None, plausible_for=None):
        coords = [o if o is not None else self._label(0)]
        for j in range(1, self.n + 1):
            coords.append(shared_state if j == shared_agent else self._label(j))
        w = len(self.worlds)
        self.worlds.append(tuple(coords))
        if plausible_for is not None:
            self.plaus.add((plausible_for, w))
        for k, h in sorted(self.dpos.get(coords[0], ()), key=_fact_key):
            self.agenda.append((w, k, h))
        for j in range(1, self.n + 1):
            if (j, w) in self.plaus:
                for g in sorted(self.rpos.get((j, coords[j]), ()), key=render):
                    self.agenda.append((w, j, g))
        return w

    def clash(self, why):
        self.counter.closures += 1
        if len(self.counter.clashes) < 20:
            self.counter.clashes.append(why)
        raise _Closed()

    # -- facts ---------------------------------------------------------------

    def add(self, w, i, f):
        self.counter.tick()
        if isinstance(f, TrueLit):
            return
        if isinstance(f, FalseLit):
            self.clash(f"false at world {w} for agent {i}")
        if isinstance(f, Not) and isinstance(f.arg, TrueLit):
            self.clash(f"~true at world {w} for agent {i}")
        if isinstance(f, Not) and isinstance(f.arg, FalseLit):
            return
        if isinstance(f, Report):
            return self.add_report(w, f.agent, f.body, True)
        if isinstance(f, Not) and isinstance(f.arg, Report):
            return self.add_report(w, f.arg.agent, f.arg.body, False)
        if isinstance(f, Def):
            if is_nec_agent_independent(f.body):
                self.agenda.append((w, i, f.body))
            return self.add_def(w, f.agent, f.body, True)
        if isinstance(f, Not) and isinstance(f.arg, Def):
            return self.add_def(w, f.arg.agent, f.arg.body, False)

        facts = self.point.setdefault((w, i), set())
        if f in facts:
            return
        opposite = f.arg if isinstance(f, Not) else Not(f)
        if opposite in facts:
            self.clash(f"{render(f)} and its negation at world {w} for agent {i}")
        facts.add(f)
        if isinstance(f, Prop):
            self.add_literal(w, i, f.name, True)
        elif isinstance(f, Not) and isinstance(f.arg, Prop):
            self.add_literal(w, i, f.arg.name, False)
        elif isinstance(f, Not) and isinstance(f.arg, Not):
            self.agenda.append((w, i, f.arg.arg))
        elif isinstance(f, And):
            self.agenda.append((w, i, f.left))
            self.agenda.append((w, i, f.right))
        elif isinstance(f, Not) and isinstance(f.arg, And):
            self.betas.append((w, i, f))

    def add_literal(self, w, i, name, value):
        o = self.worlds[w][0]
        if name in self.objective:
            seen = self.objlits.setdefault(o, {})
            if seen.get(name, value) != value:
                self.clash(f"objective {name} both true and false in objective class {o}")
            seen[name] = value
            return
        for v, coords in enumerate(self.worlds):
            if v != w and coords[0] == o and coords[i] == self.worlds[w][i]:
                if self.lits.get((v, i), {}).get(name, value) != value:
                    self.clash(f"locality: {name} differs for agent {i} between worlds {v} and {w}")
        self.lits.setdefault((w, i), {})[name] = value

    def add_report(self, w, j, g, positive):
        c = self.worlds[w][j]
        key = (j, c)
        pos = self.rpos.setdefault(key, set())
        neg = self.rneg.setdefault(key, set())
        if positive:
            if g in pos:
                return
            if g in neg:
                self.clash(f"R{j} {render(g)} and its negation for agent {j}'s state {c}")
            pos.add(g)
            members = [v for v, coords in enumerate(self.worlds) if coords[j] == c and (j, v) in self.plaus]
            if not members:
                self.new_world(shared_agent=j, shared_state=c, plausible_for=j)
            else:
                for v in members:
                    self.agenda.append((v, j, g))
        else:
            if g in neg:
                return
            if g in pos:
                self.clash(f"R{j} {render(g)} and its negation for agent {j}'s state {c}")
            neg.add(g)
            v = self.new_world(shared_agent=j, shared_state=c, plausible_for=j)
            self.agenda.append((v, j, Not(g)))

    def add_def(self, w, j, g, positive):
        o = self.worlds[w][0]
        pos = self.dpos.setdefault(o, set())
        neg = self.dneg.setdefault(o, set())
        if positive:
            if (j, g) in pos:
                return
            if (j, g) in neg:
                self.clash(f"D{j} {render(g)} and its negation in objective class {o}")
            pos.add((j, g))
            for v, coords in enumerate(self.worlds):
                if coords[0] == o:
                    self.agenda.append((v, j, g))
        else:
            if (j, g) in neg:
                return
            if (j, g) in pos:
                self.clash(f"D{j} {render(g)} and its negation in objective class {o}")
            neg.add((j, g))
            v = self.new_world(o=o)
            self.agenda.append((v, j, Not(g)))

    def holds_syntactically(self, w, i, f):
        if isinstance(f, Not) and isinstance(f.arg, Report):
            return f.arg.body in self.rneg.get((f.arg.agent, self.worlds[w][f.arg.agent]), ())
        if isinstance(f, Not) and isinstance(f.arg, Def):
            return (f.arg.agent, f.arg.body) in self.dneg.get(self.worlds[w][0], ())
        if isinstance(f, Report):
            return f.body in self.rpos.get((f.agent, self.worlds[w][f.agent]), ())
        if isinstance(f, Def):
            return (f.agent, f.body) in self.dpos.get(self.worlds[w][0], ())
        return f in self.point.get((w, i), ())

    # -- saturation ----------------------------------------------------------

    def drain(self):
        while self.agenda:
            w, i, f = self.agenda.pop(0)
            self.add(w, i, f)

    def d6_instances(self, w, i):
        bodies = {k: set() for k in range(1, self.n + 1)}
        sources = list(self.point.get((w, i), ()))
        for k, h in self.dpos.get(self.worlds[w][0], set()) | self.dneg.get(self.worlds[w][0], set()):
            sources.append(Def(k, h))
        for f in sources:
            for node in walk(f):
                if isinstance(node, Def):
                    bodies[node.agent].add(node.body)
        if any(not bodies[k] for k in bodies):
            return []
        choices = [sorted(bodies[k], key=render) for k in range(1, self.n + 1)]
        out = []
        for combo in islice(product(*choices), self.d6_limit):
            inst = disjoin(*(Not(And(Def(k + 1, b), Not(b))) for k, b in enumerate(combo)))
            out.append(desugar(inst))
        return out


def _fact_key(fact):
    k, h = fact
    return (k, render(h))


def _saturate(branch):
    """Return an open saturated branch extending ``branch``, or ``None`` if all close."""
    while True:
        try:
            branch.drain()
        except _Closed:
            return None
        pending = None
        while branch.betas:
            w, i, f = branch.betas[0]
            a, b = f.arg.left, f.arg.right
            if branch.holds_syntactically(w, i, Not(a)) or branch.holds_syntactically(w, i, Not(b)):
                branch.betas.pop(0)
                continue
            pending = branch.betas.pop(0)
            break
        if pending is not None:
            w, i, f = pending
            a, b = f.arg.left, f.arg.right
            branch.counter.tick()
            left = branch.copy()
            left.agenda.append((w, i, Not(a)))
            result = _saturate(left)
            if result is not None:
                return result
            right = branch.copy()
            right.agenda.append((w, i, a))
            right.agenda.append((w, i, Not(b)))
            return _saturate(right)
        points = sorted(p for p in branch.point if p not in branch.d6_done)
        if not points:
            return branch
        for w, i in points:
            branch.d6_done.add((w, i))
            for inst in branch.d6_instances(w, i):
                branch.agenda.append((w, i, inst))


def _extract(branch, names, root_agent):
    n = branch.n
    relabel = [dict() for _ in range(n + 1)]
    worlds = []
    for coords in branch.worlds:
        mapped = []
        for sort, label in enumerate(coords):
            mapped.append(relabel[sort].setdefault(label, len(relabel[sort])))
        worlds.append(World(mapped[0], tuple(mapped[1:])))
    plausible = []
    for j in range(1, n + 1):
        ps = {w for (a, w) in branch.plaus if a == j}
        classes = {}
        for w, coords in enumerate(branch.worlds):
            classes.setdefault(coords[j], []).append(w)
        for members in classes.values():
            if not ps.intersection(members):
                ps.add(members[0])
        plausible.append(ps)
    valuation = {}
    for name in names:
        if name in branch.objective:
            truth = {
                w for w, coords in enumerate(branch.worlds) if branch.objlits.get(coords[0], {}).get(name) is True
            }
            valuation[name] = [truth] * n
        else:
            per_agent = []
            for i in range(1, n + 1):
                truth = set()
                for w, coords in enumerate(branch.worlds):
                    for v, other in enumerate(branch.worlds):
                        if other[0] == coords[0] and other[i] == coords[i]:
                            if branch.lits.get((v, i), {}).get(name) is True:
                                truth.add(w)
                per_agent.append(truth)
            valuation[name] = per_agent
    M = VagueStructure(
        n=n,
        objective_labels=[f"o{k}" for k in range(len(relabel[0]))],
        subjective_labels=[[f"s{j}_{k}" for k in range(len(relabel[j]))] for j in range(1, n + 1)],
        worlds=worlds,
        plausible=plausible,
        valuation=valuation,
        objective_props=frozenset(name for name in names if name in branch.objective),
    )
    return Witness(M, 0, root_agent)


def tableau_valid(
    phi: Formula,
    n: int,
    budget: int = DEFAULT_BUDGET,
    objective=(),
    d6_limit: int = 4,
) -> TableauResult:
    """Try to close a tableau for ``~phi`` at every starting agent.

    ``valid`` means every branch closed; ``open`` carries a countermodel
    read off a saturated branch (already checked against the evaluator);
    ``unknown`` means the node budget ran out.
    """
    if budget < 1:
        raise ValueError("tableau budget must be positive")
    core = desugar(phi)
    if agents(core) and max(agents(core)) > n:
        raise AgentIndexError(f"formula mentions agent {max(agents(core))} but n = {n}")
    counter = _Counter(budget)
    objective = frozenset(objective)
    names = sorted(props(core))
    target = desugar(Not(phi))
    try:
        for i in range(1, n + 1):
            branch = _Branch(n, objective, counter, d6_limit)
            w0 = branch.new_world()
            branch.agenda.append((w0, i, target))
            open_branch = _saturate(branch)
            if open_branch is not None:
                hint = _extract(open_branch, names, i)
                problems = validate(hint.structure)
                if problems or not evaluate(hint.structure, hint.world, hint.agent, Not(phi)):
                    raise AssertionError(
                        f"tableau countermodel failed to re-check for {render(phi)}: {problems}"
                    )
                return TableauResult("open", counter.nodes, counter.closures, counter.clashes, hint)
    except _OutOfBudget:
        return TableauResult("unknown", counter.nodes, counter.closures, counter.clashes)
    return TableauResult("valid", counter.nodes, counter.closures, counter.clashes)
