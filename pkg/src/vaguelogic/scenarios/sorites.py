"""The heap: one agent, grain counts as objective states, (reading, times asked) as subjective ones.

``S(n)`` abbreviates ``Pile_n -> R1 Heap``.  Removing a grain lowers the
objective count and bumps the ask counter (saturating at the cap); the new
reading is any reading the sensor allows for the smaller pile.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..checker import Evaluator
from ..errors import StructureError
from ..formula import Formula, Implies, Prop, Report, conjoin
from ..structures import VagueStructure, World, validate
from .sensor import MIDPOINT, SensorModel

HEAP = Prop("Heap")


def pile(n: int) -> Prop:
    return Prop(f"Pile_{n}")


def S(n: int) -> Formula:
    return Implies(pile(n), Report(1, HEAP))


def inductive_conjunction(max_grains: int) -> Formula:
    """The finite version of "for all n > 1, S(n) implies S(n-1)"."""
    return conjoin(*(Implies(S(n), S(n - 1)) for n in range(2, max_grains + 1)))


def threshold_policy(threshold: int) -> Callable:
    """Report a heap iff the reading is at least ``threshold``."""

    def policy(reading, asked):
        return reading >= threshold

    policy.description = {"kind": "threshold", "threshold": threshold}
    return policy


def sticky_policy(threshold: int) -> Callable:
    """Threshold ``threshold`` on the first ask, ``threshold - 1`` afterwards.

    Once asked, the agent keeps answering "heap" for piles that read one step
    lower, so a single removal never flips the first answer.
    """

    def policy(reading, asked):
        return reading >= (threshold if asked == 0 else threshold - 1)

    policy.description = {"kind": "sticky", "threshold": threshold}
    return policy


@dataclass(frozen=True)
class SoritesConfig:
    max_grains: int = 60
    ask_cap: int = 3
    policy: Callable = field(default_factory=lambda: threshold_policy(3))
    sensor: SensorModel = field(default_factory=lambda: SensorModel(mode=MIDPOINT))

    def __post_init__(self):
        if self.max_grains < 2:
            raise ValueError("need at least two grains")
        if self.ask_cap < 0:
            raise ValueError("ask cap must be non-negative")
        for n, r, a in self.states():
            answer = self.policy(r, a)
            if not isinstance(answer, bool):
                raise ValueError(f"policy returned {answer!r} for reading {r}, asked {a}")
            if n == self.max_grains and not answer:
                raise ValueError(f"policy must report a heap at {n} grains (reading {r}, asked {a})")
            if n == 1 and answer:
                raise ValueError(f"policy must not report a heap at 1 grain (reading {r}, asked {a})")

    def states(self):
        for n in range(self.max_grains + 1):
            for r in self.sensor.readings(n):
                for a in range(self.ask_cap + 1):
                    yield n, r, a


@dataclass(frozen=True)
class SoritesModel:
    config: SoritesConfig
    structure: VagueStructure
    states: tuple  # world index -> (grains, reading, asked)
    remove_grain: dict  # world index -> frozenset of successor world indices


def build_sorites_structure(config: SoritesConfig | None = None) -> SoritesModel:
    config = config or SoritesConfig()
    states = tuple(config.states())
    subj = sorted({(r, a) for _, r, a in states})
    subj_index = {s: k for k, s in enumerate(subj)}
    worlds = [World(n, (subj_index[(r, a)],)) for n, r, a in states]
    index = {st: k for k, st in enumerate(states)}
    every = frozenset(range(len(worlds)))

    heap = frozenset(k for k, (_, r, a) in enumerate(states) if config.policy(r, a))
    valuation = {"Heap": (heap,)}
    for n in range(config.max_grains + 1):
        valuation[f"Pile_{n}"] = (frozenset(k for k, st in enumerate(states) if st[0] == n),)
    M = VagueStructure(
        n=1,
        objective_labels=[str(n) for n in range(config.max_grains + 1)],
        subjective_labels=[[f"r{r}a{a}" for r, a in subj]],
        worlds=worlds,
        plausible=[every],
        valuation=valuation,
        objective_props=frozenset(k for k in valuation if k != "Heap"),
    )
    problems = validate(M)
    if problems:
        raise StructureError(f"sorites structure is invalid: {problems[0].message}")

    remove = {}
    for k, (n, _, a) in enumerate(states):
        if n == 0:
            remove[k] = frozenset()
            continue
        a2 = min(a + 1, config.ask_cap)
        remove[k] = frozenset(index[(n - 1, r2, a2)] for r2 in config.sensor.readings(n - 1))
    return SoritesModel(config, M, states, remove)


def induction_failure_points(model: SoritesModel) -> list:
    """Pairs ``(w, w')`` with ``w'`` one grain smaller where ``R1 Heap`` goes from true to false."""
    ev = Evaluator(model.structure)
    reports = ev.truth_masks(Report(1, HEAP))[0]
    out = []
    for w in sorted(model.remove_grain):
        if reports >> w & 1:
            for v in sorted(model.remove_grain[w]):
                if not reports >> v & 1:
                    out.append((w, v))
    return out


def sorites_report(model: SoritesModel) -> dict:
    M = model.structure
    N = model.config.max_grains
    ev = Evaluator(M)
    full = M.all_mask
    by_grains = lambda n: [k for k, st in enumerate(model.states) if st[0] == n]  # noqa: E731
    top_ok = ev.truth_masks(S(N))[0] == full
    bottom_ok = all(not ev.holds(w, 1, Report(1, HEAP)) for w in by_grains(1))
    conj = ev.truth_masks(inductive_conjunction(N))[0]
    vacuous = all(ev.holds(w, 1, S(2)) and not ev.holds(w, 1, S(1)) for w in by_grains(1))
    failures = induction_failure_points(model)

    def point(w):
        n, r, a = model.states[w]
        return {"world": w, "grains": n, "reading": r, "asked": a}

    return {
        "thresholdPolicy": getattr(model.config.policy, "description", {"kind": "custom"}),
        "maxGrains": N,
        "failurePairs": [{"from": point(w), "to": point(v)} for w, v in failures],
        "failureTransitions": sorted(
            {(model.states[w][0], model.states[v][0]) for w, v in failures}, reverse=True
        ),
        "extremesOk": top_ok and bottom_ok,
        "inductiveStepFalsified": conj != full,
        "vacuousInstanceOk": vacuous,
    }
