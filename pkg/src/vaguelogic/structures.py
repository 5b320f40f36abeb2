"""Finite vagueness structures.

A world is a coordinate tuple ``(o, s_1, ..., s_n)`` of indices into the
objective and per-agent subjective label lists.  Worlds are addressed by
their position in ``VagueStructure.worlds``; agents are 1-based.

Shape problems (index ranges, duplicate worlds, ragged lists) raise
:class:`StructureError` on construction.  Semantic constraints are checked by
:func:`validate`, which returns violations as data.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import AgentIndexError, StructureError, UnknownWorldError


@dataclass(frozen=True, order=True)
class World:
    o: int
    s: tuple

    @property
    def coords(self) -> tuple:
        return (self.o, *self.s)

    def subjective(self, agent: int) -> int:
        return self.s[agent - 1]


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    agent: int | None = None
    worlds: tuple = ()
    prop: str | None = None

    def to_json(self):
        out = {"kind": self.kind, "message": self.message}
        if self.agent is not None:
            out["agent"] = self.agent
        if self.worlds:
            out["worlds"] = list(self.worlds)
        if self.prop is not None:
            out["prop"] = self.prop
        return out


def _bits(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True, eq=False)
class VagueStructure:
    n: int
    objective_labels: tuple
    subjective_labels: tuple
    worlds: tuple
    plausible: tuple  # per agent (index agent-1): frozenset of world indices
    valuation: Mapping[str, tuple] = field(default_factory=dict)  # prop -> per agent frozenset
    objective_props: frozenset = frozenset()

    def __post_init__(self):
        fix = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        if not isinstance(self.n, int) or self.n < 1:
            raise StructureError(f"agent count must be a positive integer, got {self.n!r}")
        fix("objective_labels", tuple(str(x) for x in self.objective_labels))
        if len(self.subjective_labels) != self.n:
            raise StructureError(
                f"expected {self.n} subjective label lists, got {len(self.subjective_labels)}"
            )
        fix("subjective_labels", tuple(tuple(str(x) for x in ls) for ls in self.subjective_labels))
        worlds = []
        for k, w in enumerate(self.worlds):
            if not isinstance(w, World):
                coords = tuple(w)
                if len(coords) != self.n + 1:
                    raise StructureError(f"world {k} has {len(coords)} coordinates, expected {self.n + 1}")
                w = World(coords[0], tuple(coords[1:]))
            if not 0 <= w.o < len(self.objective_labels):
                raise StructureError(f"world {k}: objective index {w.o} out of range")
            if len(w.s) != self.n:
                raise StructureError(f"world {k} has {len(w.s)} subjective coordinates, expected {self.n}")
            for j, s in enumerate(w.s):
                if not 0 <= s < len(self.subjective_labels[j]):
                    raise StructureError(f"world {k}: subjective index {s} for agent {j + 1} out of range")
            worlds.append(w)
        seen = {}
        for k, w in enumerate(worlds):
            if w.coords in seen:
                raise StructureError(f"worlds {seen[w.coords]} and {k} have identical coordinates {w.coords}")
            seen[w.coords] = k
        fix("worlds", tuple(worlds))
        if len(self.plausible) != self.n:
            raise StructureError(f"expected {self.n} plausibility sets, got {len(self.plausible)}")
        fix("plausible", tuple(self._world_set(ws, "plausible") for ws in self.plausible))
        valuation = {}
        for name, per_agent in dict(self.valuation).items():
            per_agent = tuple(per_agent)
            if len(per_agent) != self.n:
                raise StructureError(f"valuation of {name!r} needs {self.n} world sets, got {len(per_agent)}")
            valuation[str(name)] = tuple(self._world_set(ws, f"valuation[{name}]") for ws in per_agent)
        fix("valuation", valuation)
        objective = frozenset(self.objective_props)
        unknown = objective - valuation.keys()
        if unknown:
            raise StructureError(f"objective propositions without a valuation: {sorted(unknown)}")
        fix("objective_props", objective)

    def _world_set(self, indices, what):
        out = frozenset(indices)
        for i in out:
            if not isinstance(i, int) or not 0 <= i < len(self.worlds):
                raise StructureError(f"{what}: world index {i!r} out of range")
        return out

    # -- lookup -------------------------------------------------------------

    def world_index(self, w) -> int:
        if isinstance(w, World):
            try:
                return self._index_of[w.coords]
            except KeyError:
                raise UnknownWorldError(f"no world with coordinates {w.coords}") from None
        if isinstance(w, int) and not isinstance(w, bool) and 0 <= w < len(self.worlds):
            return w
        raise UnknownWorldError(f"unknown world {w!r}")

    def check_agent(self, j: int) -> int:
        if not isinstance(j, int) or not 1 <= j <= self.n:
            raise AgentIndexError(f"agent index {j!r} outside 1..{self.n}")
        return j

    @cached_property
    def _index_of(self):
        return {w.coords: k for k, w in enumerate(self.worlds)}

    @cached_property
    def all_mask(self) -> int:
        return (1 << len(self.worlds)) - 1

    @cached_property
    def objective_class_masks(self) -> dict:
        masks = {}
        for k, w in enumerate(self.worlds):
            masks[w.o] = masks.get(w.o, 0) | (1 << k)
        return masks

    @cached_property
    def subjective_class_masks(self) -> tuple:
        out = []
        for j in range(self.n):
            masks = {}
            for k, w in enumerate(self.worlds):
                masks[w.s[j]] = masks.get(w.s[j], 0) | (1 << k)
            out.append(masks)
        return tuple(out)

    @cached_property
    def plausible_masks(self) -> tuple:
        return tuple(_bits(ps) for ps in self.plausible)

    @cached_property
    def report_masks(self) -> tuple:
        """``report_masks[j-1][w]``: bitmask of worlds in P_j sharing agent j's state with w."""
        out = []
        for j in range(self.n):
            classes = self.subjective_class_masks[j]
            pm = self.plausible_masks[j]
            out.append(tuple(classes[w.s[j]] & pm for w in self.worlds))
        return tuple(out)

    @cached_property
    def def_masks(self) -> tuple:
        classes = self.objective_class_masks
        return tuple(classes[w.o] for w in self.worlds)

    @cached_property
    def valuation_masks(self) -> dict:
        return {p: tuple(_bits(ws) for ws in sets) for p, sets in self.valuation.items()}

    # -- relations ----------------------------------------------------------

    def sim_o(self, w, w2) -> bool:
        a, b = self.worlds[self.world_index(w)], self.worlds[self.world_index(w2)]
        return a.o == b.o

    def sim_agent(self, j: int, w, w2) -> bool:
        self.check_agent(j)
        a, b = self.worlds[self.world_index(w)], self.worlds[self.world_index(w2)]
        return a.s[j - 1] == b.s[j - 1]

    def report_neighbors(self, j: int, w) -> frozenset:
        """Worlds in ``P_j`` that agent ``j`` cannot tell apart from ``w``."""
        self.check_agent(j)
        return frozenset(iter_bits(self.report_masks[j - 1][self.world_index(w)]))

    def def_neighbors(self, w) -> frozenset:
        return frozenset(iter_bits(self.def_masks[self.world_index(w)]))

    def validate(self) -> list:
        return validate(self)

    def to_json(self) -> dict:
        return structure_to_json(self)

    def describe_world(self, w) -> str:
        world = self.worlds[self.world_index(w)]
        parts = [self.objective_labels[world.o]]
        parts += [self.subjective_labels[j][s] for j, s in enumerate(world.s)]
        return "(" + ", ".join(parts) + ")"


def validate(M: VagueStructure) -> list:
    """Return every violated structure invariant; an empty list means the structure is valid."""
    violations = []
    for j in range(1, M.n + 1):
        if not M.plausible[j - 1]:
            violations.append(
                Violation("plausibility-nonempty", f"P_{j} is empty", agent=j)
            )
    for p, sets in sorted(M.valuation.items()):
        for j in range(1, M.n + 1):
            truth = sets[j - 1]
            groups = {}
            for k, w in enumerate(M.worlds):
                groups.setdefault((w.o, w.s[j - 1]), []).append(k)
            for (o, s), members in sorted(groups.items()):
                inside = [k for k in members if k in truth]
                if inside and len(inside) != len(members):
                    outside = [k for k in members if k not in truth]
                    violations.append(
                        Violation(
                            "valuation-locality",
                            f"pi_{j}({p}) contains world {inside[0]} but not world {outside[0]},"
                            f" though they agree on the objective state and agent {j}'s state",
                            agent=j,
                            worlds=(inside[0], outside[0]),
                            prop=p,
                        )
                    )
        if p in M.objective_props:
            for j in range(2, M.n + 1):
                if sets[j - 1] != sets[0]:
                    diff = sorted(sets[j - 1] ^ sets[0])
                    violations.append(
                        Violation(
                            "objective-agreement",
                            f"objective proposition {p} has pi_1 != pi_{j}",
                            agent=j,
                            worlds=(diff[0],),
                            prop=p,
                        )
                    )
            for o, mask in sorted(M.objective_class_masks.items()):
                members = list(iter_bits(mask))
                inside = [k for k in members if k in sets[0]]
                if inside and len(inside) != len(members):
                    outside = [k for k in members if k not in sets[0]]
                    violations.append(
                        Violation(
                            "objective-locality",
                            f"objective proposition {p} differs between worlds {inside[0]} and"
                            f" {outside[0]} with the same objective state",
                            worlds=(inside[0], outside[0]),
                            prop=p,
                        )
                    )
    for j in range(1, M.n + 1):
        if not M.plausible[j - 1]:
            continue  # already reported as plausibility-nonempty
        reported = set()
        for k, w in enumerate(M.worlds):
            s = w.s[j - 1]
            if s in reported:
                continue
            if M.report_masks[j - 1][k] == 0:
                reported.add(s)
                violations.append(
                    Violation(
                        "report-seriality",
                        f"no world in P_{j} shares agent {j}'s state with world {k}",
                        agent=j,
                        worlds=(k,),
                    )
                )
    return violations


def is_valid(M: VagueStructure) -> bool:
    return not validate(M)


# -- JSON -------------------------------------------------------------------

_FIELDS = {"agents", "objective", "subjective", "worlds", "plausible", "valuation", "objective_props"}


def structure_from_json(data: Mapping) -> VagueStructure:
    if not isinstance(data, Mapping):
        raise StructureError("structure JSON must be an object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise StructureError(f"unknown fields in structure JSON: {sorted(unknown)}")
    missing = {"agents", "objective", "subjective", "worlds", "plausible"} - set(data)
    if missing:
        raise StructureError(f"missing fields in structure JSON: {sorted(missing)}")

    def int_list(value, what):
        if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            raise StructureError(f"{what} must be a list of integers")
        return value

    n = data["agents"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise StructureError("'agents' must be an integer")
    if not isinstance(data["subjective"], list) or not all(isinstance(x, list) for x in data["subjective"]):
        raise StructureError("'subjective' must be a list of lists")
    worlds = [tuple(int_list(w, f"worlds[{k}]")) for k, w in enumerate(data["worlds"])]
    if not isinstance(data["plausible"], list):
        raise StructureError("'plausible' must be a list of lists")
    plausible = [int_list(ws, f"plausible[{j}]") for j, ws in enumerate(data["plausible"])]
    valuation = {}
    raw_val = data.get("valuation", {})
    if not isinstance(raw_val, Mapping):
        raise StructureError("'valuation' must be an object")
    for name, sets in raw_val.items():
        if not isinstance(sets, list):
            raise StructureError(f"valuation[{name!r}] must be a list of lists")
        valuation[name] = [int_list(ws, f"valuation[{name!r}][{j}]") for j, ws in enumerate(sets)]
    objective_props = data.get("objective_props", [])
    if not isinstance(objective_props, list) or not all(isinstance(x, str) for x in objective_props):
        raise StructureError("'objective_props' must be a list of names")
    for k, ws in enumerate(plausible):
        if len(set(ws)) != len(ws):
            raise StructureError(f"plausible[{k}] lists a world twice")
    return VagueStructure(
        n=n,
        objective_labels=data["objective"],
        subjective_labels=data["subjective"],
        worlds=worlds,
        plausible=plausible,
        valuation=valuation,
        objective_props=frozenset(objective_props),
    )


def structure_to_json(M: VagueStructure) -> dict:
    return {
        "agents": M.n,
        "objective": list(M.objective_labels),
        "subjective": [list(ls) for ls in M.subjective_labels],
        "worlds": [list(w.coords) for w in M.worlds],
        "plausible": [sorted(ps) for ps in M.plausible],
        "valuation": {p: [sorted(ws) for ws in sets] for p, sets in sorted(M.valuation.items())},
        "objective_props": sorted(M.objective_props),
    }


def load_structure(path) -> VagueStructure:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return structure_from_json(data)


# -- construction helpers ---------------------------------------------------


def from_local_valuation(
    n: int,
    objective_labels: Sequence,
    subjective_labels: Sequence,
    worlds: Sequence,
    plausible: Sequence,
    local: Mapping[str, Sequence] = (),
    objective: Mapping[str, Iterable[int]] = (),
) -> VagueStructure:
    """Build a structure whose valuations are given on ``(o, s_i)`` pairs.

    ``local[p][i-1]`` is a set of ``(o, s_i)`` pairs at which agent ``i``
    holds ``p``; ``objective[p]`` is a set of objective indices.  Locality
    holds by construction.
    """
    world_objs = [w if isinstance(w, World) else World(w[0], tuple(w[1:])) for w in worlds]
    valuation = {}
    for p, per_agent in dict(local).items():
        valuation[p] = [
            {k for k, w in enumerate(world_objs) if (w.o, w.s[j]) in set(pairs)}
            for j, pairs in enumerate(per_agent)
        ]
    for p, os in dict(objective).items():
        os = set(os)
        truth = {k for k, w in enumerate(world_objs) if w.o in os}
        valuation[p] = [truth] * n
    return VagueStructure(
        n=n,
        objective_labels=objective_labels,
        subjective_labels=subjective_labels,
        worlds=world_objs,
        plausible=plausible,
        valuation=valuation,
        objective_props=frozenset(dict(objective)),
    )


def random_structure(
    n: int = 2,
    max_objective: int = 3,
    max_subjective: int = 3,
    props: Sequence[str] = ("p", "q"),
    seed=0,
    world_density: float = 0.6,
    plausible_density: float = 0.5,
    truth_density: float = 0.5,
    objective_props: Sequence[str] = (),
    max_worlds: int | None = None,
) -> VagueStructure:
    """Sample a valid structure; a deterministic function of the arguments.

    Valuations are drawn on ``(o, s_i)`` pairs (objective propositions on
    ``o`` alone), so locality holds by construction.  Each subjective class
    gets at least one plausible world, so reports are serial.
    """
    if n < 1 or max_objective < 1 or max_subjective < 1:
        raise ValueError("agent count and state bounds must be positive")
    if max_worlds is not None and max_worlds < 1:
        raise ValueError("max_worlds must be positive: seriality needs at least one world")
    rng = random.Random(seed)
    n_obj = rng.randint(1, max_objective)
    n_subj = [rng.randint(1, max_subjective) for _ in range(n)]
    cells = list(product(range(n_obj), *[range(k) for k in n_subj]))
    chosen = [c for c in cells if rng.random() < world_density]
    if not chosen:
        chosen = [rng.choice(cells)]
    if max_worlds is not None and len(chosen) > max_worlds:
        chosen = sorted(rng.sample(chosen, max_worlds))
    worlds = [World(c[0], tuple(c[1:])) for c in chosen]

    plausible = []
    for j in range(n):
        ps = {k for k in range(len(worlds)) if rng.random() < plausible_density}
        classes = {}
        for k, w in enumerate(worlds):
            classes.setdefault(w.s[j], []).append(k)
        for s in sorted(classes):
            members = classes[s]
            if not ps.intersection(members):
                ps.add(rng.choice(members))
        plausible.append(ps)

    local = {}
    for p in props:
        if p in objective_props:
            continue
        per_agent = []
        for j in range(n):
            pairs = sorted({(w.o, w.s[j]) for w in worlds})
            per_agent.append({pair for pair in pairs if rng.random() < truth_density})
        local[p] = per_agent
    objective = {}
    for p in objective_props:
        objective[p] = {o for o in range(n_obj) if rng.random() < truth_density}
    return from_local_valuation(
        n,
        [f"o{k}" for k in range(n_obj)],
        [[f"s{j + 1}_{k}" for k in range(n_subj[j])] for j in range(n)],
        worlds,
        plausible,
        local,
        objective,
    )
