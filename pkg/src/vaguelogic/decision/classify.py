"""Validity/satisfiability verdicts from the tableau and the bounded search together."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..checker import evaluate
from ..errors import EngineDisagreement
from ..formula import Formula, Not
from ..parser import render
from ..structures import validate
from .search import DEFAULT_BOUNDS, SearchBounds, Witness, find_model
from .tableau import DEFAULT_BUDGET, TableauResult, tableau_valid

# Frame budgets for the search.  When the tableau has already closed, the search
# only double-checks, so it gets a smaller budget than when it is hunting a
# witness.
CROSS_CHECK_FRAMES = 2_000
WITNESS_FRAMES = 20_000


@dataclass
class Verdict:
    """Outcome of a validity query (or a satisfiability query, see ``mode``).

    For validity, ``witness`` falsifies the formula; for satisfiability it
    satisfies it, and a closed tableau reads as ``unsatisfiable``.
    """

    kind: str
    formula: Formula
    n: int
    mode: str = "validity"
    witness: Witness | None = None
    engine: str | None = None
    trace: dict | None = None
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if self.kind == "unknown":
            return 3
        good = "valid" if self.mode == "validity" else "satisfiable"
        return 0 if self.kind == good else 2

    def to_json(self, timing: bool = False) -> dict:
        out = {"verdict": self.kind, "formula": render(self.formula), "agents": self.n}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["engine"] = self.engine
        if self.trace is not None:
            out["trace"] = self.trace
        stats = dict(self.stats)
        if not timing:
            stats.pop("elapsed_ms", None)
        out["stats"] = stats
        return out


def _fits(witness: Witness, bounds: SearchBounds) -> bool:
    M = witness.structure
    if len(M.worlds) > bounds.max_worlds:
        return False
    if len({w.o for w in M.worlds}) > bounds.max_objective:
        return False
    return all(len({w.s[j] for w in M.worlds}) <= bounds.max_subjective for j in range(M.n))


def _dump(witness):
    return None if witness is None else witness.to_json()


def classify(
    phi: Formula,
    n: int,
    bounds: SearchBounds | None = None,
    budget: int = DEFAULT_BUDGET,
    objective=(),
    cross_check_frames: int | None = CROSS_CHECK_FRAMES,
    witness_frames: int | None = WITNESS_FRAMES,
) -> Verdict:
    """Decide validity of ``phi`` over ``n`` agents.

    The tableau runs first.  If it closes, the search looks for a
    countermodel anyway (up to ``cross_check_frames``) and any hit raises
    :class:`EngineDisagreement`.  Otherwise the search hunts for the
    canonically smallest countermodel; if it exhausts the bounds while the
    tableau produced a countermodel that fits them, that is also a
    disagreement.  A tableau countermodel outside the bounds is reported as
    the witness when the search finds none.  ``None`` frame limits mean
    exhaustive search.
    """
    if bounds is None:
        bounds = SearchBounds(*DEFAULT_BOUNDS, n=n)
    if bounds.n != n:
        raise ValueError(f"bounds are for {bounds.n} agents, query has {n}")
    start = time.perf_counter()
    tab: TableauResult = tableau_valid(phi, n, budget=budget, objective=objective)
    frames = cross_check_frames if tab.valid else witness_frames
    search = find_model(Not(phi), bounds, objective=objective, max_frames=frames)
    stats = {"nodes": tab.nodes, "structures": search.frames}

    if tab.valid and search.found:
        raise EngineDisagreement(
            f"tableau proved {render(phi)} valid but the search found a countermodel",
            tableau=tab.trace_json(),
            search=_dump(search.witness),
        )
    if tab.status == "open" and search.complete and not search.found and _fits(tab.hint, bounds):
        raise EngineDisagreement(
            f"search exhausted the bounds for {render(phi)} but the tableau countermodel fits them",
            tableau=_dump(tab.hint),
            search=None,
        )

    stats["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    if tab.valid:
        return Verdict("valid", phi, n, trace=tab.trace_json(), stats=stats)
    if search.found:
        return Verdict("satisfiable", phi, n, witness=search.witness, engine="search", stats=stats)
    if tab.status == "open":
        return Verdict("satisfiable", phi, n, witness=tab.hint, engine="tableau", stats=stats)
    return Verdict("unknown", phi, n, stats=stats)


def satisfiable(psi: Formula, n: int, **kwargs) -> Verdict:
    """Satisfiability of ``psi``, decided as validity of ``~psi``."""
    v = classify(Not(psi), n, **kwargs)
    kind = {"valid": "unsatisfiable"}.get(v.kind, v.kind)
    out = Verdict(kind, psi, n, "satisfiability", v.witness, v.engine, v.trace, v.stats)
    if out.witness is not None:
        M = out.witness.structure
        assert not validate(M) and evaluate(M, out.witness.world, out.witness.agent, psi)
    return out
