"""The shipped formula corpus and sample proofs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .axiomatics import Proof, proof_from_json
from .formula import Formula
from .parser import parse


@dataclass(frozen=True)
class CorpusEntry:
    n: int
    expected: str | None  # "valid", "invalid" or None
    objective: tuple
    formula: Formula
    line: int


def _data():
    return resources.files("vaguelogic") / "data"


def parse_corpus(text: str) -> list:
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [x.strip() for x in line.split(";", 3)]
        if len(parts) != 4:
            raise ValueError(f"corpus line {k}: expected 'agents ; expected ; objective ; formula'")
        n, expected, objective, formula = parts
        if expected not in ("valid", "invalid", "?"):
            raise ValueError(f"corpus line {k}: bad expectation {expected!r}")
        out.append(
            CorpusEntry(
                int(n),
                None if expected == "?" else expected,
                () if objective == "-" else tuple(x.strip() for x in objective.split(",")),
                parse(formula),
                k,
            )
        )
    return out


def load_corpus() -> list:
    return parse_corpus((_data() / "corpus.txt").read_text(encoding="utf-8"))


def sample_proofs() -> dict:
    """Name -> :class:`Proof` for every shipped proof file."""
    out = {}
    for entry in sorted((_data() / "proofs").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = proof_from_json(json.loads(entry.read_text(encoding="utf-8")))
    return out


__all__ = ["CorpusEntry", "Proof", "load_corpus", "parse_corpus", "sample_proofs"]
