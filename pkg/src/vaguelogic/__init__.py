"""Multi-agent modal logic of vagueness with report (R_j) and definitely (D_j) operators."""

from .checker import Degree, EvalPoint, degree, evaluate, expected_degree, valid_in_model
from .formula import FALSE, TRUE, And, Def, Implies, Not, Or, Prop, Report
from .parser import parse, render
from .structures import VagueStructure, World, validate

__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "Def",
    "Degree",
    "EvalPoint",
    "Implies",
    "Not",
    "Or",
    "Prop",
    "Report",
    "VagueStructure",
    "World",
    "degree",
    "evaluate",
    "expected_degree",
    "parse",
    "render",
    "valid_in_model",
    "validate",
]
