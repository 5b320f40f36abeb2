"""Decision procedures: bounded countermodel search, tableau, and their combination."""

from .classify import Verdict, classify, satisfiable
from .search import DEFAULT_BOUNDS, SearchBounds, SearchResult, Witness, find_countermodel, find_model
from .tableau import DEFAULT_BUDGET, TableauResult, tableau_valid

__all__ = [
    "DEFAULT_BOUNDS",
    "DEFAULT_BUDGET",
    "SearchBounds",
    "SearchResult",
    "TableauResult",
    "Verdict",
    "Witness",
    "classify",
    "find_countermodel",
    "find_model",
    "satisfiable",
    "tableau_valid",
]
