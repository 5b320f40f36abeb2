"""Exception hierarchy shared by all vaguelogic modules."""


class VagueLogicError(Exception):
    """Base class for every error raised by this package."""


class ParseError(VagueLogicError):
    """Raised when formula text does not match the grammar.

    ``span`` is a ``(start, end)`` pair of 0-based character offsets and
    ``expected`` a short description of what the parser wanted there.
    """

    def __init__(self, message, span, expected=None, text=None):
        self.span = span
        self.expected = expected
        self.text = text
        super().__init__(message)

    def __str__(self):
        start, end = self.span
        msg = f"{self.args[0]} at {start}:{end}"
        if self.expected:
            msg += f" (expected {self.expected})"
        return msg


class StructureError(VagueLogicError):
    """Malformed structure data: bad shapes, indices, duplicate worlds."""


class UnknownWorldError(StructureError, LookupError):
    pass


class AgentIndexError(VagueLogicError, ValueError):
    pass


class UnknownPropositionError(VagueLogicError, LookupError):
    pass


class ProofFormatError(VagueLogicError):
    pass


class EngineDisagreement(VagueLogicError):
    """The tableau and the countermodel search returned contradictory results.

    This always indicates a bug; both artifacts are attached for inspection.
    """

    def __init__(self, message, tableau=None, search=None):
        self.tableau = tableau
        self.search = search
        super().__init__(message)
