"""Exception hierarchy shared by all pipeline stages.

Each error carries an ``exit_code`` used by the command-line front end.
"""


class PaoError(Exception):
    exit_code = 1


class ParseError(PaoError):
    """Raised when CNL, template or query text does not follow its grammar."""

    def __init__(self, message, sentence_index=None, expected=None):
        self.sentence_index = sentence_index
        self.expected = tuple(sorted(expected)) if expected else ()
        detail = message
        if sentence_index is not None:
            detail = f"sentence {sentence_index}: {detail}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnknownWord(ParseError):
    pass


class UnknownPrefix(ParseError):
    pass


class UnknownAntecedent(ParseError):
    pass


class DuplicateTemplateName(ParseError):
    pass


class UnboundVariable(PaoError):
    pass


class UnsupportedAxiom(PaoError):
    pass


class BudgetExceeded(PaoError):
    exit_code = 2


class InconsistentInput(PaoError):
    exit_code = 2


class MergeInconsistent(PaoError):
    exit_code = 2

    def __init__(self, message, log=()):
        self.log = list(log)
        super().__init__(message)


class InconsistentState(PaoError):
    exit_code = 2


class NoAntecedent(PaoError):
    exit_code = 3


class UnresolvedAmbiguity(PaoError):
    exit_code = 3

    def __init__(self, sites):
        self.sites = list(sites)
        super().__init__("unresolved ambiguity at: " + ", ".join(self.sites))


class MissingRole(PaoError):
    exit_code = 4


class UnboundEffectVariable(PaoError):
    exit_code = 4


class PreconditionUnsatisfiable(PaoError):
    exit_code = 4


class WhereUnmatched(PaoError):
    exit_code = 4
