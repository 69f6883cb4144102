"""Exception hierarchy shared by the library and the command line."""


class AxisRulesError(Exception):
    """Base class for all errors raised by axisrules."""


class CandidateMismatchError(AxisRulesError, ValueError):
    """A ballot or axis refers to candidates the other side does not know."""


class UnknownCandidateError(CandidateMismatchError):
    """A candidate name is not registered in the profile."""


class SizeLimitError(AxisRulesError):
    """The number of candidates exceeds the exhaustive enumeration bound."""


class EmptyProfileError(AxisRulesError, ValueError):
    """The profile has no candidates (or no positive total weight)."""


class ParseError(AxisRulesError, ValueError):
    """A profile file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownRuleError(AxisRulesError, ValueError):
    """Unrecognized rule or axiom name."""


class RuleUnsupportedError(AxisRulesError, ValueError):
    """The operation is not defined for the requested rule."""


class ParameterDomainError(AxisRulesError, ValueError):
    """A noise-model parameter lies outside its admissible range."""


class MalformedInstanceError(AxisRulesError, ValueError):
    """An axiom instance does not satisfy the axiom's premises."""
