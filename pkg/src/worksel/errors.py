"""Exception types shared across the toolkit."""


class WorkselError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(WorkselError, ValueError):
    """An argument violates an operation's precondition."""


class RejectedCommitError(InvalidInputError):
    """A ledger commit was attempted by an unregistered participant."""


class ParseError(WorkselError):
    """An input file is malformed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class UndefinedModularityError(InvalidInputError):
    """Modularity is requested for a graph without edges."""


class ConfigError(WorkselError):
    """An experiment configuration is inconsistent or incomplete."""
