"""Exception hierarchy shared by the library and the CLI."""


class LbzError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(LbzError, ValueError):
    """Malformed term, combination, element or file."""

    exit_code = 2

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message = f"{message}\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class UnknownVarietyError(LbzError, KeyError):
    exit_code = 3

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown variety"


class ResourceBoundError(LbzError):
    """Requested degree exceeds the configured factorial budget."""

    exit_code = 4


class InvariantViolation(LbzError):
    """An internal consistency check failed (e.g. a non-integral multiplicity)."""

    exit_code = 5


class UnassignedGeneratorError(LbzError, KeyError):
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else "unassigned generator"
