"""Exception hierarchy shared by every module."""


class AtiyahLabError(Exception):
    pass


class InputError(AtiyahLabError, ValueError):
    """Malformed or inconsistent user-supplied data."""


class PreconditionError(InputError):
    """An operation was called on data that does not satisfy its contract."""


class UnsupportedDegreeError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, text, position):
        self.reason = message
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class SchemaError(InputError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConsistencyError(AtiyahLabError, RuntimeError):
    """An identity that must hold by construction failed; always a bug."""
