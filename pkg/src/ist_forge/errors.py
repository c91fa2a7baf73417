"""Exception types shared across the library."""


class ParameterError(ValueError):
    """An argument violates an operation's precondition."""


class GenerationError(RuntimeError):
    """A randomized generator exhausted its retry budget."""


class ParseError(ValueError):
    """A file does not match the expected format.

    Carries the 1-based line number where parsing failed (0 for
    file-level problems such as a truncated body).
    """

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class IntegrityError(ValueError):
    """A compound input (tree collection, witness, family) violates its invariants."""
