"""Exception hierarchy shared across the package."""


class PetriCospanError(Exception):
    """Base class for every error raised by this package."""


class MismatchedSets(PetriCospanError):
    pass


class MismatchedBoundary(PetriCospanError):
    pass


class TooLarge(PetriCospanError):
    pass


class ExprSyntaxError(PetriCospanError):
    """Expression text could not be parsed.

    ``line`` and ``column`` are 1-based; ``token`` is the offending text
    (empty at end of input).
    """

    def __init__(self, message: str, line: int, column: int, token: str):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        shown = repr(token) if token else "end of input"
        super().__init__(f"{line}:{column}: {message} (at {shown})")


class UnboundGenerator(PetriCospanError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound generator {name!r}")


class BoundaryMismatch(PetriCospanError):
    def __init__(self, expected, found, at: str):
        self.expected = expected
        self.found = found
        self.at = at
        super().__init__(
            f"boundary mismatch in {at}: expected {_fmt(expected)}, found {_fmt(found)}"
        )


class UnboundRate(PetriCospanError):
    def __init__(self, names):
        if isinstance(names, str):
            names = [names]
        self.names = list(names)
        super().__init__("unbound rate parameter(s): " + ", ".join(self.names))


class MarkingMismatch(PetriCospanError):
    pass


class NonFiniteState(PetriCospanError):
    def __init__(self, t: float):
        self.t = t
        super().__init__(f"non-finite state at t={t!r}")


class ParseError(PetriCospanError):
    """Malformed model file."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ValidationError(PetriCospanError):
    """Model file content violates an invariant.

    ``problems`` holds every ``(entity, reason)`` pair found; ``entity`` and
    ``reason`` mirror the first one.
    """

    def __init__(self, entity: str, reason: str, problems=None):
        self.entity = entity
        self.reason = reason
        self.problems = list(problems) if problems else [(entity, reason)]
        super().__init__("; ".join(f"{e}: {r}" for e, r in self.problems))


def _fmt(obj) -> str:
    labels = getattr(obj, "labels", obj)
    return "[" + ", ".join(labels) + "]"
