"""Exceptions raised by the chain and witness engine."""


class SBError(Exception):
    """Base exception for engine errors."""

    def __init__(self, message: str, details: str | None = None):
        self.message = message
        self.details = details
        super().__init__(f"{message}: {details}" if details else message)


class WrongValueKind(SBError):
    """A value of the wrong kind (atom vs natural) was given to a carrier or map."""

    def __init__(self, details: str | None = None):
        super().__init__("wrong value kind", details)


class NotInDomain(SBError):
    """A map was applied outside its domain carrier."""

    def __init__(self, details: str | None = None):
        super().__init__("not in domain", details)


class NotInCarrier(SBError):
    """A witness operation received a value outside P or Q."""

    def __init__(self, details: str | None = None):
        super().__init__("not in carrier", details)


class MalformedElement(SBError):
    """A tagged element whose value is not in the carrier named by its polarity."""

    def __init__(self, details: str | None = None):
        super().__init__("malformed chain element", details)


class NotInImage(SBError):
    """An inverse was requested for a value outside the map's image."""

    def __init__(self, details: str | None = None):
        super().__init__("not in image", details)


class BudgetExhausted(SBError):
    """A chain walk could not be decided within the step budget."""

    def __init__(self, element: str, steps_spent: int):
        self.element = element
        self.steps_spent = steps_spent
        super().__init__(
            "budget exhausted",
            f"{element} undecided after {steps_spent} steps",
        )


class InvalidInstance(SBError):
    """An operation was attempted on an instance that fails validation."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            "invalid instance",
            "; ".join(v.message for v in report.violations),
        )


class EncodingError(SBError):
    """A finite instance cannot be encoded in countable mode."""


class ParseError(SBError):
    """Instance document could not be parsed.

    Carries the 1-based line and column the problem was located at.
    """

    def __init__(self, reason: str, line: int = 1, column: int = 1):
        self.reason = reason
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}", reason)
