"""Exception hierarchy shared by every medsim module."""


class MedError(Exception):
    """Base class for all medsim errors."""


class InvalidArgument(MedError, ValueError):
    pass


class InvalidPair(MedError, ValueError):
    """Two lists that cannot be compared (e.g. different topics)."""


class MalformedRun(MedError, ValueError):
    """A ranked list or run file that breaks the duplicate-free rule."""


class InvalidMeasure(MedError, ValueError):
    """A measure whose parameters violate the solver's assumptions."""


class UnsupportedMeasure(MedError, TypeError):
    pass


class TooLarge(MedError):
    """An exhaustive search would exceed its enumeration budget."""


class ParseError(MedError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
