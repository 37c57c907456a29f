"""Exception hierarchy shared by every module."""


class ShufcongError(Exception):
    pass


class UsageError(ShufcongError):
    """Operands that cannot be combined (different alphabets or semirings)."""


class ParseError(ShufcongError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownLetter(ParseError):
    def __init__(self, token, line=None):
        self.token = token
        super().__init__(f"unknown letter {token!r}", line)


class EmptyAlphabet(ParseError):
    pass


class Inconclusive(ShufcongError):
    """The bounded congruence engine could not settle a question within its cap."""

    def __init__(self, cap, detail=""):
        self.cap = cap
        self.detail = detail
        msg = f"inconclusive at exploration cap {cap}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CocycleViolation(ShufcongError):
    def __init__(self, a, b, c):
        self.triple = (a, b, c)
        super().__init__(f"d({a},{b}) + d({b},{c}) + d({c},{a}) != 0")


class PreconditionViolated(ShufcongError):
    pass


class NonPrimeCharacteristic(ShufcongError):
    pass


class NoProgress(ShufcongError):
    pass


class ShapeError(ShufcongError):
    pass


class NotInvertible(ShufcongError):
    pass


class ConstantTermNotOne(ShufcongError):
    pass


class NotLyndon(ShufcongError):
    pass


class ClassificationConflict(ShufcongError):
    """Two independent routes to the same verdict disagreed."""
