"""Exception hierarchy.

Every error raised on bad input derives from :class:`VarixError`, which is a
``ValueError`` so callers that only care about "bad value" can catch that.
"""


class VarixError(ValueError):
    pass


class EmptyPath(VarixError):
    def __init__(self):
        super().__init__("path must contain at least one value")


class NonFiniteValue(VarixError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"non-finite value at index {index}")


class NonMonotoneTimes(VarixError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"times not strictly increasing at index {index}")


class LengthMismatch(VarixError):
    def __init__(self, left, right):
        self.lengths = (left, right)
        super().__init__(f"length mismatch: {left} vs {right}")


class IndexOutOfRange(VarixError, IndexError):
    def __init__(self, index, length):
        self.index = index
        super().__init__(f"index {index} outside path of length {length}")


class TooLongForExhaustive(VarixError):
    def __init__(self, length, limit):
        super().__init__(f"exhaustive search limited to length {limit}, got {length}")


class ToleranceViolated(VarixError):
    def __init__(self, distance, eps):
        self.distance = distance
        super().__init__(f"uniform distance {distance!r} exceeds eps={eps!r}")


class DomainError(VarixError):
    pass


class ParseError(VarixError):
    def __init__(self, line, message="could not parse"):
        self.line = line
        super().__init__(f"line {line}: {message}")
