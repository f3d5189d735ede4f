"""Exception types shared across the package."""


class GravregError(Exception):
    """Base class for all gravreg errors."""


class InvalidParam(GravregError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"invalid parameter {name}={value!r}")


class EmptyCloud(GravregError):
    pass


class DegenerateExtent(GravregError):
    pass


class SingularCollocation(GravregError):
    pass


class LengthMismatch(GravregError):
    pass


class NonFiniteWeight(GravregError):
    pass


class ParseError(GravregError):
    def __init__(self, line_number, reason):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class UnsupportedFormat(GravregError):
    pass
