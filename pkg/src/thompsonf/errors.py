"""Exception hierarchy shared by all modules."""


class ThompsonError(Exception):
    pass


class ElementError(ThompsonError, ValueError):
    """Invalid breakpoint data for an element of F."""


class NonMonotone(ElementError):
    pass


class BadSlope(ElementError):
    pass


class NonDyadic(ElementError):
    pass


class BadEndpoint(ElementError):
    pass


class OutOfRange(ThompsonError, ValueError):
    pass


class BadInterval(ThompsonError, ValueError):
    pass


class ParseError(ThompsonError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class NegativeCoefficient(ParseError):
    pass


class UnknownConstant(ParseError):
    pass


class UnboundVariable(ThompsonError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class UnknownSet(ThompsonError, KeyError):
    pass


class NotASolution(ThompsonError):
    pass


class DecompositionNotFound(ThompsonError):
    pass


class NotInImage(ThompsonError):
    pass


class NotInCommutatorSubgroup(ThompsonError, ValueError):
    pass


class ResourceLimit(ThompsonError, RuntimeError):
    pass
