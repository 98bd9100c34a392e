"""Exception hierarchy shared by every layer of the package."""


class PncritError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class StructuralError(PncritError, ValueError):
    """Arity, variable-count or index mismatch."""


class ParseError(StructuralError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotHomogeneous(StructuralError):
    pass


class DegreeMismatch(StructuralError):
    pass


class NotAMorphism(PncritError):
    pass


class ResourceCapExceeded(PncritError):
    """A configured degree / bit-size / retry cap was hit."""

    exit_code = 3

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class EliminationNotPrincipal(PncritError):
    def __init__(self, message, generators=()):
        self.generators = list(generators)
        super().__init__(message)


class IrrationalFiberPoint(PncritError):
    exit_code = 4


class IrrationalCriticalPoint(PncritError):
    exit_code = 4


class GenericityExhausted(ResourceCapExceeded):
    pass


class SearchExhausted(ResourceCapExceeded):
    pass


class OrbitBudgetExceeded(ResourceCapExceeded):
    pass


class NotSmooth(PncritError):
    pass
