class RsgError(Exception):
    """Base class for all library errors."""


class AlphabetError(RsgError, ValueError):
    pass


class ParseError(RsgError, ValueError):
    def __init__(self, message, text=None, position=None):
        if position is not None:
            message = f"{message} (at position {position} in {text!r})"
        super().__init__(message)
        self.text = text
        self.position = position


class DomainError(RsgError, ValueError):
    pass


class UndecidableError(RsgError):
    pass


class CongruenceError(RsgError):
    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context


class FactorizationError(RsgError):
    """A factorization does not multiply back to the element it claims to factor."""


class NicenessError(RsgError):
    pass


class InstanceError(RsgError, ValueError):
    pass


class ArityError(RsgError, ValueError):
    pass


class BottomlessError(RsgError):
    pass
