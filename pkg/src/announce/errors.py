"""Exception types raised across the package."""


class AnnounceError(ValueError):
    """Base class for all domain errors."""


# kripke
class ModelError(AnnounceError):
    pass


class OverlappingBlocks(ModelError):
    pass


class UncoveredState(ModelError):
    pass


class UnknownState(ModelError):
    pass


class UnknownAgent(ModelError):
    pass


class UnknownProp(ModelError):
    pass


class EmptyRestriction(ModelError):
    pass


class ModelFormatError(ModelError):
    """Malformed model / tile / grid JSON document."""


# formula
class FormulaSyntaxError(AnnounceError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownOperator(FormulaSyntaxError):
    pass


class NotEpistemic(AnnounceError):
    pass


# mcheck
class SignatureMismatch(AnnounceError):
    pass


class QuantifierBudgetExceeded(AnnounceError):
    def __init__(self, needed, budget):
        super().__init__(
            f"quantifier enumeration needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


# tiling
class IndexOutOfRange(AnnounceError):
    pass


class PaletteClash(AnnounceError):
    pass


class InvalidTiling(AnnounceError):
    pass


class ChainBroken(AnnounceError):
    pass
