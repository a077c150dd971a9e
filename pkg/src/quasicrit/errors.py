"""Exception hierarchy shared by all modules."""


class QuasicritError(Exception):
    """Base class; ``path`` names the offending config key when known."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


class ParameterError(QuasicritError, ValueError):
    pass


class ContractError(QuasicritError, ValueError):
    """Input violates a documented precondition (asymmetric matrix, unnormalized state)."""


class EmptyWindowError(QuasicritError, ValueError):
    pass


class BranchPointError(QuasicritError, ValueError):
    pass


class ResonanceError(QuasicritError, ValueError):
    pass


class NumericalError(QuasicritError, RuntimeError):
    pass


class ConfigError(QuasicritError, ValueError):
    pass
