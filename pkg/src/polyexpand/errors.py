"""Exception types shared across modules."""


class PolyExpandError(Exception):
    pass


class InvalidArgumentError(PolyExpandError, ValueError):
    pass


class ResourceLimitError(PolyExpandError, RuntimeError):
    """An input exceeds a configured size cap (enumeration, LP pairs, ...)."""


class RegimeError(PolyExpandError, ValueError):
    """Model parameters fall in a degenerate regime the certificate does not cover.

    ``case`` is ``"few_vertices"`` or ``"full_cube_expected"``.
    """

    def __init__(self, case, message):
        super().__init__(f"{case}: {message}")
        self.case = case


class UndefinedExpansionError(PolyExpandError, ValueError):
    pass


class CapExceededError(PolyExpandError, RuntimeError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class InternalConsistencyError(PolyExpandError, AssertionError):
    pass
