"""Error taxonomy shared across the package.

Plain ``ValueError`` is used for invalid arguments; the two classes here
carry the cases the CLI maps to dedicated exit codes.
"""


class ResourceLimitError(RuntimeError):
    """A construction would exceed a configured size cap."""


class InfeasibleParametersError(ValueError):
    """Requested construction has no feasible realization.

    ``constraint`` names the violated constraint so callers (and the CLI)
    can report it.
    """

    def __init__(self, message: str, constraint: str = ""):
        super().__init__(message)
        self.constraint = constraint or message
