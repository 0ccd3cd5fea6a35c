"""Exception types shared across the package."""


class MasimError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(MasimError, ValueError):
    """An argument violated a documented precondition."""


class SingularGeometryError(MasimError):
    """A geometric computation degenerated (e.g. zero propagation distance)."""


class InfeasibleConstraintsError(MasimError):
    """Placement constraints admit no feasible layout (or none was found)."""


class InstanceTooLargeError(MasimError):
    """An exhaustive enumeration would exceed the instance-size guard."""


class ConfigError(MasimError):
    """A scenario config failed schema validation.

    Carries the dotted path of the offending field so CLI error text can
    point at it directly.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
