"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An object failed a structural or physical validity check."""


class ConfigError(ValidationError):
    """A configuration document could not be turned into a network.

    ``code`` is a short stable identifier (e.g. ``"E_PROBABILITY"``) and
    ``where`` locates the offending field or line in the document.
    """

    def __init__(self, code, message, where=None):
        self.code = code
        self.where = where
        loc = f" at {where}" if where else ""
        super().__init__(f"[{code}]{loc}: {message}")


class NumericalInvariantError(RuntimeError):
    """A computed state or quantity violated a numerical invariant."""
