"""Exception types shared by the library and the command line front end."""


class DataError(ValueError):
    """Invalid measurement data.

    ``code`` is a short machine-readable reason, one of ``missing-header``,
    ``unbalanced``, ``non-numeric``, ``non-finite``, ``too-few-labs``,
    ``too-few-replicates``, ``empty``.
    """

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class ConfigError(ValueError):
    """Invalid analysis or simulation configuration."""
