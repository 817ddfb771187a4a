"""Exception hierarchy shared by every cfplab module."""


class CfpError(Exception):
    """Base class for all cfplab errors."""


class ParameterError(CfpError, ValueError):
    """An argument violates a sampler or oracle precondition."""


class WordError(CfpError, ValueError):
    """A word refers to a symbol that was never declared."""


class ParseError(WordError):
    """A word string could not be tokenized.

    Attributes
    ----------
    position : int
        1-based index of the offending token.
    token : str
        The offending token text.
    """

    def __init__(self, message, position, token):
        super().__init__(f"{message} (token {position}: {token!r})")
        self.position = position
        self.token = token


class UnsupportedAlgebraError(CfpError):
    """A product inside one freeness class cannot be reduced to a power."""


class NumericalError(CfpError, ArithmeticError):
    """A numerical routine failed; ``residual`` holds the best value reached."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class ConfigError(CfpError, ValueError):
    """Malformed experiment configuration; ``key`` is the offending key path."""

    def __init__(self, message, key=""):
        prefix = f"{key}: " if key else ""
        super().__init__(prefix + message)
        self.key = key
