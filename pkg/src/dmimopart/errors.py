"""Exception types shared across the package.

The CLI maps these onto its exit-code contract (see :mod:`dmimopart.cli`),
so library code should raise the most specific class that applies.
"""


class DmimoError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(DmimoError, ValueError):
    """An argument violates a precondition (bad size, non-positive gain, ...)."""


class IllConditionedChannelError(DmimoError, ArithmeticError):
    """Channel matrix condition number exceeds the configured threshold.

    Monte Carlo callers are expected to catch this and redraw the channel.
    """


class SizeLimitError(DmimoError, ValueError):
    """A combinatorial size guard was hit (partition enumeration, oracle)."""


class IncompleteRatesError(DmimoError, KeyError):
    """The supplied size -> rate map is missing a required group size."""


class ConfigError(DmimoError, ValueError):
    """A simulation or CLI configuration is inconsistent or incomplete."""
