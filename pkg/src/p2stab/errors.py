"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: bad input -> 2, a verification or
assertion failure -> 3, and a probabilistic answer where an exact one was
demanded -> 4.
"""


class P2StabError(Exception):
    """Base class for all package errors."""


class InputError(P2StabError):
    """Raised when arguments fall outside a documented precondition."""


class VerificationError(P2StabError):
    """Raised when a claimed identity or postcondition fails to check."""


class IncompleteOracleError(P2StabError):
    """Raised when only a probabilistic verdict is available but an exact
    one was requested (e.g. ``--exact`` on the command line)."""
