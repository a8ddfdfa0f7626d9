"""Exception hierarchy shared across the package.

Three broad classes, chosen so the CLI can map them onto exit codes:
bad input (1), violated operation precondition (2), internal invariant
failure (3).
"""


class OrbmeshError(Exception):
    """Base class for all package errors."""


class InputError(OrbmeshError):
    """Malformed or missing user input (files, flags, request bodies)."""


class PreconditionError(OrbmeshError):
    """A documented operation precondition does not hold for this input."""


class InternalError(OrbmeshError):
    """An internal invariant failed; indicates a bug, not bad input."""
