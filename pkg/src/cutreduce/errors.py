"""Exception types shared across the package.

The CLI maps :class:`InputError` to exit code 2 and :class:`ResourceError`
to exit code 3; everything else is a plain failure.
"""


class CutReduceError(Exception):
    """Base class for all package-specific errors."""


class InputError(CutReduceError):
    """Malformed or inconsistent caller input."""


class NoCutError(CutReduceError):
    """The graph has no vertex cut set (complete graph, or a neighborhood
    that covers every remaining vertex)."""


class NotACutError(InputError):
    """A supposed separator does not disconnect the graph."""


class ResourceError(CutReduceError):
    """A size cap was exceeded (brute-force or statevector limits)."""


class LiftError(CutReduceError):
    """A trace cannot be lifted because subproblem witnesses are missing."""


class GenerationError(CutReduceError):
    """Random instance generation exhausted its rejection budget."""
