"""Exception types shared across the package."""


class RssError(Exception):
    """Base class for all package errors."""


class IndexMismatchError(RssError):
    """Two values live on different index sets."""


class InvalidSpaceError(RssError):
    """A space's generator data cannot define a norm (empty or non-spanning)."""


class ShapeError(RssError):
    """Matrix shapes do not chain or do not match their index sets."""


class SizeGuardError(RssError):
    """A combinatorial enumeration exceeded its configured cap."""

    def __init__(self, guard: str, limit: int, requested: int):
        self.guard = guard
        self.limit = limit
        self.requested = requested
        super().__init__(
            f"size guard '{guard}' exceeded: needs {requested}, cap is {limit}"
        )


class FormulaSyntaxError(RssError):
    """Formula text failed to parse; carries the offending position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnboundAtomError(RssError):
    """A formula atom has no space bound to it."""


class ProofError(RssError):
    """An ill-formed rule application; names the node and the reason."""

    def __init__(self, node: str, reason: str):
        self.node = node
        self.reason = reason
        super().__init__(f"rule '{node}': {reason}")
