"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PlumbingError(Exception):
    """Base class for all errors raised by plumbpoly."""


class GraphFormatError(PlumbingError, ValueError):
    """Malformed or structurally invalid graph input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class SubgraphError(PlumbingError, ValueError):
    """Invalid vertex selection for an induced subgraph."""


class BindingError(PlumbingError, ValueError):
    """Cycles or polynomials bound to different graphs were combined."""


class NotNegativeDefinite(PlumbingError):
    def __init__(self, order: int, minor: int):
        self.order = order
        self.minor = minor
        super().__init__(
            f"intersection form is not negative definite: leading principal minor "
            f"of order {order} of -M equals {minor}"
        )


class NotElliptic(PlumbingError):
    pass


class NotFullSubgraph(PlumbingError):
    pass


class BoundaryNotEndVertices(PlumbingError):
    pass


class NotSmallExtension(PlumbingError):
    pass


class InvalidDualExponent(PlumbingError, ValueError):
    pass


class EnumerationLimit(PlumbingError):
    """An enumeration exceeded its safety bound."""
