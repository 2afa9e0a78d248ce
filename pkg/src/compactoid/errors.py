"""Exception hierarchy shared by every module of the package."""


class CompactoidError(Exception):
    pass


class DimensionError(CompactoidError, ValueError):
    pass


class NotSelfInverse(CompactoidError, ValueError):
    """A map that was required to satisfy s(s(x)) = x does not."""

    def __init__(self, point, image, back):
        self.point = point
        self.image = image
        self.back = back
        super().__init__(
            f"map is not self-inverse: s({point!r}) = {image!r}, s({image!r}) = {back!r}"
        )


class NotSurjective(CompactoidError, ValueError):
    pass


class EmptySetError(CompactoidError, ValueError):
    pass


class CoverShapeError(CompactoidError, ValueError):
    pass


class BudgetExceeded(CompactoidError):
    """Enumeration did not stabilize within the configured word-length budget."""


class ClassificationError(CompactoidError):
    """A computed shadow or thread matched nothing in the symbolic catalogue."""

    def __init__(self, message, data=None):
        self.data = data
        super().__init__(message)


class ImplicationError(CompactoidError):
    def __init__(self, edge, record=None):
        self.edge = edge
        self.record = record
        super().__init__(f"implication violated on edge {edge[0]} -> {edge[1]}")
