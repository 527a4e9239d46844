"""Exception types shared across the package."""


class AbelDecompError(Exception):
    """Base class."""


class InvalidField(AbelDecompError):
    pass


class InvalidData(AbelDecompError):
    """A polarized datum or config violates a named invariant."""


class NotInvertible(InvalidData):
    pass


class NotAlternating(InvalidData):
    pass


class NotWedgeCompatible(AbelDecompError):
    pass


class SizeBudgetExceeded(AbelDecompError):
    def __init__(self, dim: int, budget: int):
        super().__init__(f"operator space dimension {dim} exceeds budget {budget} (use allow_large)")
        self.dim = dim
        self.budget = budget


class MissingComponents(AbelDecompError):
    """The Lie-algebra centralizer is strictly larger than the diagram span."""


class SplittingFieldRequired(AbelDecompError):
    def __init__(self, min_poly, factor, field):
        self.min_poly = min_poly
        self.factor = factor
        self.field = field
        super().__init__(
            "central element minimal polynomial does not split over the field; non-linear factor "
            + "[" + ", ".join(field.fmt(c) for c in factor) + "] (coefficients low -> high)"
        )


class CenterNotSeparated(AbelDecompError):
    pass


class NotIsomorphic(AbelDecompError):
    pass
