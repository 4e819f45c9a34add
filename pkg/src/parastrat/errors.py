"""Exception types shared across the package."""


class RankOutOfRangeError(ValueError):
    def __init__(self, kind, n, minimum):
        super().__init__(f"{kind} needs n >= {minimum}, got n = {n}")
        self.kind = kind
        self.n = n
        self.minimum = minimum


class DimensionError(ValueError):
    pass


class NotARootError(ValueError):
    pass


class EnumerationBoundError(RuntimeError):
    """Raised when an exhaustive Weyl-group enumeration would exceed the configured bound."""

    def __init__(self, family, bound, required):
        super().__init__(
            f"{family.describe()}: n = {family.n} exceeds the enumeration bound {bound} "
            f"(|W| = {required}); raise it with --max-weyl or PARASTRAT_MAX_WEYL"
        )
        self.family = family
        self.bound = bound
        self.required = required


class UnsupportedError(ValueError):
    pass


class IntegralityError(ArithmeticError):
    """An exact computation that must be integral produced a fraction."""
