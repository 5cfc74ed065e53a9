"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`PrehomError`,
which is a ``ValueError`` so that callers validating user input can catch either.
"""


class PrehomError(ValueError):
    pass


class NonBinaryEntry(PrehomError):
    pass


class LeadingOrTrailingZero(PrehomError):
    pass


class ConsecutiveZeros(PrehomError):
    pass


class NonPositiveEntry(PrehomError):
    pass


class RootNotInIdeal(PrehomError):
    pass


class ZeroCoefficient(PrehomError):
    pass


class NotStandardSubset(PrehomError):
    pass


class InadmissibleIndex(PrehomError):
    pass


class NotDeltaGood(PrehomError):
    pass


class WrongSubsetShape(PrehomError):
    pass


class ZeroParameter(PrehomError):
    pass


class NonPrimeField(PrehomError):
    pass


class NotMinimal(PrehomError):
    pass


class BudgetExceeded(PrehomError):
    """An enumeration would visit more states than the configured budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"enumeration needs {needed} states, budget is {budget}")
        self.needed = needed
        self.budget = budget


class NotAPowerOfQ(PrehomError):
    """A U(q)-orbit had a size that is not a power of q (an internal bug)."""


class NoConjugateMember(PrehomError):
    """F(params) meets the modified family only where some parameter vanishes."""
