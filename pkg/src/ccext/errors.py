"""Exception types raised across the package.

Every error carries the offending witness (cell, triple, element, ...) as
attributes so that callers such as the CLI can report it without parsing
the message.
"""


class CcextError(Exception):
    """Base class for all package errors."""


class InternalError(CcextError):
    """An invariant that the mathematics guarantees was found violated."""


class CapExceeded(CcextError):
    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what, self.size, self.cap = what, size, cap


class BudgetExceeded(CcextError):
    def __init__(self, needed, budget):
        super().__init__(f"search needs {needed} candidates, budget is {budget}")
        self.needed, self.budget = needed, budget


# group_core

class InvalidTable(CcextError):
    pass


class NotLatin(InvalidTable):
    def __init__(self, cell, detail=""):
        super().__init__(f"not a Latin square at cell {cell}{': ' + detail if detail else ''}")
        self.cell = cell


class NoIdentity(InvalidTable):
    def __init__(self):
        super().__init__("table has no two-sided identity element")


class NotAssociative(InvalidTable):
    def __init__(self, triple):
        super().__init__(f"associativity fails for triple {triple}")
        self.triple = triple


class NotASubgroup(CcextError):
    def __init__(self, witness):
        super().__init__(f"set is not a subgroup (closure fails at {witness})")
        self.witness = witness


class NotNormal(CcextError):
    def __init__(self, witness):
        super().__init__(f"subgroup is not normal (conjugate escapes at {witness})")
        self.witness = witness


# skewmorph

class IdentityMoved(CcextError):
    def __init__(self, image):
        super().__init__(f"permutation moves the identity to {image}")
        self.image = image


class NotAPermutation(CcextError):
    pass


class NoPowerFunction(CcextError):
    def __init__(self, x):
        super().__init__(f"no power function value exists at element {x}")
        self.x = x


class NotInvariant(CcextError):
    def __init__(self, witness):
        super().__init__(f"subgroup is not invariant under the skew-morphism (witness {witness})")
        self.witness = witness


class DivisibilityViolation(CcextError):
    def __init__(self, x, value, divisor):
        super().__init__(f"value {value} at element {x} is not divisible by {divisor}")
        self.x, self.value, self.divisor = x, value, divisor


# epf

class EPFError(CcextError):
    pass


class NotMultiple(EPFError):
    def __init__(self, n, m):
        super().__init__(f"{n} is not a positive multiple of {m}")
        self.n, self.m = n, m


class CongruenceMismatch(EPFError):
    def __init__(self, x):
        super().__init__(f"value at element {x} is not congruent to the power function")
        self.x = x


class IdentityValue(EPFError):
    def __init__(self, value):
        super().__init__(f"value at the identity is {value}, expected 1")
        self.value = value


class ProductLaw(EPFError):
    def __init__(self, x, y):
        super().__init__(f"product law fails for the pair ({x}, {y})")
        self.x, self.y = x, y


class NonUnitAverage(EPFError):
    def __init__(self, x, value, modulus):
        super().__init__(f"average value {value} at element {x} is not a unit mod {modulus}")
        self.x, self.value, self.modulus = x, value, modulus


# extension

class AssociativityFailure(CcextError):
    def __init__(self, triple):
        super().__init__(f"extension multiplication is not associative at {triple}")
        self.triple = triple


class NotExactProduct(CcextError):
    pass


class FactorizationCollision(CcextError):
    def __init__(self, g, first, second):
        super().__init__(f"element {g} factors both as {first} and {second}")
        self.g, self.first, self.second = g, first, second


# cyclic_auto

class NotCoprime(CcextError):
    def __init__(self, r, k):
        super().__init__(f"gcd({r}, {k}) != 1")
        self.r, self.k = r, k


class ValidationFailure(CcextError):
    pass


# cli

class AmbiguousSelector(CcextError):
    pass
