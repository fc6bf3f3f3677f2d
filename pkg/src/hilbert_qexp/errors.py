"""Exception types shared across the package."""


class HilbertQexpError(Exception):
    """Base class for all package errors."""


# ---- field construction / arithmetic ----

class NotTotallyReal(HilbertQexpError):
    pass


class NotIrreducible(HilbertQexpError):
    pass


class BasisNotARing(HilbertQexpError):
    pass


class IndexDivisible(HilbertQexpError):
    """p divides the index of every usable power order; factorization refused."""


class ZeroIdeal(HilbertQexpError):
    pass


class ZeroElement(HilbertQexpError):
    pass


class NormTooLarge(HilbertQexpError):
    """Ideal norm exceeds the configured trial-division bound."""


# ---- q-expansions ----

class CuspMismatch(HilbertQexpError):
    pass


class RingMismatch(HilbertQexpError):
    pass


class NoTrackedPrime(HilbertQexpError):
    pass


class ParseError(HilbertQexpError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else "%s (at %s)" % (message, position))
        self.position = position


# ---- elliptic / zeta ----

class BadWeight(HilbertQexpError):
    pass


class InconsistentTail(HilbertQexpError):
    """The supplied tail does not extend to a level-one form of the given weight."""


class NonConvergent(HilbertQexpError):
    """Internal p-adic stability check failed; signals a bug."""


# ---- weights ----

class BadAssignment(HilbertQexpError):
    pass


class TooLarge(HilbertQexpError):
    """Enumeration budget exceeded."""


# ---- theta operators ----

class SupportViolation(HilbertQexpError):
    """q-expansion support does not lie in the required sublattice."""


class NotInPj(HilbertQexpError):
    pass


class UnsupportedOperation(HilbertQexpError):
    """Honest refusal: the requested computation needs machinery out of scope."""


# ---- congruences ----

class NeedsOverride(HilbertQexpError):
    """Undecidable wild local case; caller must supply e'(P/p)."""


# ---- functorial ----

class IncompatibleCusp(HilbertQexpError):
    pass
