"""Exception types shared across the engine."""


class TautError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(TautError, ValueError):
    """Operands live on incompatible spaces (genus, arity or degree)."""


class InvalidFZSpec(TautError, ValueError):
    """(g, n, r) fails the nonnegative-even validity predicate."""


class NazarovDenominator(TautError, ZeroDivisionError):
    """A projector factor denominator 2g+1+c_k+c_l vanishes."""

    def __init__(self, k: int, l: int, lam, g: int):
        self.k, self.l, self.lam, self.g = k, l, lam, g
        super().__init__(
            f"Nazarov factor ({k},{l}) for lambda={lam} has vanishing "
            f"denominator at g={g}"
        )


class SocleError(TautError, ValueError):
    """The degree g-2 quotient on zero points is not one-dimensional."""


class NotARepresentation(TautError, ValueError):
    """Supplied generator matrices violate the symmetric-group relations."""
