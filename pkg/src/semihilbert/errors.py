"""Exception hierarchy shared by all semihilbert modules."""


class SemiHilbertError(Exception):
    """Base class for all errors raised by this package."""


class DimMismatch(SemiHilbertError):
    """Operands have incompatible shapes."""


class NotHermitian(SemiHilbertError):
    """Matrix fails the Hermitian symmetry check at the given tolerance."""


class NotPSD(SemiHilbertError):
    """Hermitian matrix has an eigenvalue below the negative-dust band."""


class NoConvergence(SemiHilbertError):
    """Iterative eigensolver exceeded its sweep cap."""


class ZeroA(SemiHilbertError):
    """The weight matrix is (numerically) zero; the semi-inner product is void."""


class NotABounded(SemiHilbertError):
    """Operator maps kernel directions out of the kernel: no finite A-seminorm."""


class NotAdjointable(SemiHilbertError):
    """The adjoint equation A X = T* A has no solution for this operator."""


class NotAPositive(SemiHilbertError):
    """Operator is not A-positive (A T is not Hermitian PSD)."""


class ZeroSeminorm(SemiHilbertError):
    """Operation undefined for operators with vanishing A-seminorm."""


class BadEpsilon(SemiHilbertError):
    """Approximation parameter must lie in [0, 1)."""


class BadSpec(SemiHilbertError):
    """Instance-generation spec is malformed."""


class ParseError(SemiHilbertError):
    """Problem file could not be parsed."""


class ValidationError(SemiHilbertError):
    """Problem file parsed but violates the schema contract."""
