"""Exception hierarchy. Everything derives from ``ValueError`` so callers that
only care about bad input can catch that."""


class TorusScarError(ValueError):
    pass


class InvalidMatrixError(TorusScarError):
    """B is not in GL(2, Z) or is not hyperbolic."""


class SymmetryError(TorusScarError):
    """Trig polynomial coefficients break Hermitian symmetry."""


class DimensionError(TorusScarError):
    """States or operators with different N were combined."""


class SizeLimitError(TorusScarError):
    pass


class AliasingError(TorusScarError):
    """A Weyl frequency is too large to be resolved on the N-lattice."""


class NormalizationError(TorusScarError):
    pass


class IdenticalOrbitError(TorusScarError):
    pass


class DuplicatePointError(TorusScarError):
    pass
