"""Exception types raised by the library."""


class EhrtopError(Exception):
    """Base class for all library errors."""


class ZeroVectorError(EhrtopError):
    """A nonzero vector was required."""


class SingularError(EhrtopError):
    """Matrix inversion of a singular matrix."""


class RankDeficientError(EhrtopError):
    """Full (row/column) rank was required."""


class NotFullDimensionalError(EhrtopError):
    """Simplex vertices are affinely dependent."""


class ConesRequiredError(EhrtopError):
    """Non-simplex input without explicit tangent cones."""


class NonGenericDirectionError(EhrtopError):
    """Specialization direction vanishes on a cone generator."""


class ZeroLinearFormError(EhrtopError):
    """Both the linear form and its perturbation vanish on a vector."""


class OracleBudgetError(EhrtopError):
    """Brute-force enumeration would exceed the configured cell budget."""
