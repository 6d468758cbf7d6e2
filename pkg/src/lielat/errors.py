"""Exception hierarchy. Each class carries a stable ``code`` used in CLI reports."""

from __future__ import annotations


class LieLatError(Exception):
    code = "error"

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.code)
        self.detail = detail


class InvalidInput(LieLatError):
    code = "invalid-input"


class NotALieAlgebra(LieLatError):
    code = "not-a-lie-algebra"


class NotALattice(LieLatError):
    code = "not-a-lattice"


class SingularMatrix(LieLatError):
    code = "singular-matrix"


class NotPIntegral(LieLatError):
    code = "not-p-integral"


class NotASublattice(LieLatError):
    code = "not-a-sublattice"


class InvalidMap(LieLatError):
    code = "invalid-map"


class InvalidIso(LieLatError):
    code = "invalid-iso"


class BasisMismatch(LieLatError):
    code = "basis-mismatch"


class NotAnAutomorphism(LieLatError):
    code = "not-an-automorphism"


class NotPowerful(LieLatError):
    code = "not-powerful"


class UnsupportedClass(LieLatError):
    code = "unsupported-class"


class NotASubgroup(LieLatError):
    code = "not-a-subgroup"


class BudgetError(LieLatError):
    """Raised when an enumeration would exceed its work budget.

    ``partial`` holds the number of items produced before stopping.
    """

    code = "budget-error"

    def __init__(self, message: str = "", partial: int = 0, **detail):
        super().__init__(message, partial=partial, **detail)
        self.partial = partial


class InternalError(LieLatError):
    """An identity that must hold mathematically failed."""

    code = "internal-error"
