"""Exception hierarchy shared by all divrel modules."""


class DivrelError(Exception):
    """Base class for all divrel errors."""


class NonStochastic(DivrelError):
    """Mass vector does not sum to 1 within tolerance."""


class NegativeMass(DivrelError):
    """Mass vector contains a negative entry."""


class DuplicateAtom(DivrelError):
    """Support contains a repeated atom."""


class DimensionMismatch(DivrelError):
    """Distribution / channel dimensions are inconsistent."""


class UnalignedSupports(DivrelError):
    """Two distributions do not share a common support."""


class DomainError(DivrelError):
    """Argument outside the mathematical domain of the function."""


class MaxDepthExceeded(DivrelError):
    """Adaptive quadrature failed to converge within its budget."""


class QuadratureFailure(DivrelError):
    """Numerical integration produced an unreliable result."""


class DegenerateVariance(DivrelError):
    """Variance is zero where a positive variance is required."""


class PreconditionViolated(DivrelError):
    """Operation called outside its stated preconditions."""


class EpsilonTooLarge(DivrelError):
    """Perturbation parameter too large for the construction to be valid."""


class SpectralFailure(DivrelError):
    """Eigen/singular-value computation did not converge."""


class BudgetExceeded(DivrelError):
    """Search budget exhausted before reaching the requested accuracy."""


class NotReversible(DivrelError):
    """Markov kernel violates detailed balance w.r.t. its stationary law."""


class NotIrreducible(DivrelError):
    """Markov kernel is not irreducible."""


class EmptySet(DivrelError):
    """Conditioning set is empty."""


class ZeroProbabilitySet(DivrelError):
    """Conditioning set has zero probability."""


class EtaOutOfBranch(DivrelError):
    """Lambert W_{-1} argument fell outside [-1/e, 0)."""
