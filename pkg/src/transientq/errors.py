"""Exception hierarchy.

Every failure raised by this package derives from :class:`TransientQError`,
so callers can guard whole workflows with a single ``except``.  Subclasses
carry the context needed to act on the failure (offending quantity,
tolerance, observed value, grid coordinates) without re-running anything.
"""

from __future__ import annotations


class TransientQError(Exception):
    """Base class for all errors raised by this package."""


class NumericalInstabilityError(TransientQError):
    """A closed-form evaluation hit a cancellation-prone denominator.

    Raised when the magnitude of an evaluated denominator falls below the
    documented floor (``1e-12`` relative to the magnitude scale of its
    terms).  For real phase arguments and valid parameters the denominator
    is provably bounded away from zero, so this guards misuse and extreme
    parameter regimes rather than normal operation.
    """


class QuadratureError(TransientQError):
    """Adaptive quadrature failed to converge within the refinement cap."""


class TailMassError(TransientQError):
    """A requested truncation leaves more tail mass than tolerated."""


class AliasingError(TransientQError):
    """CF inversion left too much mass beyond the retained support.

    The wrap-around error of the discrete inversion equals the probability
    mass beyond the sampling period; when the estimated bound reaches the
    configured tolerance the caller must enlarge ``grid_size``/``kmax``.
    """


class NonRealProbabilityError(TransientQError):
    """Recovered probabilities carried an imaginary residue above 1e-10."""


class NegativeProbabilityError(TransientQError):
    """A probability fell below the -1e-12 numerical floor.

    Entries in ``[-1e-12, 0)`` are clipped to zero and accounted for;
    anything more negative indicates a real defect and is never silently
    repaired.
    """


class StabilityError(TransientQError):
    """An ODE step size violates the explicit-scheme stability bound."""


class MassLossError(TransientQError):
    """Truncation boundary of the ODE solver absorbed too much mass.

    Raised when ``1 - sum(probs)`` exceeds ten times the target tail
    tolerance, signalling that ``k_trunc`` is too small for the regime.
    """


class SimulationCapError(TransientQError):
    """A replication exceeded the per-replication event cap."""


class TableCellError(TransientQError):
    """A distance-table cell failed; carries the cell coordinates.

    Attributes:
        b: birth intensity of the failed cell.
        t: time of the failed cell.
        cause: the underlying error.
    """

    def __init__(self, b: float, t: float, cause: Exception):
        self.b = float(b)
        self.t = float(t)
        self.cause = cause
        super().__init__(f"table cell (b={b!r}, t={t!r}) failed: {cause}")
