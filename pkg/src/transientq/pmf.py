"""Finite-support probability mass functions with explicit truncation metadata.

Every distribution in this package lives on the occupancy lattice
``{0, 1, ..., kmax}``.  Truncation is never silent: each :class:`Pmf` carries
``tail_bound`` (estimated mass beyond ``kmax``) and ``clipped_mass`` (total of
tiny negative numerical entries that were clipped to zero), so downstream
comparisons can budget for both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NegativeProbabilityError

#: entries in [-EPS_NEG, 0) are clipped to zero; anything below is an error
EPS_NEG = 1e-12

#: slack allowed on the normalization invariant sum(probs) ~ 1 - tail_bound
_SUM_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function on ``{0..kmax}`` with truncation metadata.

    Attributes:
        probs: nonnegative float64 vector; ``probs[i]`` is the mass at
            occupancy ``i``; the array is marked read-only.
        tail_bound: estimated probability mass beyond ``kmax``.
        clipped_mass: total magnitude of negative numerical entries (each
            within ``EPS_NEG`` of zero) that were clipped during
            construction.
    """

    probs: np.ndarray
    tail_bound: float
    clipped_mass: float = 0.0
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        probs.setflags(write=False)
        if self._skip_checks:
            return
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a non-empty 1-D vector")
        if not np.all(np.isfinite(probs)):
            raise ValueError("probs must be finite")
        if np.any(probs < 0):
            raise NegativeProbabilityError(
                f"negative probability {probs.min()!r}; clip via Pmf.from_raw"
            )
        if not (np.isfinite(self.tail_bound) and self.tail_bound >= 0):
            raise ValueError(f"tail_bound must be >= 0, got {self.tail_bound!r}")
        total = float(probs.sum())
        if not (1.0 - self.tail_bound - _SUM_SLACK <= total <= 1.0 + _SUM_SLACK):
            raise ValueError(
                f"sum(probs)={total!r} incompatible with tail_bound={self.tail_bound!r}"
            )

    @classmethod
    def from_raw(
        cls, raw: np.ndarray, tail_bound: float | None = None
    ) -> "Pmf":
        """Build a Pmf from raw numerical values, clipping tiny negatives.

        Entries in ``[-EPS_NEG, 0)`` are set to zero and their total recorded
        in ``clipped_mass``; entries below ``-EPS_NEG`` raise
        :class:`NegativeProbabilityError`.  When ``tail_bound`` is omitted it
        is inferred as ``max(0, 1 - sum)``.
        """
        raw = np.asarray(raw, dtype=np.float64)
        if raw.ndim != 1 or raw.size == 0:
            raise ValueError("raw must be a non-empty 1-D vector")
        if not np.all(np.isfinite(raw)):
            raise ValueError("raw contains non-finite entries")
        worst = float(raw.min(initial=0.0))
        if worst < -EPS_NEG:
            raise NegativeProbabilityError(
                f"entry {worst!r} is below the -{EPS_NEG} clipping floor"
            )
        negative = raw < 0
        clipped = float(-raw[negative].sum())
        probs = np.where(negative, 0.0, raw)
        if tail_bound is None:
            tail_bound = max(0.0, 1.0 - float(probs.sum()))
        return cls(probs=probs, tail_bound=float(tail_bound), clipped_mass=clipped)

    @property
    def kmax(self) -> int:
        """Largest occupancy index carried by this pmf."""
        return self.probs.size - 1

    def mean(self) -> float:
        """First moment over the retained support."""
        return float(np.arange(self.probs.size) @ self.probs)

    def cdf(self) -> np.ndarray:
        """Cumulative sums over the retained support."""
        return np.cumsum(self.probs)

    def __len__(self) -> int:
        return self.probs.size


def point_mass(index: int, kmax: int | None = None) -> Pmf:
    """Degenerate pmf concentrated at ``index`` (support up to ``kmax``)."""
    if index < 0:
        raise ValueError("index must be >= 0")
    size = (index if kmax is None else int(kmax)) + 1
    if size < index + 1:
        raise ValueError("kmax must be >= index")
    probs = np.zeros(size)
    probs[index] = 1.0
    return Pmf(probs=probs, tail_bound=0.0)
