"""Distance between occupancy distributions and the (b, t) distance table.

The headline quantity is the Kolmogorov distance between the two systems'
occupancy pmfs at a common time — the maximum absolute difference of their
cumulative sums — evaluated over a grid of birth intensities and times, plus
the admissibility verdict that compares a distance against a threshold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import TableCellError, TransientQError
from .inversion import InversionConfig, choose_truncation, invert_cf
from .models import ModelParams, autonomous_cf, poisson_matched_cf
from .pmf import Pmf

#: default admissibility threshold on the Kolmogorov distance
DEFAULT_THRESHOLD = 0.03


def _probs_of(p) -> np.ndarray:
    if isinstance(p, Pmf):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def kolmogorov_distance(p, q) -> float:
    """Maximum absolute difference of cumulative sums of two lattice pmfs.

    Supports are aligned by zero-padding the shorter pmf; the maximum runs
    over every index of the union support, whose last partial sum equals the
    difference of total retained masses — so tail-bound discrepancies are
    included rather than ignored.
    """
    a = _probs_of(p)
    b = _probs_of(q)
    size = max(a.size, b.size)
    diff = np.zeros(size)
    diff[: a.size] = a
    diff[: b.size] -= b
    return float(np.max(np.abs(np.cumsum(diff))))


class Verdict(enum.Enum):
    """Whether the infinite-server approximation is acceptable at a cell."""

    ADMISSIBLE = "Admissible"
    INEXPEDIENT = "Inexpedient"

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.value


def approximation_verdict(rho: float, threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    """Admissible iff ``rho <= threshold`` (boundary inclusive)."""
    rho = float(rho)
    if not (0.0 <= rho <= 1.0):
        raise ValueError(f"rho must lie in [0, 1], got {rho!r}")
    threshold = float(threshold)
    if not (math.isfinite(threshold) and threshold >= 0):
        raise ValueError(f"threshold must be finite and >= 0, got {threshold!r}")
    return Verdict.ADMISSIBLE if rho <= threshold else Verdict.INEXPEDIENT


@dataclass(frozen=True, eq=False)
class DistanceTable:
    """Grid of Kolmogorov distances rho(b, t) with its numerical metadata.

    Attributes:
        b_values: birth intensities, one per row.
        t_values: times, one per column.
        rho: distance matrix, row-major by ``b``.
        kmax: per-cell retained support of the shared inversion.
        grid_size: per-cell CF sampling grid size.
        tail_bound: per-cell max of the two inverted pmfs' tail bounds.
        mu: service rate shared by every cell.
        n0: initial occupancy shared by every cell.
        tail_tol: aliasing tolerance the per-cell truncations were sized for.
    """

    b_values: tuple
    t_values: tuple
    rho: np.ndarray
    kmax: np.ndarray
    grid_size: np.ndarray
    tail_bound: np.ndarray
    mu: float
    n0: int
    tail_tol: float

    def __post_init__(self):
        b_values = tuple(float(b) for b in self.b_values)
        t_values = tuple(float(t) for t in self.t_values)
        object.__setattr__(self, "b_values", b_values)
        object.__setattr__(self, "t_values", t_values)
        shape = (len(b_values), len(t_values))
        rho = np.asarray(self.rho, dtype=np.float64)
        kmax = np.asarray(self.kmax, dtype=np.int64)
        grid_size = np.asarray(self.grid_size, dtype=np.int64)
        tail_bound = np.asarray(self.tail_bound, dtype=np.float64)
        for name, arr in (
            ("rho", rho),
            ("kmax", kmax),
            ("grid_size", grid_size),
            ("tail_bound", tail_bound),
        ):
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if rho.size and (rho.min() < 0.0 or rho.max() > 1.0):
            raise ValueError("rho entries must lie in [0, 1]")

    def cell(self, b: float, t: float) -> float:
        """Distance at the grid cell ``(b, t)``."""
        try:
            i = self.b_values.index(float(b))
            j = self.t_values.index(float(t))
        except ValueError:
            raise KeyError(f"no grid cell at (b={b}, t={t})") from None
        return float(self.rho[i, j])


def build_distance_table(
    mu: float,
    n0: int,
    b_values,
    t_values,
    tail_tol: float = 1e-9,
    config: InversionConfig | None = None,
) -> DistanceTable:
    """Kolmogorov distance between the two systems on a (b, t) grid.

    For each cell, both CFs are inverted with a *shared* truncation — sized
    by :func:`~transientq.inversion.choose_truncation` unless an explicit
    ``config`` overrides it — and the distance of the recovered pmfs is
    recorded together with the truncation actually used.  Cells are
    independent; a failing cell raises
    :class:`~transientq.errors.TableCellError` carrying its coordinates.

    Times may be zero (both distributions are then the same point mass and
    the distance is zero); birth intensities must be positive.
    """
    b_values = [float(b) for b in b_values]
    t_values = [float(t) for t in t_values]
    if not b_values or not t_values:
        raise ValueError("b_values and t_values must be non-empty")
    if any(b <= 0 for b in b_values):
        raise ValueError("all b values must be > 0")
    if any(t < 0 for t in t_values):
        raise ValueError("all t values must be >= 0")
    shape = (len(b_values), len(t_values))
    rho = np.zeros(shape)
    kmax = np.zeros(shape, dtype=np.int64)
    grid_size = np.zeros(shape, dtype=np.int64)
    tail_bound = np.zeros(shape)
    for i, b in enumerate(b_values):
        params = ModelParams(b=b, mu=mu, n0=n0)
        cf_auto = autonomous_cf(params)
        cf_pois = poisson_matched_cf(params)
        for j, t in enumerate(t_values):
            try:
                cell_cfg = config if config is not None else choose_truncation(
                    params, t, tail_tol
                )
                p_auto = invert_cf(cf_auto, t, cell_cfg)
                p_pois = invert_cf(cf_pois, t, cell_cfg)
            except TransientQError as exc:
                raise TableCellError(b, t, exc) from exc
            rho[i, j] = kolmogorov_distance(p_pois, p_auto)
            kmax[i, j] = cell_cfg.kmax
            grid_size[i, j] = cell_cfg.grid_size
            tail_bound[i, j] = max(p_auto.tail_bound, p_pois.tail_bound)
    return DistanceTable(
        b_values=tuple(b_values),
        t_values=tuple(t_values),
        rho=rho,
        kmax=kmax,
        grid_size=grid_size,
        tail_bound=tail_bound,
        mu=float(mu),
        n0=int(n0),
        tail_tol=float(tail_tol),
    )
