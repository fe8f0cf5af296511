"""Recover lattice pmfs from characteristic functions with controlled aliasing.

For an integer-valued random variable the CF is periodic in the phase, and
the probability at lattice point ``i`` is the Fourier coefficient
``(1/2*pi) * integral_{-pi}^{pi} exp(-j*u*i) * cf(u) du``.  Sampling the CF
at the ``M`` equispaced phases ``u_k = 2*pi*k/M`` and taking the discrete
transform

    probs[i] = (1/M) * sum_k exp(-j*u_k*i) * cf(u_k)

reproduces that integral *exactly up to aliasing*: the recovered value equals
``P(i) + P(i+M) + P(i+2M) + ...``.  The quadrature question therefore
becomes a tail-mass question — enlarge ``M`` until the mass beyond the
sampling period is below tolerance, and the error bound is provable instead
of asymptotic.  Truncation sizes are picked by a Chernoff-style bound on the
probability generating functions of both systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, NonRealProbabilityError, TransientQError
from .models import (
    CfEvaluator,
    ModelParams,
    _autonomous_ratio,
    _phase_array,
    mean_occupancy,
    _poisson_parameter,
    CRITICAL_BRANCH_THRESHOLD,
)
from .pmf import Pmf

#: imaginary residue above which recovered probabilities are rejected
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class InversionConfig:
    """Numerical policy for one CF inversion.

    Attributes:
        grid_size: number ``M`` of CF sample phases; a power of two with
            ``grid_size >= 2 * kmax`` so the retained support sits in the
            alias-free half of the period.
        kmax: largest occupancy index retained in the recovered pmf.
        tail_tol: acceptable estimated mass beyond ``kmax``; inversion fails
            with :class:`~transientq.errors.AliasingError` at or above it.
    """

    grid_size: int
    kmax: int
    tail_tol: float

    def __post_init__(self):
        grid_size = int(self.grid_size)
        kmax = int(self.kmax)
        if grid_size < 1 or (grid_size & (grid_size - 1)) != 0:
            raise ValueError(f"grid_size must be a power of two, got {self.grid_size!r}")
        if kmax < 0:
            raise ValueError(f"kmax must be >= 0, got {self.kmax!r}")
        if grid_size < 2 * kmax:
            raise ValueError(
                f"grid_size={grid_size} must be >= 2*kmax={2 * kmax}"
            )
        tail_tol = float(self.tail_tol)
        if not (math.isfinite(tail_tol) and tail_tol > 0):
            raise ValueError(f"tail_tol must be > 0, got {self.tail_tol!r}")
        object.__setattr__(self, "grid_size", grid_size)
        object.__setattr__(self, "kmax", kmax)
        object.__setattr__(self, "tail_tol", tail_tol)


def _evaluate_cf(cf: CfEvaluator, u: np.ndarray, t: float) -> np.ndarray:
    """Evaluate a CF on a phase grid, vectorized when the callable allows."""
    try:
        out = np.asarray(cf(u, t), dtype=np.complex128)
        if out.shape == u.shape:
            return out
    except TypeError:
        pass
    return np.array([complex(cf(float(x), t)) for x in u], dtype=np.complex128)


def invert_cf(cf: CfEvaluator, t: float, config: InversionConfig) -> Pmf:
    """Recover the pmf on ``{0..kmax}`` from a characteristic function.

    Samples ``cf`` at the ``grid_size`` phases ``u_k = 2*pi*k/grid_size``,
    applies the discrete transform, and keeps indices ``0..kmax``.  The
    reported ``tail_bound`` is ``1 - sum(probs)``, which accounts for both
    the discarded tail and the alias mass folded into the retained entries.

    Raises:
        NonRealProbabilityError: imaginary residue above ``1e-10`` (the CF
            does not describe an integer lattice distribution).
        NegativeProbabilityError: an entry below the ``-1e-12`` floor.
        AliasingError: ``tail_bound`` at or above ``config.tail_tol``.
    """
    M = config.grid_size
    u = 2.0 * np.pi * np.arange(M) / M
    samples = _evaluate_cf(cf, u, t)
    if abs(samples[0] - 1.0) > 1e-9:
        raise ValueError(f"cf(0, t) = {samples[0]!r} violates CF normalization")
    coeffs = np.fft.fft(samples) / M
    retained = coeffs[: config.kmax + 1]
    residue = float(np.max(np.abs(retained.imag)))
    if residue > IMAG_RESIDUE_TOL:
        raise NonRealProbabilityError(
            f"imaginary residue {residue!r} exceeds {IMAG_RESIDUE_TOL} "
            f"(non-lattice CF or inconsistent sampling)"
        )
    result = Pmf.from_raw(retained.real.copy())
    if result.tail_bound >= config.tail_tol:
        raise AliasingError(
            f"tail_bound {result.tail_bound!r} >= tail_tol {config.tail_tol!r}; "
            f"enlarge grid_size/kmax (currently {M}/{config.kmax})"
        )
    return result


def cf_from_pmf(probs) -> CfEvaluator:
    """Synthesize the CF evaluator of a finite-support lattice pmf.

    The returned evaluator ignores ``t`` (the distribution is fixed); it is
    the exact finite Fourier sum, so a round trip through :func:`invert_cf`
    reproduces the input to rounding error whenever the support fits within
    the sampling period.
    """
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise ValueError("probs must be a non-empty 1-D vector")
    idx = np.arange(probs.size)

    def evaluator(u, t: float = 0.0):
        u_arr, scalar = _phase_array(u)
        vals = np.exp(1j * np.outer(u_arr, idx)) @ probs
        return complex(vals[0]) if scalar else vals

    return evaluator


def _log_pgf_poisson_side(params: ModelParams, t: float, s: np.ndarray) -> np.ndarray:
    """log E[s^X] for the infinite-server occupancy (entire in ``s``)."""
    p = math.exp(-params.mu * t)
    a = _poisson_parameter(params, t)
    return params.n0 * np.log1p(p * (s - 1.0)) + (s - 1.0) * a


def _log_pgf_autonomous(params: ModelParams, t: float, s: np.ndarray) -> np.ndarray:
    """log E[s^X] for the autonomous occupancy; NaN where out of domain."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = _autonomous_ratio(params, s.astype(np.complex128), t).real
        logr = np.where(ratio > 0, np.log(np.where(ratio > 0, ratio, 1.0)), np.nan)
    return params.n0 * logr


def _autonomous_pole(params: ModelParams, t: float) -> float | None:
    """Real singularity ``s* > 1`` of the autonomous PGF, if finite."""
    b, mu = params.b, params.mu
    if abs(b - mu) * t < CRITICAL_BRANCH_THRESHOLD:
        if b <= 0 or t <= 0:
            return None
        return 1.0 + 1.0 / (b * t)
    if b <= 0:
        return None
    growth = math.exp((b - mu) * t)
    pole = (b * growth - mu) / (b * (growth - 1.0))
    return pole if math.isfinite(pole) and pole > 1.0 else None


def _chernoff_tail_bound(params: ModelParams, t: float, kmax: int) -> float:
    """Upper bound on max of both systems' masses beyond ``kmax``.

    Uses ``P(X > kmax) <= PGF(s) / s**(kmax+1)`` minimized over a grid of
    ``s > 1`` — inside the autonomous PGF's radius of convergence on one
    side, unbounded on the entire Poisson side.
    """
    exponent = kmax + 1
    s_free = 1.0 + np.geomspace(0.02, 50.0, 48)
    log_pois = _log_pgf_poisson_side(params, t, s_free) - exponent * np.log(s_free)
    bound_pois = math.exp(min(float(np.nanmin(log_pois)), 700.0))

    pole = _autonomous_pole(params, t)
    if pole is None:
        s_auto = s_free
    else:
        s_auto = 1.0 + np.linspace(0.05, 0.95, 19) * (pole - 1.0)
    log_auto = _log_pgf_autonomous(params, t, s_auto) - exponent * np.log(s_auto)
    min_log_auto = float(np.nanmin(log_auto)) if not np.all(np.isnan(log_auto)) else 700.0
    bound_auto = math.exp(min(min_log_auto, 700.0))
    return max(bound_pois, bound_auto)


def choose_truncation(params: ModelParams, t: float, tail_tol: float) -> InversionConfig:
    """Size the inversion grid so aliasing stays well below ``tail_tol``.

    Grows ``kmax = ceil(mean + c*sqrt(mean))`` until the Chernoff-style
    bound on both systems' tail mass beyond ``kmax`` drops below
    ``tail_tol / 10``, then takes ``grid_size`` as the smallest power of two
    at least ``2 * (kmax + 1)``.
    """
    if not (0.0 < tail_tol < 1.0):
        raise ValueError(f"tail_tol must be in (0, 1), got {tail_tol!r}")
    t = float(t)
    mean = mean_occupancy(params, t)
    spread = math.sqrt(mean)
    c = 3.0
    kmax = max(params.n0, math.ceil(mean + c * spread), 1)
    target = tail_tol / 10.0
    while _chernoff_tail_bound(params, t, kmax) >= target:
        c += max(1.0, 0.15 * c)
        kmax = max(kmax + 1, math.ceil(mean + c * spread))
        if kmax > 5_000_000:
            raise TransientQError(
                f"could not certify tail mass below {target!r} by kmax={kmax} "
                f"(b={params.b!r}, mu={params.mu!r}, n0={params.n0}, t={t!r})"
            )
    grid_size = 1 << (2 * (kmax + 1) - 1).bit_length()
    return InversionConfig(grid_size=grid_size, kmax=kmax, tail_tol=tail_tol)
