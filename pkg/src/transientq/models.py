"""Closed-form transient quantities of the two queueing systems.

Two models of device occupancy share the parameter triple ``(b, mu, n0)``:

* **Autonomous system** — no external input; each occupied device spawns new
  occupations at rate ``b`` and frees at rate ``mu``; occupancy is a linear
  birth-death chain started at ``n0`` with absorbing state 0.
* **Mean-matched infinite-server system** — a nonstationary Poisson arrival
  stream of intensity ``lambda(t) = b * m(t)`` feeding infinitely many
  exponential(``mu``) servers, constructed so that both systems share the
  mean occupancy ``m(t) = n0 * exp((b - mu) * t)`` at every ``t``.

This module provides the means, the matched intensity, and the
characteristic functions (CFs) of both occupancy distributions, plus the
exact pmf of the infinite-server system (a binomial convolved with a
Poisson).  All CFs accept a scalar phase or a vector of phases.

Numerical notes
---------------
* **Near-critical branch (b close to mu).**  The general-case CF is the
  ratio ``(b*w - mu - mu*(w-1)*E) / (b*w - mu - b*(w-1)*E)`` raised to
  ``n0``, with ``w = exp(j*u)`` and ``E = exp((b-mu)*t)``.  Both numerator
  and denominator vanish linearly in ``(b - mu)`` as ``b -> mu``, so the
  subtraction loses roughly ``log10(1/(|b-mu|*t))`` digits.  The critical
  closed form ``((w-1)*b*t - w) / ((w-1)*b*t - 1)`` is exact at ``b == mu``
  and deviates from the true value by ``O(|b-mu|*t)`` nearby.  Switching to
  the critical form when ``|b - mu| * t < 1e-8`` keeps the relative error of
  whichever branch is active near ``1e-8`` — the crossover point where the
  cancellation loss of the general form equals the model error of the
  critical form.
* **Denominator floor.**  For real phases the denominator cannot vanish: as
  a function of ``w`` it has its only root at a real ``s* > 1``, strictly
  outside the unit circle (for the critical form, ``Re((w-1)*b*t) <= 0``
  bounds the denominator magnitude by 1).  A defensive floor of ``1e-12``
  relative to the term-magnitude scale still guards the evaluation and
  raises :class:`~transientq.errors.NumericalInstabilityError` if crossed —
  reachable only through off-circle arguments or degenerate inputs.
* **Overflow envelope.**  ``E = exp((b-mu)*t)`` and the Poisson parameter
  ``n0 * exp(-mu*t) * expm1(b*t)`` must be representable in double
  precision, which bounds ``(b-mu)*t`` and ``b*t`` by ~709.  Inputs outside
  that envelope raise ``ValueError`` rather than returning infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import stats

from .errors import NumericalInstabilityError, QuadratureError, TailMassError
from .pmf import Pmf

#: type of a characteristic-function evaluator: (phase u, time t) -> complex;
#: implementations also accept a vector of phases and return a vector.
CfEvaluator = Callable[[Union[float, np.ndarray], float], Union[complex, np.ndarray]]

#: threshold on |b - mu| * t below which the critical closed form is used
CRITICAL_BRANCH_THRESHOLD = 1e-8

#: relative floor on acceptable denominator magnitude in CF evaluation
DENOMINATOR_FLOOR = 1e-12

#: |x| above which exp(x) overflows double precision
_EXP_ENVELOPE = 709.0


@dataclass(frozen=True)
class ModelParams:
    """Parameters shared by both systems.

    Attributes:
        b: birth intensity per occupied device (1/time), ``b >= 0``.
        mu: service (release) rate per occupied device (1/time), ``mu > 0``.
        n0: occupied devices at time zero (nonnegative integer).
    """

    b: float
    mu: float
    n0: int

    def __post_init__(self):
        b = float(self.b)
        mu = float(self.mu)
        if not (math.isfinite(b) and b >= 0):
            raise ValueError(f"b must be finite and >= 0, got {self.b!r}")
        if not (math.isfinite(mu) and mu > 0):
            raise ValueError(f"mu must be finite and > 0, got {self.mu!r}")
        n0 = self.n0
        if isinstance(n0, float) and not n0.is_integer():
            raise ValueError(f"n0 must be an integer, got {self.n0!r}")
        n0 = int(n0)
        if n0 < 0:
            raise ValueError(f"n0 must be >= 0, got {self.n0!r}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "n0", n0)


def _check_time(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"t must be finite and >= 0, got {t!r}")
    return t


def mean_occupancy(params: ModelParams, t: float) -> float:
    """Mean occupancy ``m(t) = n0 * exp((b - mu) * t)`` of either system."""
    t = _check_time(t)
    x = (params.b - params.mu) * t
    if abs(x) > _EXP_ENVELOPE:
        raise ValueError(
            f"(b - mu) * t = {x!r} is outside the double-precision exp envelope"
        )
    return params.n0 * math.exp(x)


def matched_intensity(params: ModelParams, t: float) -> float:
    """Arrival intensity ``lambda(t) = b * m(t)`` that matches the means.

    Computed literally as ``b * mean_occupancy(params, t)`` so the defining
    identity ``lambda(t) == b * m(t)`` holds bit-exactly.
    """
    return params.b * mean_occupancy(params, t)


def _ipow(z: np.ndarray, n: int) -> np.ndarray:
    """Elementwise integer power by repeated squaring.

    Avoids the complex ``exp(n * log(z))`` route and its branch-cut
    ambiguity; for integer exponents the product form is exact up to
    rounding.
    """
    result = np.ones_like(z)
    base = z
    k = int(n)
    while k > 0:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _phase_array(u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=np.float64)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


def _autonomous_ratio(params: ModelParams, w: np.ndarray, t: float) -> np.ndarray:
    """Base ratio of the autonomous CF at ``w`` (normally ``exp(j*u)``).

    Exposed separately so the defensive denominator floor can be exercised
    with off-circle arguments; public callers always pass unit-circle ``w``.
    """
    b, mu = params.b, params.mu
    if abs(b - mu) * t < CRITICAL_BRANCH_THRESHOLD:
        q = (w - 1.0) * (b * t)
        num = q - w
        den = q - 1.0
        scale = np.abs(q) + 1.0
    else:
        x = (b - mu) * t
        if abs(x) > _EXP_ENVELOPE:
            raise ValueError(
                f"(b - mu) * t = {x!r} is outside the double-precision exp envelope"
            )
        growth = math.exp(x)
        drift = b * w - mu
        flux = (w - 1.0) * growth
        num = drift - mu * flux
        den = drift - b * flux
        scale = np.abs(drift) + abs(b) * np.abs(flux)
    bad = np.abs(den) < DENOMINATOR_FLOOR * scale
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NumericalInstabilityError(
            f"CF denominator magnitude {float(abs(den.flat[i])):.6g} fell below "
            f"{DENOMINATOR_FLOOR} of its term scale {scale if np.isscalar(scale) else scale.flat[i]!r} "
            f"at w={w.flat[i]!r} (b={b!r}, mu={params.mu!r}, t={t!r})"
        )
    return num / den


def cf_autonomous(params: ModelParams, u, t: float):
    """Characteristic function of the autonomous system's occupancy at ``t``.

    Returns ``E[exp(j*u*X(t))]`` for the birth-death occupancy ``X(t)``
    started at ``n0``; the value is the base ratio (see module notes) raised
    to the integer power ``n0`` by repeated squaring.  ``u`` may be a scalar
    or a vector of phases.
    """
    t = _check_time(t)
    u_arr, scalar = _phase_array(u)
    w = np.exp(1j * u_arr)
    result = _ipow(_autonomous_ratio(params, w, t), params.n0)
    return complex(result[0]) if scalar else result


def binomial_cf(u, n: int, p: float):
    """CF of Binomial(n, p), computed as ``(1 + p*(w - 1))**n``.

    The ``1 + p*(w-1)`` form is exactly 1 at ``u = 0`` (no rounding), which
    keeps the CF normalization invariant exact.
    """
    u_arr, scalar = _phase_array(u)
    w = np.exp(1j * u_arr)
    result = _ipow(1.0 + p * (w - 1.0), n)
    return complex(result[0]) if scalar else result


def poisson_cf(u, a: float):
    """CF of Poisson(a): ``exp((w - 1) * a)`` with ``w = exp(j*u)``."""
    u_arr, scalar = _phase_array(u)
    w = np.exp(1j * u_arr)
    result = np.exp((w - 1.0) * a)
    return complex(result[0]) if scalar else result


def _poisson_parameter(params: ModelParams, t: float) -> float:
    """Poisson component parameter ``n0 * exp(-mu*t) * (exp(b*t) - 1)``."""
    if params.b * t > _EXP_ENVELOPE:
        raise ValueError(
            f"b * t = {params.b * t!r} is outside the double-precision exp envelope"
        )
    return params.n0 * math.exp(-params.mu * t) * math.expm1(params.b * t)


def cf_poisson_matched(params: ModelParams, u, t: float):
    """CF of the mean-matched infinite-server occupancy at ``t``.

    The occupancy splits into two independent parts — survivors of the
    initial ``n0`` (Binomial with success probability ``exp(-mu*t)``) and
    arrivals still in service (Poisson with parameter
    ``n0 * exp(-mu*t) * (exp(b*t) - 1)``) — so the CF is the product of the
    two component CFs.
    """
    t = _check_time(t)
    u_arr, scalar = _phase_array(u)
    p = math.exp(-params.mu * t)
    a = _poisson_parameter(params, t)
    result = binomial_cf(u_arr, params.n0, p) * poisson_cf(u_arr, a)
    return complex(result[0]) if scalar else result


def _adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int
) -> float:
    """Adaptive Simpson quadrature with absolute tolerance and depth cap."""

    def simpson(fa, fm, fb, width):
        return width / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive refinement exceeded {max_depth} levels on "
                f"[{a!r}, {b!r}] (last correction {delta!r}, tol {tol!r})"
            )
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth + 1
        )

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)


#: absolute tolerance and refinement cap for the intensity integral
QUADRATURE_TOL = 1e-12
QUADRATURE_MAX_DEPTH = 30


def cf_poisson_general(
    params: ModelParams, intensity: Callable[[float], float], u, t: float
):
    """CF of the infinite-server occupancy under an arbitrary intensity.

    For an arrival intensity ``lambda(s)`` the occupancy CF is the binomial
    survivor factor times ``exp((w-1) * exp(-mu*t) * I)`` with
    ``I = integral_0^t lambda(s) * exp(mu*s) ds``, evaluated here by
    adaptive Simpson quadrature (absolute tolerance ``1e-12``, refinement
    cap 30).  With ``intensity = matched_intensity`` this reduces to
    :func:`cf_poisson_matched` up to quadrature error.
    """
    t = _check_time(t)
    u_arr, scalar = _phase_array(u)
    mu = params.mu

    def integrand(s: float) -> float:
        lam = float(intensity(s))
        if lam < 0:
            raise ValueError(f"intensity({s!r}) = {lam!r} is negative")
        return lam * math.exp(mu * s)

    weighted = _adaptive_simpson(integrand, 0.0, t, QUADRATURE_TOL, QUADRATURE_MAX_DEPTH)
    p = math.exp(-mu * t)
    w = np.exp(1j * u_arr)
    result = _ipow(1.0 + p * (w - 1.0), params.n0) * np.exp((w - 1.0) * (p * weighted))
    return complex(result[0]) if scalar else result


def analytic_pmf_poisson(
    params: ModelParams, t: float, kmax: int, tail_tol: float = 1e-9
) -> Pmf:
    """Exact pmf of the mean-matched infinite-server occupancy on ``0..kmax``.

    Convolves the Binomial(``n0``, ``exp(-mu*t)``) survivor distribution with
    the Poisson(``n0 * exp(-mu*t) * (exp(b*t) - 1)``) arrival distribution;
    every retained entry is exact up to rounding.  Raises
    :class:`~transientq.errors.TailMassError` when the mass beyond ``kmax``
    is not below ``tail_tol``.
    """
    t = _check_time(t)
    kmax = int(kmax)
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    p = math.exp(-params.mu * t)
    a = _poisson_parameter(params, t)
    binom = stats.binom.pmf(np.arange(params.n0 + 1), params.n0, p)
    pois = stats.poisson.pmf(np.arange(kmax + 1), a)
    probs = np.convolve(binom, pois)[: kmax + 1]
    tail = max(0.0, 1.0 - float(probs.sum()))
    if tail >= tail_tol:
        raise TailMassError(
            f"mass {tail!r} beyond kmax={kmax} is not below tail_tol={tail_tol!r} "
            f"(b={params.b!r}, mu={params.mu!r}, n0={params.n0}, t={t!r})"
        )
    return Pmf(probs=probs, tail_bound=tail)


def autonomous_cf(params: ModelParams) -> CfEvaluator:
    """CF evaluator ``(u, t) -> complex`` for the autonomous system."""

    def evaluator(u, t):
        return cf_autonomous(params, u, t)

    return evaluator


def poisson_matched_cf(params: ModelParams) -> CfEvaluator:
    """CF evaluator ``(u, t) -> complex`` for the matched infinite-server system."""

    def evaluator(u, t):
        return cf_poisson_matched(params, u, t)

    return evaluator
