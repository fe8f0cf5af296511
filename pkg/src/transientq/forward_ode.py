"""Independent oracle: truncated forward equations integrated with RK4.

Both systems' occupancy distributions satisfy linear forward equations.  On
the truncated state space ``{0..k_trunc}`` this module integrates them with
fixed-step classic RK4 — deliberately the simplest auditable scheme, since
oracle code should be simpler than the code it checks.  The upper boundary
*absorbs*: state ``k_trunc`` keeps its full outflow rate but the flux beyond
the boundary is dropped, so truncation error appears as measurable lost mass
(reported in ``Pmf.tail_bound``) instead of being hidden by reflection.

Stability: the generator's stiffest rate is about ``k_trunc * (b + mu)``
(autonomous) or ``k_trunc * mu + max(lambda)`` (infinite-server); explicit
RK4 needs ``dt`` times that rate bounded by ~0.5, enforced at solve time
against the steps actually taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .backend import get_kernels
from .errors import MassLossError, StabilityError
from .models import ModelParams, matched_intensity, _check_time
from .pmf import Pmf, point_mass

#: dt * (stiffest generator rate) must stay at or below this bound
STABILITY_LIMIT = 0.5

#: safety factor applied by the stable-config helpers
_SAFETY = 0.25


@dataclass(frozen=True)
class OdeConfig:
    """Numerical policy for one forward-equation solve.

    Attributes:
        k_trunc: largest retained occupancy state.
        dt: upper bound on the time step; the solver divides ``[0, t]`` into
            equal steps of size at most ``dt`` and lands exactly on ``t``.
        method: integration scheme tag; only ``"rk4"`` is implemented.
        mass_tol: target tail tolerance; the solve fails with
            :class:`~transientq.errors.MassLossError` when the truncation
            boundary absorbs more than ``10 * mass_tol``.
    """

    k_trunc: int
    dt: float
    method: str = "rk4"
    mass_tol: float = 1e-7

    def __post_init__(self):
        k_trunc = int(self.k_trunc)
        if k_trunc < 1:
            raise ValueError(f"k_trunc must be >= 1, got {self.k_trunc!r}")
        dt = float(self.dt)
        if not (math.isfinite(dt) and dt > 0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}; only 'rk4'")
        mass_tol = float(self.mass_tol)
        if not (math.isfinite(mass_tol) and mass_tol > 0):
            raise ValueError(f"mass_tol must be > 0, got {self.mass_tol!r}")
        object.__setattr__(self, "k_trunc", k_trunc)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "mass_tol", mass_tol)


def stable_config_autonomous(
    params: ModelParams, t: float, k_trunc: int, mass_tol: float = 1e-7
) -> OdeConfig:
    """OdeConfig whose step satisfies the autonomous stability bound with margin."""
    rate = max(k_trunc * (params.b + params.mu), 1e-30)
    return OdeConfig(k_trunc=k_trunc, dt=_SAFETY / rate, mass_tol=mass_tol)


def stable_config_mtminf(
    params: ModelParams,
    t: float,
    k_trunc: int,
    intensity: Optional[Callable[[float], float]] = None,
    mass_tol: float = 1e-7,
) -> OdeConfig:
    """OdeConfig satisfying the infinite-server stability bound with margin.

    The intensity's maximum over ``[0, t]`` is estimated from a dense grid
    (exact for the matched intensity, which is monotone).
    """
    t = _check_time(t)
    if intensity is None:
        lam_max = max(matched_intensity(params, 0.0), matched_intensity(params, t))
    else:
        grid = np.linspace(0.0, t, 257)
        lam_max = max(float(intensity(float(s))) for s in grid)
    rate = max(k_trunc * params.mu + lam_max, 1e-30)
    return OdeConfig(k_trunc=k_trunc, dt=_SAFETY / rate, mass_tol=mass_tol)


def _steps(t: float, dt_cap: float) -> tuple[int, float]:
    nsteps = max(1, math.ceil(t / dt_cap - 1e-12))
    return nsteps, t / nsteps


def _finalize(q: np.ndarray, mass_tol: float, what: str) -> Pmf:
    loss = 1.0 - float(q.sum())
    if loss > 10.0 * mass_tol:
        raise MassLossError(
            f"{what}: truncation boundary absorbed mass {loss!r} "
            f"(> 10 * mass_tol = {10.0 * mass_tol!r}); enlarge k_trunc"
        )
    return Pmf.from_raw(q)


def solve_autonomous(
    params: ModelParams, t: float, config: OdeConfig, backend: str | None = None
) -> Pmf:
    """Occupancy pmf of the autonomous system at ``t`` from the forward equations.

    State ``i`` flows out at rate ``i*(b+mu)``, receives births from ``i-1``
    at rate ``b*(i-1)`` and releases from ``i+1`` at rate ``mu*(i+1)``;
    integration starts from a point mass at ``n0``.
    """
    t = _check_time(t)
    if params.n0 > config.k_trunc:
        raise ValueError(
            f"n0={params.n0} exceeds the truncation k_trunc={config.k_trunc}"
        )
    if t == 0.0:
        return point_mass(params.n0, kmax=config.k_trunc)
    nsteps, dt = _steps(t, config.dt)
    stiff = dt * config.k_trunc * (params.b + params.mu)
    if stiff > STABILITY_LIMIT * (1.0 + 1e-9):
        raise StabilityError(
            f"dt*k_trunc*(b+mu) = {stiff!r} exceeds the stability limit "
            f"{STABILITY_LIMIT}; shrink dt or k_trunc"
        )
    _, kernels = get_kernels(backend)
    q0 = np.zeros(config.k_trunc + 1)
    q0[params.n0] = 1.0
    q = kernels.rk4_autonomous(params.b, params.mu, q0, dt, nsteps)
    return _finalize(q, config.mass_tol, "solve_autonomous")


def solve_mtminf(
    params: ModelParams,
    intensity: Optional[Callable[[float], float]],
    t: float,
    config: OdeConfig,
    backend: str | None = None,
) -> Pmf:
    """Occupancy pmf of the infinite-server system at ``t``.

    ``intensity`` is the arrival rate ``lambda(s)``; ``None`` selects the
    mean-matched closed form.  State ``i`` flows out at ``lambda(s) + i*mu``,
    receives arrivals from ``i-1`` at ``lambda(s)`` and releases from
    ``i+1`` at ``mu*(i+1)``.
    """
    t = _check_time(t)
    if params.n0 > config.k_trunc:
        raise ValueError(
            f"n0={params.n0} exceeds the truncation k_trunc={config.k_trunc}"
        )
    if t == 0.0:
        return point_mass(params.n0, kmax=config.k_trunc)
    nsteps, dt = _steps(t, config.dt)
    half_times = np.arange(2 * nsteps + 1) * (0.5 * dt)
    if intensity is None:
        lam_grid = params.b * params.n0 * np.exp((params.b - params.mu) * half_times)
    else:
        lam_grid = np.array([float(intensity(float(s))) for s in half_times])
    if not np.all(np.isfinite(lam_grid)):
        raise ValueError("intensity produced non-finite values on [0, t]")
    if np.any(lam_grid < 0):
        bad = float(half_times[int(np.argmax(lam_grid < 0))])
        raise ValueError(f"intensity({bad!r}) is negative")
    stiff = dt * (config.k_trunc * params.mu + float(lam_grid.max()))
    if stiff > STABILITY_LIMIT * (1.0 + 1e-9):
        raise StabilityError(
            f"dt*(k_trunc*mu + max lambda) = {stiff!r} exceeds the stability "
            f"limit {STABILITY_LIMIT}; shrink dt or k_trunc"
        )
    _, kernels = get_kernels(backend)
    q0 = np.zeros(config.k_trunc + 1)
    q0[params.n0] = 1.0
    q = kernels.rk4_mtminf(params.mu, q0, dt, nsteps, lam_grid)
    return _finalize(q, config.mass_tol, "solve_mtminf")
