"""Second independent oracle: event-driven Monte Carlo for both systems.

Replications are driven by per-replication splitmix64 streams derived as
``seed XOR replication_index``, so results are deterministic for a fixed
seed, order-independent across replications, and identical between the
compiled and pure-numpy kernel backends (which consume the same streams in
the same order).

The autonomous simulator runs the continuous-time chain event by event
(exponential holding times, birth with probability ``b/(b+mu)``, state 0
absorbing).  The infinite-server simulator draws arrival epochs exactly by
inverting the cumulative intensity — the partial sums of standard
exponential gaps mapped through the closed-form inverse — rather than by
thinning, which makes it exact and branch-free.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .backend import get_kernels
from .errors import SimulationCapError
from .models import ModelParams, _check_time
from .pmf import Pmf
from .rng import MASK64

#: generator algorithms accepted by SimConfig
SUPPORTED_RNGS = ("splitmix64",)


@dataclass(frozen=True)
class SimConfig:
    """Reproducibility contract for one simulation run.

    Attributes:
        replications: number of independent replications (>= 1).
        seed: 64-bit base seed; replication ``r`` uses stream ``seed XOR r``.
        rng: generator algorithm name; only ``"splitmix64"`` is supported.
        max_events: per-replication cap on event draws, beyond which the run
            aborts with :class:`~transientq.errors.SimulationCapError`.
    """

    replications: int
    seed: int
    rng: str = "splitmix64"
    max_events: int = 1_000_000

    def __post_init__(self):
        replications = int(self.replications)
        if replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications!r}")
        if self.rng not in SUPPORTED_RNGS:
            raise ValueError(
                f"unsupported rng {self.rng!r}; supported: {SUPPORTED_RNGS}"
            )
        seed = int(self.seed) & MASK64
        max_events = int(self.max_events)
        if max_events < 1:
            raise ValueError(f"max_events must be >= 1, got {self.max_events!r}")
        object.__setattr__(self, "replications", replications)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "max_events", max_events)


@dataclass(frozen=True, eq=False)
class SimResult:
    """Empirical occupancy histogram with its reproducibility metadata.

    Attributes:
        counts: ``counts[i]`` = replications ending with occupancy ``i``.
        replications: total replications (equals ``counts.sum()``).
        seed: base seed the run used.
        elapsed: kernel wall time in seconds.
        backend: kernel backend that produced the result.
        arrival_counts: infinite-server runs only — histogram of the number
            of arrivals per replication (``None`` for the autonomous system).
    """

    counts: np.ndarray
    replications: int
    seed: int
    elapsed: float
    backend: str
    arrival_counts: Optional[np.ndarray] = None

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        if int(counts.sum()) != self.replications:
            raise ValueError(
                f"counts sum {int(counts.sum())} != replications {self.replications}"
            )
        if self.arrival_counts is not None:
            arrivals = np.asarray(self.arrival_counts, dtype=np.int64)
            arrivals.setflags(write=False)
            object.__setattr__(self, "arrival_counts", arrivals)
            if int(arrivals.sum()) != self.replications:
                raise ValueError("arrival_counts must sum to replications")

    def empirical_pmf(self) -> Pmf:
        """Occupancy histogram normalized to probabilities."""
        return Pmf.from_raw(self.counts / self.replications)

    def empirical_mean(self) -> float:
        return float(np.arange(self.counts.size) @ self.counts) / self.replications


def cumulative_intensity(params: ModelParams, t: float) -> float:
    """Expected arrivals on ``[0, t]`` under the mean-matched intensity.

    ``Lambda(t) = b*n0*(exp((b-mu)*t) - 1)/(b-mu)``, with the continuous
    limit ``b*n0*t`` at ``b == mu``.
    """
    t = _check_time(t)
    if params.b == params.mu:
        return params.b * params.n0 * t
    return params.b * params.n0 * math.expm1((params.b - params.mu) * t) / (
        params.b - params.mu
    )


def _run(kernel_call, config: SimConfig, backend_name: str):
    tic = time.perf_counter()
    out = kernel_call()
    elapsed = time.perf_counter() - tic
    return out, elapsed


def simulate_autonomous(
    params: ModelParams, t: float, config: SimConfig, backend: str | None = None
) -> SimResult:
    """Monte Carlo occupancy histogram of the autonomous system at ``t``."""
    t = _check_time(t)
    name, kernels = get_kernels(backend)
    (states, capped), elapsed = _run(
        lambda: kernels.sim_autonomous(
            params.b,
            params.mu,
            params.n0,
            t,
            np.uint64(config.seed),
            config.replications,
            config.max_events,
        ),
        config,
        name,
    )
    if capped:
        raise SimulationCapError(
            f"{capped} replications exceeded max_events={config.max_events}"
        )
    counts = np.bincount(states, minlength=1)
    return SimResult(
        counts=counts,
        replications=config.replications,
        seed=config.seed,
        elapsed=elapsed,
        backend=name,
    )


def simulate_mtminf(
    params: ModelParams, t: float, config: SimConfig, backend: str | None = None
) -> SimResult:
    """Monte Carlo occupancy histogram of the matched infinite-server system."""
    t = _check_time(t)
    name, kernels = get_kernels(backend)
    (states, arrivals, capped), elapsed = _run(
        lambda: kernels.sim_mtminf(
            params.b,
            params.mu,
            params.n0,
            t,
            np.uint64(config.seed),
            config.replications,
            config.max_events,
        ),
        config,
        name,
    )
    if capped:
        raise SimulationCapError(
            f"{capped} replications exceeded max_events={config.max_events}"
        )
    counts = np.bincount(states, minlength=1)
    arrival_counts = np.bincount(arrivals, minlength=1)
    return SimResult(
        counts=counts,
        replications=config.replications,
        seed=config.seed,
        elapsed=elapsed,
        backend=name,
        arrival_counts=arrival_counts,
    )
