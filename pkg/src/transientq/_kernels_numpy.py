"""Pure-numpy kernels: vectorized lockstep over replications.

Functionally identical to ``_kernels_numba``: same splitmix64 streams, same
per-replication draw order, same RK4 arithmetic.  Replications advance in
lockstep — one event per still-active replication per sweep — with index
compression so finished replications stop consuming work.  A replication's
generator state advances only when that replication draws, which is what
keeps the draw order identical to the scalar event loops.

All generator states are held in ``uint64`` *arrays*: numpy array arithmetic
wraps modulo 2**64 silently, whereas scalar uint64 overflow would emit
warnings.
"""

from __future__ import annotations

import math

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
S11 = np.uint64(11)
INV53 = 2.0 ** -53


def _advance(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Advance each splitmix64 state once; return (new_states, uniforms)."""
    states = states + GAMMA
    z = states
    z = (z ^ (z >> S30)) * MIX1
    z = (z ^ (z >> S27)) * MIX2
    z = z ^ (z >> S31)
    return states, ((z >> S11).astype(np.float64) + 0.5) * INV53


def rng_sequence(state, n):
    """Uniform(0,1) stream from a raw initial state (test/debug hook)."""
    states = np.array([state], dtype=np.uint64)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        states, u = _advance(states)
        out[i] = u[0]
    return out


def _stream_states(seed, replications):
    """Initial states for all replications: avalanche-mixed counter values."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + np.arange(1, replications + 1, dtype=np.uint64) * GAMMA
        z = (z ^ (z >> S30)) * MIX1
        z = (z ^ (z >> S27)) * MIX2
        return z ^ (z >> S31)


def sim_autonomous(b, mu, n0, t, seed, replications, max_events):
    """Vectorized twin of the scalar autonomous event loop.

    See ``_kernels_numba.sim_autonomous`` for the event semantics and draw
    order; here every sweep performs one event for every active replication.
    """
    rng = _stream_states(seed, replications)
    state = np.full(replications, n0, dtype=np.int64)
    tau = np.zeros(replications)
    events = np.zeros(replications, dtype=np.int64)
    capped = np.zeros(replications, dtype=bool)
    total_rate = b + mu
    p_birth = b / total_rate
    active = np.flatnonzero(state > 0)
    while active.size:
        events[active] += 1
        over_cap = events[active] > max_events
        if over_cap.any():
            capped[active[over_cap]] = True
            active = active[~over_cap]
            if active.size == 0:
                break
        new_rng, u = _advance(rng[active])
        rng[active] = new_rng
        wait = -np.log(u) / (state[active] * total_rate)
        overshoot = tau[active] + wait > t
        keep = active[~overshoot]
        tau[keep] += wait[~overshoot]
        if keep.size:
            new_rng, v = _advance(rng[keep])
            rng[keep] = new_rng
            state[keep] += np.where(v < p_birth, 1, -1)
            keep = keep[state[keep] > 0]
        active = keep
    return state, int(capped.sum())


def sim_mtminf(b, mu, n0, t, seed, replications, max_events):
    """Vectorized twin of the scalar infinite-server event loop."""
    rng = _stream_states(seed, replications)
    count = np.zeros(replications, dtype=np.int64)
    for _ in range(n0):
        rng, u = _advance(rng)
        count += (-np.log(u) / mu) > t
    if b == mu:
        lam_total = b * n0 * t
    else:
        lam_total = b * n0 * math.expm1((b - mu) * t) / (b - mu)
    x = np.zeros(replications)
    arrivals = np.zeros(replications, dtype=np.int64)
    capped = np.zeros(replications, dtype=bool)
    active = np.arange(replications)
    while active.size:
        new_rng, u = _advance(rng[active])
        rng[active] = new_rng
        x[active] += -np.log(u)
        keep = active[x[active] <= lam_total]
        if keep.size:
            if b == mu:
                atime = x[keep] / (b * n0)
            else:
                atime = np.log1p(x[keep] * (b - mu) / (b * n0)) / (b - mu)
            new_rng, v = _advance(rng[keep])
            rng[keep] = new_rng
            count[keep] += (atime + (-np.log(v) / mu)) > t
            arrivals[keep] += 1
            over_cap = arrivals[keep] > max_events
            if over_cap.any():
                capped[keep[over_cap]] = True
                keep = keep[~over_cap]
        active = keep
    return count, arrivals, int(capped.sum())


def _rhs_autonomous(b, mu, idx, q):
    out = -(idx * (b + mu)) * q
    out[1:] += (b * idx[:-1]) * q[:-1]
    out[:-1] += (mu * idx[1:]) * q[1:]
    return out


def rk4_autonomous(b, mu, q0, dt, nsteps):
    """Vectorized twin of ``_kernels_numba.rk4_autonomous``."""
    q = q0.copy()
    idx = np.arange(q.shape[0], dtype=np.float64)
    for _ in range(nsteps):
        k1 = _rhs_autonomous(b, mu, idx, q)
        k2 = _rhs_autonomous(b, mu, idx, q + (0.5 * dt) * k1)
        k3 = _rhs_autonomous(b, mu, idx, q + (0.5 * dt) * k2)
        k4 = _rhs_autonomous(b, mu, idx, q + dt * k3)
        q = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return q


def _rhs_mtminf(lam, mu, idx, q):
    out = -(lam + idx * mu) * q
    out[1:] += lam * q[:-1]
    out[:-1] += (mu * idx[1:]) * q[1:]
    return out


def rk4_mtminf(mu, q0, dt, nsteps, lam_grid):
    """Vectorized twin of ``_kernels_numba.rk4_mtminf``."""
    q = q0.copy()
    idx = np.arange(q.shape[0], dtype=np.float64)
    for m in range(nsteps):
        lam0 = lam_grid[2 * m]
        lamh = lam_grid[2 * m + 1]
        lam1 = lam_grid[2 * m + 2]
        k1 = _rhs_mtminf(lam0, mu, idx, q)
        k2 = _rhs_mtminf(lamh, mu, idx, q + (0.5 * dt) * k1)
        k3 = _rhs_mtminf(lamh, mu, idx, q + (0.5 * dt) * k2)
        k4 = _rhs_mtminf(lam1, mu, idx, q + dt * k3)
        q = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return q
