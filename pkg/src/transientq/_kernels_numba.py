"""Compiled kernels: per-replication scalar event loops and RK4 steppers.

The random-number algorithm, the order in which each replication consumes
its draws, and the arithmetic of the RK4 stages are the contract shared with
``_kernels_numpy``; the two modules must stay in lockstep (verified by
tests).  All splitmix64 constants are module-level ``np.uint64`` values —
mixing plain integer literals into uint64 expressions would silently promote
to float64 under numba's numpy semantics.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
S11 = np.uint64(11)
INV53 = 2.0 ** -53


@njit(cache=True)
def _next_u01(state):
    """Advance one splitmix64 state; return (new_state, uniform in (0,1))."""
    state = state + GAMMA
    z = state
    z = (z ^ (z >> S30)) * MIX1
    z = (z ^ (z >> S27)) * MIX2
    z = z ^ (z >> S31)
    return state, (np.float64(z >> S11) + 0.5) * INV53


@njit(cache=True)
def rng_sequence(state, n):
    """Uniform(0,1) stream from a raw initial state (test/debug hook)."""
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        state, u = _next_u01(state)
        out[i] = u
    return out


@njit(cache=True)
def _stream_seed(seed, replication):
    """Initial state for one replication: avalanche-mixed counter value."""
    z = seed + (replication + np.uint64(1)) * GAMMA
    z = (z ^ (z >> S30)) * MIX1
    z = (z ^ (z >> S27)) * MIX2
    return z ^ (z >> S31)


@njit(cache=True)
def sim_autonomous(b, mu, n0, t, seed, replications, max_events):
    """Final occupancy of each replication of the autonomous system at t.

    Per replication, from state ``n0``: wait Exponential(state*(b+mu)); with
    probability ``b/(b+mu)`` step up, else down; state 0 absorbs.  Draw
    order per replication: [wait, choice, wait, choice, ...]; the wait draw
    that overshoots ``t`` is consumed, its choice draw is not.

    Returns ``(states, capped)`` where ``capped`` counts replications that
    exceeded ``max_events`` wait draws.
    """
    states = np.empty(replications, dtype=np.int64)
    capped = 0
    total_rate = b + mu
    p_birth = b / total_rate
    for r in range(replications):
        stream = _stream_seed(seed, np.uint64(r))
        state = n0
        tau = 0.0
        events = 0
        ok = True
        while state > 0:
            events += 1
            if events > max_events:
                ok = False
                break
            stream, u = _next_u01(stream)
            wait = -math.log(u) / (state * total_rate)
            if tau + wait > t:
                break
            tau += wait
            stream, v = _next_u01(stream)
            if v < p_birth:
                state += 1
            else:
                state -= 1
        if not ok:
            capped += 1
        states[r] = state
    return states, capped


@njit(cache=True)
def sim_mtminf(b, mu, n0, t, seed, replications, max_events):
    """Occupancy and arrival count per replication of the matched system.

    Per replication: each of the ``n0`` initial customers draws an
    Exponential(mu) remaining service; arrival epochs come from inverting
    the cumulative intensity at the partial sums of standard-exponential
    gaps; each arrival draws an Exponential(mu) service.  Draw order per
    replication: n0 service draws, then (gap, service) pairs; the gap draw
    that overshoots the total cumulative intensity is consumed with no
    service draw.

    Returns ``(states, arrivals, capped)``.
    """
    states = np.empty(replications, dtype=np.int64)
    arrivals = np.empty(replications, dtype=np.int64)
    capped = 0
    if b == mu:
        lam_total = b * n0 * t
    else:
        lam_total = b * n0 * math.expm1((b - mu) * t) / (b - mu)
    for r in range(replications):
        stream = _stream_seed(seed, np.uint64(r))
        count = 0
        for _ in range(n0):
            stream, u = _next_u01(stream)
            if -math.log(u) / mu > t:
                count += 1
        x = 0.0
        narr = 0
        ok = True
        while True:
            stream, u = _next_u01(stream)
            x += -math.log(u)
            if x > lam_total:
                break
            if b == mu:
                atime = x / (b * n0)
            else:
                atime = math.log1p(x * (b - mu) / (b * n0)) / (b - mu)
            stream, v = _next_u01(stream)
            if atime + (-math.log(v) / mu) > t:
                count += 1
            narr += 1
            if narr > max_events:
                ok = False
                break
        if not ok:
            capped += 1
        states[r] = count
        arrivals[r] = narr
    return states, arrivals, capped


@njit(cache=True)
def _rhs_autonomous(b, mu, q, out):
    K = q.shape[0] - 1
    for i in range(K + 1):
        acc = -(i * (b + mu)) * q[i]
        if i >= 1:
            acc = acc + (b * (i - 1)) * q[i - 1]
        if i <= K - 1:
            acc = acc + (mu * (i + 1)) * q[i + 1]
        out[i] = acc


@njit(cache=True)
def rk4_autonomous(b, mu, q0, dt, nsteps):
    """Classic RK4 on the truncated forward equations of the autonomous chain.

    The upper boundary absorbs: state ``K`` keeps its full outflow rate but
    the flux to ``K+1`` is dropped, so truncation error shows up as
    measurable mass loss.
    """
    n = q0.shape[0]
    q = q0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    stage = np.empty(n)
    for _ in range(nsteps):
        _rhs_autonomous(b, mu, q, k1)
        for i in range(n):
            stage[i] = q[i] + (0.5 * dt) * k1[i]
        _rhs_autonomous(b, mu, stage, k2)
        for i in range(n):
            stage[i] = q[i] + (0.5 * dt) * k2[i]
        _rhs_autonomous(b, mu, stage, k3)
        for i in range(n):
            stage[i] = q[i] + dt * k3[i]
        _rhs_autonomous(b, mu, stage, k4)
        for i in range(n):
            q[i] = q[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return q


@njit(cache=True)
def _rhs_mtminf(lam, mu, q, out):
    K = q.shape[0] - 1
    for i in range(K + 1):
        acc = -(lam + i * mu) * q[i]
        if i >= 1:
            acc = acc + lam * q[i - 1]
        if i <= K - 1:
            acc = acc + (mu * (i + 1)) * q[i + 1]
        out[i] = acc


@njit(cache=True)
def rk4_mtminf(mu, q0, dt, nsteps, lam_grid):
    """RK4 on the truncated forward equations of the infinite-server system.

    ``lam_grid`` holds the arrival intensity at all half-step points
    (length ``2*nsteps + 1``); step ``m`` uses entries ``2m``, ``2m+1``,
    ``2m+2`` for its four stages.  Upper boundary absorbs as in
    :func:`rk4_autonomous`.
    """
    n = q0.shape[0]
    q = q0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    stage = np.empty(n)
    for m in range(nsteps):
        lam0 = lam_grid[2 * m]
        lamh = lam_grid[2 * m + 1]
        lam1 = lam_grid[2 * m + 2]
        _rhs_mtminf(lam0, mu, q, k1)
        for i in range(n):
            stage[i] = q[i] + (0.5 * dt) * k1[i]
        _rhs_mtminf(lamh, mu, stage, k2)
        for i in range(n):
            stage[i] = q[i] + (0.5 * dt) * k2[i]
        _rhs_mtminf(lamh, mu, stage, k3)
        for i in range(n):
            stage[i] = q[i] + dt * k3[i]
        _rhs_mtminf(lam1, mu, stage, k4)
        for i in range(n):
            q[i] = q[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return q
