"""Portable, documented random-number generation for the simulators.

The generator is splitmix64: a 64-bit counter advanced by a fixed odd
increment (the golden-gamma constant), with each output produced by a
three-stage avalanche mix of the counter.  It is tiny, fast, passes BigCrush
as the seeding stage of the xoshiro family, and — crucially here — is exactly
reproducible from a documented algorithm on every platform, which makes
bit-identical replay of simulation results an enforceable contract rather
than a hope.

Algorithm (all arithmetic modulo 2**64):

    state  = state + 0x9E3779B97F4A7C15
    z      = state
    z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z      = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output = z ^ (z >> 31)

Uniform doubles on the open interval (0, 1) are formed from the top 53 bits:
``u = ((output >> 11) + 0.5) * 2**-53``.  The +0.5 offset keeps the value
strictly inside (0, 1), so ``log(u)`` is always finite — exponential draws
never degenerate.

Replication streams: replication ``r`` of a run seeded with ``seed`` starts
from the state ``mix(seed + (r+1)*GAMMA)``, where ``mix`` is the three-stage
avalanche above — i.e. the ``(r+1)``-th raw output word of a splitmix64
sequence whose counter starts at ``seed``.  The mix is a bijection, so two
streams coincide only if their counter inputs coincide, which for distinct
seeds requires the seeds to differ by an exact small multiple of the odd
constant GAMMA — adjacent integer seeds (1, 2, 3, ...) therefore yield
disjoint stream families for any realistic replication count.  (A plain
``seed XOR r`` derivation fails exactly there: seeds 1 and 2 generate the
same *set* of streams over a dense replication range, so order-insensitive
statistics collide.)  Streams are order-independent — replications can run
in any order or in parallel and still consume exactly the draws they would
consume sequentially, which is what keeps the numba and numpy execution
paths interchangeable.

This module holds the pure-Python reference implementation used by tests and
by documentation; the performance kernels re-implement the identical
algorithm and are verified bit-for-bit against this reference.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV53 = 2.0 ** -53


def stream_seed(seed: int, replication: int) -> int:
    """Initial generator state for one replication of a seeded run.

    Equals the ``(replication+1)``-th output word of a splitmix64 sequence
    whose counter starts at ``seed`` (see the module docstring for why this
    beats XOR-ing the replication index into the seed).
    """
    z = (int(seed) + (int(replication) + 1) * GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance the state once; return ``(new_state, output_word)``."""
    state = (state + GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    z = z ^ (z >> 31)
    return state, z


def u01_from_word(word: int) -> float:
    """Map a 64-bit output word to a double in the open interval (0, 1)."""
    return ((word >> 11) + 0.5) * INV53


class SplitMix64:
    """Reference generator: uniform and exponential draws from one stream."""

    def __init__(self, seed: int, replication: int = 0):
        self.state = stream_seed(seed, replication)

    def next_word(self) -> int:
        self.state, word = splitmix64_next(self.state)
        return word

    def uniform(self) -> float:
        """Uniform double in (0, 1)."""
        return u01_from_word(self.next_word())

    def exponential(self, rate: float) -> float:
        """Exponential variate with the given rate (inverse-CDF method)."""
        import math

        return -math.log(self.uniform()) / rate
