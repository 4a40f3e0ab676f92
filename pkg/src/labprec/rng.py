"""Counter-based random streams.

Every random draw is ``Philox4x64-10(key, counter)`` (Salmon et al., 2011,
the same bijection numpy exposes as ``numpy.random.Philox``).  A stream is
identified by a :class:`SeedSpec`; its key is ``(master_seed,
stream_index)`` and block ``b`` of the stream is the counter ``(b, 0, 0,
0)``, giving four 64-bit words per block, consumed in order.  Because a
draw depends only on (key, counter), any stream can be produced
independently of all others, in any order or thread.

Derived seeds (see :func:`derive_seed`) use counters with a nonzero last
word, so they never coincide with stream blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1
PHILOX_M0 = 0xD2E7470EE14C6C93
PHILOX_M1 = 0xCA5A826395121157
PHILOX_W0 = 0x9E3779B97F4A7C15
PHILOX_W1 = 0xBB67AE8584CAA73B
PHILOX_ROUNDS = 10

_DERIVE_TAG = 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if not 0 <= self.stream_index <= MASK64:
            raise ValueError("stream_index must be an unsigned 64-bit integer")

    @property
    def key(self):
        return (self.master_seed, self.stream_index)


def philox_block(counter, key):
    """One Philox4x64-10 block, plain integer arithmetic (reference path)."""
    c0, c1, c2, c3 = counter
    k0, k1 = key
    for r in range(PHILOX_ROUNDS):
        if r:
            k0 = (k0 + PHILOX_W0) & MASK64
            k1 = (k1 + PHILOX_W1) & MASK64
        p0 = PHILOX_M0 * c0
        p1 = PHILOX_M1 * c2
        c0, c1, c2, c3 = ((p1 >> 64) ^ c1 ^ k0) & MASK64, p1 & MASK64, ((p0 >> 64) ^ c3 ^ k1) & MASK64, p0 & MASK64
    return (c0, c1, c2, c3)


def stream_words(seed: SeedSpec, count: int):
    """First ``count`` 64-bit words of a stream (reference path)."""
    out = []
    block = 0
    while len(out) < count:
        out.extend(philox_block((block, 0, 0, 0), seed.key))
        block += 1
    return out[:count]


def derive_seed(master_seed: int, a: int, b: int = 0) -> int:
    """A 64-bit seed that depends on ``(master_seed, a, b)`` only."""
    return philox_block((0, b & MASK64, 0, _DERIVE_TAG), (master_seed & MASK64, a & MASK64))[0]


def bounded(word: int, bound: int) -> int:
    """Map a 64-bit word to ``range(bound)`` using its top 32 bits (bound < 2**32)."""
    return ((word >> 32) * bound) >> 32


def to_unit(word: int) -> float:
    """Map a 64-bit word to the open interval (0, 1) using its top 52 bits.

    ``(j + 0.5) / 2**52`` is exact in double precision, so the result never
    rounds to 0 or 1.
    """
    return ((word >> 12) + 0.5) * 2.0 ** -52
