"""Deterministic per-record random streams.

Every random decision in the toolkit draws from a :class:`RandomStream`
derived from ``(seed, stream_id)``, where the stream id is a record's
``doc_id`` (or a fixed domain constant for non-record uses).  Any record can
therefore be regenerated in isolation, and streams never share state across
workers.

The generator is SplitMix64 with the standard constants, restated here so an
independent implementation can reproduce the streams bit for bit:

* state advances by the odd constant ``0x9E3779B97F4A7C15`` (mod 2**64);
* each output applies the finalizer
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31``;
* :func:`derive_stream` seeds the state with
  ``finalize(seed XOR (doc_id * 0x9E3779B97F4A7C15))``.

Draw-count discipline matters: decision sequences must stay aligned when only
probability parameters change, so every integer helper consumes a fixed
number of uniforms.  ``random()`` consumes one output (53-bit mantissa),
``randbelow(n)`` consumes exactly one draw via ``floor(u * n)`` (bias below
2**-27 for n < 2**26), ``shuffle`` consumes len-1 draws.  ``poisson`` uses
Knuth's product method and consumes a variable number of draws.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_INV_2_53 = 2.0 ** -53


def mix64(value: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijection with full avalanche."""
    z = value & _MASK64
    z ^= z >> 30
    z = (z * _MIX_A) & _MASK64
    z ^= z >> 27
    z = (z * _MIX_B) & _MASK64
    z ^= z >> 31
    return z


class RandomStream:
    """SplitMix64 stream with fixed-consumption sampling helpers."""

    __slots__ = ("_state",)

    def __init__(self, state: int) -> None:
        self._state = state & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision; one draw."""
        return (self.next_uint64() >> 11) * _INV_2_53

    def randbelow(self, n: int) -> int:
        """Uniform int in [0, n); consumes exactly one draw."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        value = int(self.random() * n)
        return value if value < n else n - 1

    def choice(self, seq):
        """Uniform element of a non-empty sequence; one draw."""
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle; consumes len(items)-1 draws."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def poisson(self, lam: float) -> int:
        """Poisson draw via Knuth's product method; variable draw count."""
        if lam <= 0:
            raise ValueError("poisson requires lam > 0")
        threshold = math.exp(-lam)
        k = 0
        p = 1.0
        while True:
            p *= self.random()
            if p <= threshold:
                return k
            k += 1


def derive_stream(seed: int, stream_id: int) -> RandomStream:
    """Independent stream for (seed, stream_id); same inputs, same stream."""
    return RandomStream(mix64(seed ^ ((stream_id * _GOLDEN) & _MASK64)))
