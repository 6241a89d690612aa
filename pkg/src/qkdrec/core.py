"""Bit strings, binary entropy and the binary symmetric channel.

All randomness in this package flows through numpy PCG64 generators created
from explicit integer seeds (``rng_from_seed``); nothing reads ambient
entropy, so every simulation is reproducible bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "BitString",
    "BscParams",
    "binary_entropy",
    "inverse_binary_entropy",
    "rng_from_seed",
    "spawn_rng",
    "transmit_bsc",
    "flip_noise",
    "hamming_distance",
]


def rng_from_seed(seed: int) -> np.random.Generator:
    """Return the repo-wide PRNG (PCG64) for a 64-bit integer seed."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rng(seed: int, index: int) -> np.random.Generator:
    """Derive an independent per-task generator from (master seed, task index).

    The derivation is deterministic, so fan-out across workers never changes
    results.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))


class BitString:
    """Fixed-length binary word, packed 64 bits per machine word.

    Immutable after creation.  XOR and Hamming weight operate word-parallel
    on the packed representation.
    """

    __slots__ = ("_words", "_n")

    def __init__(self, bits):
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0/1 valued")
        self._n = int(arr.size)
        packed = np.packbits(arr, bitorder="little")
        pad = (-packed.size) % 8
        if pad:
            packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
        words = packed.view(np.uint64)
        words.flags.writeable = False
        self._words = words

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitString":
        return cls(rng.integers(0, 2, size=n, dtype=np.uint8))

    @classmethod
    def _from_words(cls, words: np.ndarray, n: int) -> "BitString":
        obj = cls.__new__(cls)
        words = np.ascontiguousarray(words, dtype=np.uint64)
        words.flags.writeable = False
        obj._words = words
        obj._n = n
        return obj

    def __len__(self) -> int:
        return self._n

    def to_array(self) -> np.ndarray:
        """Unpacked uint8 array of length n (a fresh, writable copy)."""
        return np.unpackbits(self._words.view(np.uint8), count=self._n, bitorder="little")

    def __xor__(self, other: "BitString") -> "BitString":
        if self._n != other._n:
            raise ValueError(f"length mismatch: {self._n} != {other._n}")
        return BitString._from_words(self._words ^ other._words, self._n)

    def weight(self) -> int:
        """Number of set bits (word-parallel popcount)."""
        return int(np.bitwise_count(self._words).sum())

    def parity(self) -> int:
        return self.weight() & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._n == other._n and bool(np.array_equal(self._words, other._words))

    def __hash__(self):
        return hash((self._n, self._words.tobytes()))

    def __repr__(self) -> str:
        head = "".join(str(b) for b in self.to_array()[:16])
        tail = "..." if self._n > 16 else ""
        return f"BitString(n={self._n}, bits={head}{tail})"

    def to_bytes(self) -> bytes:
        """Serialize: 8-byte little-endian length header + packed bits.

        Bit i of the payload lives in byte i//8 at position i%8 (little bit
        order).  The round trip is bit-exact.
        """
        payload = np.packbits(self.to_array(), bitorder="little").tobytes()
        return self._n.to_bytes(8, "little") + payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitString":
        if len(data) < 8:
            raise ValueError("truncated BitString serialization")
        n = int.from_bytes(data[:8], "little")
        need = (n + 7) // 8
        payload = np.frombuffer(data[8:8 + need], dtype=np.uint8)
        if payload.size != need:
            raise ValueError("truncated BitString payload")
        return cls(np.unpackbits(payload, count=n, bitorder="little"))


class BscParams:
    """Binary symmetric channel with crossover probability p in [0, 0.5)."""

    __slots__ = ("p",)

    def __init__(self, p: float):
        if not 0.0 <= p < 0.5:
            raise ValueError(f"crossover probability must be in [0, 0.5), got {p}")
        self.p = float(p)

    def __repr__(self) -> str:
        return f"BscParams(p={self.p})"


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binary_entropy requires p in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def inverse_binary_entropy(y: float, tol: float = 1e-12) -> float:
    """Inverse of h on [0, 0.5]: the p <= 0.5 with h(p) = y, by bisection."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"inverse_binary_entropy requires y in [0, 1], got {y}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _flip(x: BitString, prob: float, rng: np.random.Generator) -> BitString:
    bits = x.to_array()
    if prob > 0.0:
        flips = rng.random(len(x)) < prob
        bits ^= flips.astype(np.uint8)
    return BitString(bits)


def transmit_bsc(x: BitString, ch: BscParams, rng: np.random.Generator) -> BitString:
    """Send x through the BSC: each bit flips independently with probability p."""
    return _flip(x, ch.p, rng)


def flip_noise(x: BitString, e: float, rng: np.random.Generator) -> BitString:
    """Local randomization: flip each bit of x with probability e <= 0.5."""
    if not 0.0 <= e <= 0.5:
        raise ValueError(f"flip probability must be in [0, 0.5], got {e}")
    return _flip(x, e, rng)


def hamming_distance(a: BitString, b: BitString) -> int:
    """Number of positions where a and b differ."""
    return (a ^ b).weight()
