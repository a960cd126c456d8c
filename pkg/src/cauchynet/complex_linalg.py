"""Scalar complex arithmetic and deterministic random number generation.

Complex vectors and matrices throughout the library are plain numpy
``complex128`` arrays (row-major); this module provides the scalar
operations, finiteness checks, and the seeded generator everything else
draws from.

The generator is splitmix64 with Box-Muller normals.  The algorithm is
spelled out in full (no hidden library state) so that a seed produces the
same stream on any platform or in any reimplementation.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonFiniteError

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 output scrambler."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *tags: int) -> int:
    """Derive a decorrelated child seed from a root seed and integer tags.

    Used for per-epoch shuffle streams and per-cell sweep streams so that
    consumption in one stream never perturbs another.
    """
    s = seed & MASK64
    for t in tags:
        s = _mix64((s ^ (((t + 1) * _GOLDEN) & MASK64)) & MASK64)
    return s


class Rng:
    """Deterministic 64-bit generator (splitmix64).

    The state advances by the golden-gamma increment and is scrambled on
    output.  Identical seeds replay identical streams; there is no global
    state.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64
        self._spare_normal = None

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return _mix64(self.state)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def randint(self, n: int) -> int:
        """Integer in [0, n). Modulo bias is below 2^-60 for the sizes used here."""
        return self.next_u64() % n

    def normal(self, sigma: float = 1.0) -> float:
        """N(0, sigma^2) via Box-Muller; the sine mate is cached for the next call."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z * sigma
        r, c, s = self._box_muller()
        self._spare_normal = r * s
        return r * c * sigma

    def _box_muller(self):
        # (u1 + 1) * 2^-53 lies in (0, 1], keeping log(u1) finite.
        u1 = ((self.next_u64() >> 11) + 1) * (1.0 / (1 << 53))
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        return r, math.cos(2.0 * math.pi * u2), math.sin(2.0 * math.pi * u2)

    def shuffle(self, seq) -> None:
        """In-place Fisher-Yates on a mutable sequence."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def permutation(self, n: int) -> np.ndarray:
        idx = list(range(n))
        self.shuffle(idx)
        return np.asarray(idx, dtype=np.int64)


def cmul(a: complex, b: complex) -> complex:
    """Standard complex product."""
    return complex(a) * complex(b)


def cinv(a: complex) -> complex:
    """Multiplicative inverse conj(a)/|a|^2; raises ZeroDivisionError at 0."""
    a = complex(a)
    if a.real == 0.0 and a.imag == 0.0:
        raise ZeroDivisionError("complex inverse of 0")
    return 1.0 / a


def normal_complex(rng: Rng, sigma: float) -> complex:
    """Complex sample with independent N(0, sigma^2) real and imaginary parts.

    Consumes exactly one Box-Muller pair (two uniforms), independent of any
    cached scalar-normal state, so mixed scalar/complex draws stay
    reproducible.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    r, c, s = rng._box_muller()
    return complex(r * c * sigma, r * s * sigma)


def require_finite(arr, what: str):
    """Raise NonFiniteError unless every component of arr is finite."""
    a = np.asarray(arr)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"non-finite values in {what}")
    return a
