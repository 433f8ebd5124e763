"""Exact arithmetic modulo an odd prime.

Primality testing, modular inverses (single and batched), balanced residues,
the distance to the nearest integer, and the additive characters
``e(a/p) = exp(2 pi i a / p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "DEFAULT_TABLE_CAP",
    "PrimeModulus",
    "get_modulus",
    "is_prime",
    "mod_inverse",
    "balanced_residue",
    "dist_nearest_int",
    "e",
]

DEFAULT_TABLE_CAP = 10**7

# Deterministic below 318665857834031151167461 (> 2^64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for all 64-bit ``n``."""
    n = int(n)
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def _egcd_inverse(n: int, p: int) -> int:
    old_r, r = n, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ValueError(f"{n} is not invertible modulo {p}")
    return old_s % p


def _batch_inverses(p: int) -> np.ndarray:
    # n^(p-2) mod p for all n at once, by vectorised square-and-multiply.
    # Needs p^2 < 2^63.
    base = np.arange(p, dtype=np.int64)
    out = np.ones(p, dtype=np.int64)
    e_ = p - 2
    while e_:
        if e_ & 1:
            out = out * base % p
        base = base * base % p
        e_ >>= 1
    out[0] = 0
    return out


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime ``p`` with lazily built inverse and root-of-unity tables.

    The tables are only materialised when ``p <= table_cap``; above the cap
    characters are evaluated on demand and table-backed routines refuse to
    run.  Built tables are read-only, so an instance can be shared freely.
    """

    p: int
    table_cap: int = field(default=DEFAULT_TABLE_CAP, compare=False)

    def __post_init__(self):
        p = int(self.p)
        object.__setattr__(self, "p", p)
        if p == 2:
            raise ValueError("p = 2 is not supported; the modulus must be an odd prime")
        if p < 3 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
        if p >= 3_037_000_499:
            raise ValueError("p must satisfy p^2 < 2^63")

    def __hash__(self):
        return hash(self.p)

    def __int__(self):
        return self.p

    @property
    def half(self) -> int:
        """``(p - 1) // 2``, the edge of the balanced residue range."""
        return (self.p - 1) // 2

    @property
    def has_tables(self) -> bool:
        return self.p <= self.table_cap

    def require_tables(self) -> None:
        if not self.has_tables:
            raise ValueError(f"p = {self.p} exceeds the table cap {self.table_cap}")

    @cached_property
    def inv_table(self) -> np.ndarray:
        """``inv_table[n] * n == 1 (mod p)`` for ``1 <= n < p``; entry 0 is 0."""
        self.require_tables()
        t = _batch_inverses(self.p)
        t.flags.writeable = False
        return t

    @cached_property
    def root_table(self) -> np.ndarray:
        """``root_table[a] == e(a/p)`` for ``0 <= a < p``."""
        self.require_tables()
        ang = (2.0 * np.pi / self.p) * np.arange(self.p)
        t = np.cos(ang) + 1j * np.sin(ang)
        t.flags.writeable = False
        return t

    def inverse(self, n: int) -> int:
        return mod_inverse(n, self)

    def root(self, a) -> complex | np.ndarray:
        """``e(a/p)``; ``a`` may be an integer or an integer array."""
        if isinstance(a, (int, np.integer)):
            a = int(a) % self.p
            if self.has_tables:
                return complex(self.root_table[a])
            return complex(math.cos(2 * math.pi * a / self.p), math.sin(2 * math.pi * a / self.p))
        a = np.mod(np.asarray(a, dtype=np.int64), self.p)
        if self.has_tables:
            return self.root_table[a]
        ang = (2.0 * np.pi / self.p) * a
        return np.cos(ang) + 1j * np.sin(ang)


@lru_cache(maxsize=32)
def get_modulus(p: int) -> PrimeModulus:
    """Shared :class:`PrimeModulus` for ``p`` so its tables are built once."""
    return PrimeModulus(int(p))


def _as_modulus(p) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else get_modulus(int(p))


def mod_inverse(n: int, p) -> int:
    """The inverse of ``n`` modulo ``p``, in ``[1, p-1]``.

    Raises ``ValueError`` when ``p`` divides ``n``.
    """
    pm = _as_modulus(p)
    n = int(n) % pm.p
    if n == 0:
        raise ValueError(f"0 has no inverse modulo {pm.p}; need (n, p) = 1")
    return _egcd_inverse(n, pm.p)


def balanced_residue(k: int, p) -> int:
    """The representative of ``k mod p`` in ``[-(p-1)/2, (p-1)/2]``."""
    pm = _as_modulus(p)
    r = int(k) % pm.p
    return r - pm.p if r > pm.half else r


def dist_nearest_int(z: float) -> float:
    """``||z||``, the distance from ``z`` to the nearest integer."""
    return abs(z - math.floor(z + 0.5))


def e(t):
    """``exp(2 pi i t)`` for a real scalar or array ``t``."""
    if np.isscalar(t):
        t = float(t)
        return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
    return np.exp(2j * np.pi * np.asarray(t, dtype=float))
