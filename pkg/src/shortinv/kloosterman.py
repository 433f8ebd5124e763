"""Complete and incomplete Kloosterman sums modulo a prime.

``S(a, b; p) = sum_{c=1}^{p-1} e((a c + b cbar) / p)``.  For ``p`` not
dividing ``a`` the sum depends only on ``a*b mod p``, so whole rows and the
spectral formula work from the single base table ``S(1, t; p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chirp import chirp_dft
from .modular_core import PrimeModulus, _as_modulus, get_modulus

__all__ = [
    "KloostermanValue",
    "MeanValueCheck",
    "kloosterman",
    "kloosterman_base",
    "kloosterman_row",
    "kloosterman_matrix",
    "weil_margin",
    "weil_scan",
    "incomplete_kloosterman",
    "mean_value_check",
    "mean_value_rhs",
]

# Elements per gather block in the O(p^2) builders.
_BLOCK = 1 << 22


@dataclass(frozen=True)
class KloostermanValue:
    a: int
    b: int
    p: int
    value: complex
    reduced: bool = False

    @property
    def real(self) -> float:
        return self.value.real

    def __float__(self):
        return self.value.real

    def __abs__(self):
        return abs(self.value)


def kloosterman(a: int, b: int, p, reduce: bool = False) -> KloostermanValue:
    """Evaluate ``S(a, b; p)`` by direct summation over ``c = 1 .. p-1``.

    With ``reduce=True`` and ``p`` not dividing ``a`` the identity
    ``S(a, b; p) = S(1, a*b; p)`` is applied first; the returned value
    records whether it was.  Real and imaginary parts are accumulated
    with ``math.fsum`` in ascending ``c``.
    """
    pm = _as_modulus(p)
    q = pm.p
    a0, b0 = int(a) % q, int(b) % q
    a, b, reduced = a0, b0, False
    if reduce and a0 != 0:
        a, b, reduced = 1, a0 * b0 % q, True
    c = np.arange(1, q, dtype=np.int64)
    if pm.has_tables:
        inv = pm.inv_table[1:]
    else:
        inv = np.array([pow(int(t), q - 2, q) for t in c], dtype=np.int64)
    phase = ((a * c) % q + (b * inv) % q) % q
    z = pm.root(phase)
    val = complex(math.fsum(z.real), math.fsum(z.imag))
    return KloostermanValue(a0, b0, q, val, reduced)


def _base_naive(pm: PrimeModulus) -> np.ndarray:
    q = pm.p
    inv = pm.inv_table[1:]
    c = np.arange(1, q, dtype=np.int64)
    cos_t = pm.root_table.real
    out = np.empty(q)
    rows = max(1, _BLOCK // q)
    for start in range(0, q, rows):
        t = np.arange(start, min(q, start + rows), dtype=np.int64)[:, None]
        out[start:start + t.shape[0]] = cos_t[(c + t * inv) % q].sum(axis=1)
    return out


def _base_chirp(pm: PrimeModulus) -> np.ndarray:
    # S(1, t) = sum_d e(dbar/p) e(t d/p): a length-p DFT of d -> e(dbar/p).
    f = pm.root_table[pm.inv_table].copy()
    f[0] = 0.0
    return chirp_dft(f, sign=+1).real


@lru_cache(maxsize=8)
def _base_cached(pm: PrimeModulus, method: str) -> np.ndarray:
    if method == "naive":
        t = _base_naive(pm)
    elif method == "chirp":
        t = _base_chirp(pm)
    else:
        raise ValueError(f"unknown base-table method {method!r}; use 'naive' or 'chirp'")
    t.flags.writeable = False
    return t


def kloosterman_base(p, method: str = "naive") -> np.ndarray:
    """The table ``base[t] = S(1, t; p)`` for ``t = 0 .. p-1`` (cached)."""
    pm = _as_modulus(p)
    pm.require_tables()
    return _base_cached(pm, method)


def kloosterman_row(a: int, p, fast: bool = True, method: str = "naive") -> np.ndarray:
    """``row[b] = S(a, b; p)`` for ``b = 0 .. p-1`` as real numbers.

    The slow path runs ``p`` direct sums; the fast path indexes the base
    table at ``a*b mod p``.  ``method`` selects how the base table is
    built ('naive' or 'chirp').
    """
    pm = _as_modulus(p)
    pm.require_tables()
    q = pm.p
    a = int(a) % q
    b = np.arange(q, dtype=np.int64)
    if a == 0:
        row = np.full(q, -1.0)
        row[0] = q - 1
        return row
    if fast:
        return np.array(kloosterman_base(pm, method)[(a * b) % q])
    c = np.arange(1, q, dtype=np.int64)
    cos_t = pm.root_table.real
    out = np.empty(q)
    rows = max(1, _BLOCK // q)
    for start in range(0, q, rows):
        bb = b[start:start + rows, None]
        out[start:start + bb.shape[0]] = cos_t[(a * c + bb * pm.inv_table[1:]) % q].sum(axis=1)
    return out


def kloosterman_matrix(p) -> np.ndarray:
    """All ``S(a, b; p)`` as a complex ``p x p`` array, from the explicit
    sum over ``c`` (evaluated as a matrix product).  Intended for small ``p``.
    """
    pm = _as_modulus(p)
    pm.require_tables()
    q = pm.p
    c = np.arange(1, q, dtype=np.int64)
    ab = np.arange(q, dtype=np.int64)[:, None]
    U = pm.root_table[(ab * c) % q]
    V = pm.root_table[(ab * pm.inv_table[1:]) % q].T
    return U @ V


def weil_margin(a: int, b: int, p) -> float:
    """``|S(a, b; p)| / (2 sqrt p)``; requires ``b != 0 (mod p)``."""
    pm = _as_modulus(p)
    if int(b) % pm.p == 0:
        raise ValueError("Weil's bound needs the second frequency nonzero mod p")
    return abs(kloosterman(a, b, pm).value) / (2.0 * math.sqrt(pm.p))


def weil_scan(primes) -> dict:
    """Exhaustive Weil check over ``a in [0,p)``, ``b in [1,p)`` for each prime.

    Returns the worst margin, the largest imaginary part and, per prime,
    the pair attaining the worst margin.
    """
    worst, worst_imag, per_prime = 0.0, 0.0, []
    for q in primes:
        pm = get_modulus(int(q))
        m = kloosterman_matrix(pm)[:, 1:]
        margin = np.abs(m) / (2.0 * math.sqrt(pm.p))
        i, j = np.unravel_index(np.argmax(margin), margin.shape)
        imag = float(np.max(np.abs(m.imag)))
        per_prime.append({"p": pm.p, "a": int(i), "b": int(j) + 1,
                          "margin": float(margin[i, j]), "max_imag": imag})
        worst = max(worst, float(margin[i, j]))
        worst_imag = max(worst_imag, imag)
    return {"max_margin": worst, "max_imag": worst_imag, "primes": per_prime}


def _check_interval(I, q):
    lo, hi = float(I[0]), float(I[1])
    if not (0 < lo <= hi < q):
        raise ValueError(f"interval [{lo}, {hi}] is not contained in (0, {q})")
    return lo, hi


def incomplete_kloosterman(I, l: int, p) -> complex:
    """``sum_{n in I} e(l nbar / p)`` over the integers of the closed interval ``I``."""
    pm = _as_modulus(p)
    lo, hi = _check_interval(I, pm.p)
    n = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=np.int64)
    if n.size == 0:
        return 0j
    inv = pm.inv_table[n] if pm.has_tables else np.array(
        [pow(int(t), pm.p - 2, pm.p) for t in n], dtype=np.int64)
    z = pm.root((int(l) % pm.p) * inv)
    return complex(math.fsum(z.real), math.fsum(z.imag))


@dataclass(frozen=True)
class MeanValueCheck:
    lhs: float
    rhs: float
    holds: bool


def mean_value_rhs(p: int, H: float) -> float:
    return 2.0**12 * p * math.log(H) ** 2


def mean_value_check(intervals, l: int, p, H: float) -> MeanValueCheck:
    """Compare ``sum_j |sum_{n in I_j} e(l nbar/p)|^2`` with ``2^12 p log^2 H``.

    The intervals must be pairwise disjoint, contained in ``(0, p)`` and of
    real length between ``H/2`` and ``H``.
    """
    pm = _as_modulus(p)
    if int(l) % pm.p == 0:
        raise ValueError("l must be a unit modulo p")
    ivs = sorted(_check_interval(I, pm.p) for I in intervals)
    for lo, hi in ivs:
        if not (H / 2 <= hi - lo <= H):
            raise ValueError(f"interval [{lo}, {hi}] has length outside [H/2, H] for H = {H}")
    for (_, h0), (l1, _) in zip(ivs, ivs[1:]):
        if l1 <= h0:
            raise ValueError("intervals overlap")
    lhs = math.fsum(abs(incomplete_kloosterman(I, l, pm)) ** 2 for I in ivs)
    rhs = mean_value_rhs(pm.p, H)
    return MeanValueCheck(lhs, rhs, lhs <= rhs)
