"""Gaussian weight ``w(t) = exp(-pi t^2)`` (its own Fourier transform), the
smoothing scales, and the wrapped Gaussian

    F_k(x) = sum_{r in Z} w((k/p + r) x)

that appears when a smoothed interval sum is Poisson-summed modulo ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modular_core import PrimeModulus, _as_modulus, balanced_residue

__all__ = [
    "DEFAULT_RADIUS",
    "GaussianScale",
    "SmoothedSum",
    "weight",
    "scales",
    "theta_tail",
    "theta_tail_table",
    "smoothed_interval_sum",
]

# w(3.7) ~ 2e-19; terms beyond this many widths are dropped.
DEFAULT_RADIUS = 3.7


def weight(t):
    """``exp(-pi t^2)``; accepts scalars or arrays."""
    if np.isscalar(t):
        return math.exp(-math.pi * float(t) ** 2)
    t = np.asarray(t, dtype=float)
    return np.exp(-np.pi * t * t)


@dataclass(frozen=True)
class GaussianScale:
    p: int
    H: float
    K: float
    epsilon: float
    x: float
    y: float
    radius: float = DEFAULT_RADIUS


def scales(H: float, K: float, p, epsilon: float = 0.5, radius: float = DEFAULT_RADIUS) -> GaussianScale:
    """Smoothing widths ``x = H / (log p)^(1/2+eps)`` and ``y = K / (log p)^(1/2+eps)``.

    Raises ``ValueError`` unless ``0 < eps <= 1/2``, ``0 < H, K <= p`` and
    both widths are at least 1.
    """
    pm = _as_modulus(p)
    if not (0 < epsilon <= 0.5):
        raise ValueError(f"epsilon must lie in (0, 1/2], got {epsilon}")
    if not (0 < H <= pm.p and 0 < K <= pm.p):
        raise ValueError(f"need 0 < H, K <= p; got H={H}, K={K}, p={pm.p}")
    if radius < DEFAULT_RADIUS:
        raise ValueError(f"truncation radius must be at least {DEFAULT_RADIUS}")
    d = math.log(pm.p) ** (0.5 + epsilon)
    x, y = H / d, K / d
    if x < 1 or y < 1:
        raise ValueError(
            f"smoothing widths x={x:.4g}, y={y:.4g} must be >= 1; "
            f"H and K must be at least (log p)^(1/2+eps) = {d:.4g}")
    return GaussianScale(pm.p, float(H), float(K), float(epsilon), x, y, float(radius))


def theta_tail(k: int, p, x: float, radius: float = DEFAULT_RADIUS) -> float:
    """``F_k(x)``, summing the terms with ``|k/p + r| x <= radius``."""
    pm = _as_modulus(p)
    t = balanced_residue(k, pm) / pm.p
    R = radius / x
    r0, r1 = math.ceil(-R - t), math.floor(R - t)
    return math.fsum(weight((t + r) * x) for r in range(r0, r1 + 1))


def theta_tail_table(p, x: float, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """``F[k] = F_k(x)`` for ``k = 0 .. p-1`` (indexed by residue)."""
    pm = _as_modulus(p)
    q = pm.p
    k = np.arange(q, dtype=np.int64)
    t = np.where(k > pm.half, k - q, k) / q
    R = radius / x
    out = np.zeros(q)
    for r in range(math.ceil(-R - 0.5), math.floor(R + 0.5) + 1):
        u = (t + r) * x
        out += np.where(np.abs(u) <= radius, np.exp(-np.pi * u * u), 0.0)
    return out


@dataclass(frozen=True)
class SmoothedSum:
    direct: complex
    spectral: complex
    difference: float


def smoothed_interval_sum(M: int, x: float, k: int, p, radius: float = DEFAULT_RADIUS) -> SmoothedSum:
    """``sum_m w((m-M)/x) e(k m/p)`` directly and as ``x e(kM/p) F_k(x)``."""
    pm = _as_modulus(p)
    M = int(M)
    span = math.floor(radius * x)
    m = np.arange(M - span, M + span + 1, dtype=np.int64)
    z = weight((m - M) / x) * pm.root(int(k) % pm.p * (m % pm.p) % pm.p)
    direct = complex(math.fsum(z.real), math.fsum(z.imag))
    spectral = x * pm.root(int(k) % pm.p * (M % pm.p) % pm.p) * theta_tail(k, pm, x, radius)
    return SmoothedSum(direct, spectral, abs(direct - spectral))
