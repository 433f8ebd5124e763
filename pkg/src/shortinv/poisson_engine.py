"""The smoothed counting sum ``T`` for a family of interval pairs, its split
``T = S - S1 - S2`` into a complete sum and two tails, and the exact
Kloosterman expansion of the complete sum ``S``.

For centres ``(M_j, N_j)`` the complete sum

    S = sum_j sum_{m, n; (n,p)=1; m = nbar mod p} w((m-M_j)/x) w((n-N_j)/y)

equals, after Poisson summation in ``m`` and ``n``,

    S = (x y / p^2) sum_{k mod p} sum_{r mod p} S(r, k; p) F_k(x) F_r(y) E(k, r),

with ``E(k, r) = sum_j e((k M_j + r N_j)/p)``.  Folding the ``l``-sum into
residue classes turns ``sum_{l = r mod p} w(l y/p)`` into ``F_r(y)``.  The
``k = 0`` and ``r = 0`` strata are kept, so no main term is split off and
the identity is exact up to truncation and rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .gaussian_smoothing import GaussianScale, theta_tail_table, weight
from .kloosterman import kloosterman_base
from .modular_core import dist_nearest_int, get_modulus

__all__ = [
    "KINDS",
    "IntervalFamily",
    "SumDecomposition",
    "DirectCount",
    "GeometricCheck",
    "t_direct",
    "s_decompose",
    "s_spectral",
    "family_exponential_sum",
    "geometric_bound_check",
    "poisson_residual",
]

KINDS = ("general", "disjoint", "x_spaced", "arithmetic")

# Rows of the Kloosterman matrix gathered per block in s_spectral.
_K_BLOCK = 256


@dataclass(frozen=True)
class IntervalFamily:
    """``J`` pairs of closed intervals ``[M_j - H/2, M_j + H/2]`` and
    ``[N_j - K/2, N_j + K/2]`` inside ``(0, p)``.

    For ``kind == "arithmetic"`` the stored ``progression = (M, N, X, Y)``
    must satisfy ``M_j = M + j X`` and ``N_j = N + j Y`` for ``j = 1 .. J``.
    """

    p: int
    H: float
    K: float
    centers: tuple = ()
    kind: str = "general"
    progression: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "H", float(self.H))
        object.__setattr__(self, "K", float(self.K))
        object.__setattr__(self, "centers", tuple((int(m), int(n)) for m, n in self.centers))
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if not (self.H > 0 and self.K > 0):
            raise ValueError("interval widths must be positive")
        q, h, k = self.p, self.H / 2, self.K / 2
        for m, n in self.centers:
            if not (m - h > 0 and m + h < q and n - k > 0 and n + k < q):
                raise ValueError(f"interval pair centred at ({m}, {n}) is not contained in (0, {q})")
        if self.kind == "disjoint":
            ms = sorted(self.M.tolist())
            if any(b - a <= self.H for a, b in zip(ms, ms[1:])):
                raise ValueError("I1 intervals of a disjoint family overlap")
        if self.kind == "arithmetic":
            if self.progression is None:
                raise ValueError("arithmetic family needs progression (M, N, X, Y)")
            M0, N0, X, Y = (int(v) for v in self.progression)
            object.__setattr__(self, "progression", (M0, N0, X, Y))
            for j, (m, n) in enumerate(self.centers, start=1):
                if m != M0 + j * X or n != N0 + j * Y:
                    raise ValueError("centres do not follow the stated progression")

    @property
    def J(self) -> int:
        return len(self.centers)

    @property
    def M(self) -> np.ndarray:
        return np.array([c[0] for c in self.centers], dtype=np.int64)

    @property
    def N(self) -> np.ndarray:
        return np.array([c[1] for c in self.centers], dtype=np.int64)

    @property
    def i1_disjoint(self) -> bool:
        ms = sorted(self.M.tolist())
        return all(b - a > self.H for a, b in zip(ms, ms[1:]))

    def intervals(self):
        """List of ``((lo1, hi1), (lo2, hi2))`` pairs."""
        h, k = self.H / 2, self.K / 2
        return [((m - h, m + h), (n - k, n + k)) for m, n in self.centers]

    def to_dict(self) -> dict:
        d = {"p": self.p, "H": self.H, "K": self.K,
             "centers": [list(c) for c in self.centers], "kind": self.kind}
        if self.progression is not None:
            d["progression"] = list(self.progression)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "IntervalFamily":
        prog = d.get("progression")
        return cls(d["p"], d["H"], d["K"], tuple(tuple(c) for c in d["centers"]),
                   d.get("kind", "general"), tuple(prog) if prog is not None else None)


@dataclass(frozen=True)
class DirectCount:
    T: float
    witnesses: list = field(default_factory=list)


@dataclass(frozen=True)
class SumDecomposition:
    T: float
    S: float
    S1: float
    S2: float
    S_spectral: float | None
    main_term_paper: float
    residual: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def _check_scale(fam: IntervalFamily, sc: GaussianScale):
    if sc.p != fam.p or sc.H != fam.H or sc.K != fam.K:
        raise ValueError("scale was built for different (p, H, K) than the family")


def t_direct(fam: IntervalFamily, sc: GaussianScale) -> DirectCount:
    """Weighted count of ``m nbar = 1`` inside the interval pairs, with witnesses ``(j, m, n)``."""
    _check_scale(fam, sc)
    if fam.J == 0:
        return DirectCount(0.0, [])
    pm = get_modulus(fam.p)
    h, kk = fam.H / 2, fam.K / 2
    terms, wit = [], []
    for j, (M, N) in enumerate(fam.centers):
        n = np.arange(math.ceil(N - kk), math.floor(N + kk) + 1, dtype=np.int64)
        m = pm.inv_table[n]
        hit = np.abs(m - M) <= h
        for mm, nn in zip(m[hit].tolist(), n[hit].tolist()):
            terms.append(weight((mm - M) / sc.x) * weight((nn - N) / sc.y))
            wit.append((j, mm, nn))
    return DirectCount(math.fsum(terms), wit)


def _complete_terms(fam: IntervalFamily, sc: GaussianScale):
    """All weighted pairs of the complete sum, with region masks."""
    pm = get_modulus(fam.p)
    q = pm.p
    h, kk = fam.H / 2, fam.K / 2
    # The window must contain the intervals so that T is a sub-sum of S.
    Rx, Ry = max(sc.radius * sc.x, h), max(sc.radius * sc.y, kk)
    vals, in_m, in_n = [], [], []
    for M, N in fam.centers:
        n = np.arange(math.ceil(N - Ry), math.floor(N + Ry) + 1, dtype=np.int64)
        n = n[n % q != 0]
        wn = weight((n - N) / sc.y)
        nbar = pm.inv_table[n % q]
        s = -((nbar - M + math.floor(Rx)) // q)  # ceil((M - Rx - nbar) / q) for integer floor(Rx)
        for d in range(int(2 * Rx // q) + 2):
            m = nbar + (s + d) * q
            ok = np.abs(m - M) <= Rx
            if not ok.any():
                continue
            vals.append(weight((m[ok] - M) / sc.x) * wn[ok])
            in_m.append(np.abs(m[ok] - M) <= h)
            in_n.append(np.abs(n[ok] - N) <= kk)
    if not vals:
        z = np.zeros(0)
        return z, z.astype(bool), z.astype(bool)
    return np.concatenate(vals), np.concatenate(in_m), np.concatenate(in_n)


def s_spectral(fam: IntervalFamily, sc: GaussianScale, method: str = "naive") -> float:
    """Evaluate ``S`` through the Kloosterman expansion (see module docstring).

    ``method`` chooses how the base table ``S(1, t; p)`` is built.
    """
    _check_scale(fam, sc)
    if fam.J == 0:
        return 0.0
    pm = get_modulus(fam.p)
    q = pm.p
    base = kloosterman_base(pm, method)
    Fx = theta_tail_table(pm, sc.x, sc.radius)
    Fy = theta_tail_table(pm, sc.y, sc.radius)
    res = np.arange(q, dtype=np.int64)
    A = pm.root_table[np.outer(fam.M % q, res) % q]           # J x p, e(k M_j / p)
    B = pm.root_table[np.outer(fam.N % q, res) % q] * Fy      # J x p, F_r(y) e(r N_j / p)
    Bt_re, Bt_im = np.ascontiguousarray(B.real.T), np.ascontiguousarray(B.imag.T)
    AF = (A * Fx).T                                           # p x J
    total = 0.0
    for k0 in range(0, q, _K_BLOCK):
        k = res[k0:k0 + _K_BLOCK]
        Kblk = base[np.outer(k, res) % q]
        V = (Kblk @ Bt_re) + 1j * (Kblk @ Bt_im)
        total += float(np.sum(AF[k0:k0 + _K_BLOCK] * V).real)
    # base[0] = S(1, 0) = -1, whereas S(0, 0) = p - 1.
    total += q * Fx[0] * Fy[0] * fam.J
    return float(sc.x * sc.y / q**2 * total)


def s_decompose(fam: IntervalFamily, sc: GaussianScale, spectral: bool = True,
                method: str = "naive") -> SumDecomposition:
    """``T`` and the complete sum ``S`` with tails ``S1`` (m outside its
    interval) and ``S2`` (m inside, n outside), plus the spectral recomputation.
    """
    _check_scale(fam, sc)
    main = fam.J * sc.x * sc.y / fam.p
    if fam.J == 0:
        return SumDecomposition(0.0, 0.0, 0.0, 0.0, 0.0 if spectral else None, 0.0, 0.0 if spectral else None)
    T = t_direct(fam, sc).T
    vals, in_m, in_n = _complete_terms(fam, sc)
    S = math.fsum(vals)
    S1 = math.fsum(vals[~in_m])
    S2 = math.fsum(vals[in_m & ~in_n])
    S_spec = resid = None
    if spectral:
        S_spec = s_spectral(fam, sc, method)
        resid = abs(S - S_spec) / (1 + abs(S))
    return SumDecomposition(T, S, S1, S2, S_spec, main, resid)


def poisson_residual(fam: IntervalFamily, sc: GaussianScale, method: str = "naive") -> float:
    """``|S_direct - S_spectral| / (1 + |S_direct|)``."""
    _check_scale(fam, sc)
    if fam.J == 0:
        return 0.0
    S = math.fsum(_complete_terms(fam, sc)[0])
    return abs(S - s_spectral(fam, sc, method)) / (1 + abs(S))


def family_exponential_sum(k: int, l: int, fam: IntervalFamily) -> complex:
    """``E(k, l) = sum_j e((k M_j + l N_j) / p)``."""
    if fam.J == 0:
        return 0j
    q = fam.p
    ph = ((int(k) % q) * (fam.M % q) + (int(l) % q) * (fam.N % q)) % q
    z = np.exp(2j * np.pi * ph / q)
    return complex(math.fsum(z.real), math.fsum(z.imag))


@dataclass(frozen=True)
class GeometricCheck:
    exact: float
    bound: float
    holds: bool


def geometric_bound_check(k: int, l: int, fam: IntervalFamily) -> GeometricCheck:
    """``|sum_{j=1}^J e(j theta)|`` against ``min(1/(2||theta||), J)``, ``theta = (kX + lY)/p``."""
    if fam.kind != "arithmetic":
        raise ValueError("geometric bound applies to arithmetic families only")
    _, _, X, Y = fam.progression
    q, J = fam.p, fam.J
    num = (int(k) * X + int(l) * Y) % q
    if num == 0:
        return GeometricCheck(float(J), float(J), True)
    th = num / q
    exact = abs(math.sin(math.pi * J * th) / math.sin(math.pi * th))
    bound = min(1.0 / (2.0 * dist_nearest_int(th)), float(J))
    return GeometricCheck(exact, bound, exact <= bound * (1 + 1e-12))
