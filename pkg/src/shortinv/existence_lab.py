"""Brute-force existence oracle for ``x y = 1 (mod p)`` in interval pairs,
family generators, existence thresholds, minimal-``J`` experiments and
error-term audits.

Thresholds are evaluated with every implied constant set to 1; experiments
report the empirical ratio ``c_emp = J_emp / threshold`` instead of asserting
a constant.  Random draws use numpy's PCG64 generator
(``numpy.random.default_rng``), seeded with ``seed`` or ``[seed, J, trial]``.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .gaussian_smoothing import GaussianScale, scales
from .modular_core import _as_modulus, dist_nearest_int, get_modulus
from .poisson_engine import KINDS, IntervalFamily, t_direct

__all__ = [
    "DEFAULT_SEED",
    "SpacingParams",
    "ExistenceResult",
    "AuditRatio",
    "ExperimentReport",
    "solution_exists",
    "family_has_solution",
    "x_spacing",
    "thm1_threshold",
    "thm3_threshold",
    "thm4_thresholds",
    "threshold_for",
    "family_capacity",
    "generate_family",
    "disjoint_intervals",
    "minimal_J_search",
    "verify_report",
    "sufficiency_check",
    "monotonicity_sweep",
    "bound_audit",
]

log = logging.getLogger(__name__)

DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True)
class SpacingParams:
    X: float = 0.0
    Y: int = 0


@dataclass(frozen=True)
class ExistenceResult:
    exists: bool
    witness: tuple | None = None


def _int_range(lo: float, hi: float) -> np.ndarray:
    return np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=np.int64)


def solution_exists(I1, I2, p) -> ExistenceResult:
    """Search ``I1 x I2`` for ``(x, y)`` with ``x y = 1 (mod p)``.

    Enumerates the shorter interval (``I2`` on ties) through the inverse
    table; the witness is the first hit in ascending order.
    """
    pm = _as_modulus(p)
    q = pm.p
    (a1, b1), (a2, b2) = (float(v) for v in I1), (float(v) for v in I2)
    for lo, hi in ((a1, b1), (a2, b2)):
        if not (0 < lo <= hi < q):
            raise ValueError(f"interval [{lo}, {hi}] is not contained in (0, {q})")
    if b1 - a1 < b2 - a2:
        xs = _int_range(a1, b1)
        ys = pm.inv_table[xs]
        hit = np.flatnonzero((ys >= a2) & (ys <= b2))
        if hit.size:
            return ExistenceResult(True, (int(xs[hit[0]]), int(ys[hit[0]])))
    else:
        ys = _int_range(a2, b2)
        xs = pm.inv_table[ys]
        hit = np.flatnonzero((xs >= a1) & (xs <= b1))
        if hit.size:
            return ExistenceResult(True, (int(xs[hit[0]]), int(ys[hit[0]])))
    return ExistenceResult(False, None)


def family_has_solution(fam: IntervalFamily) -> bool:
    """True if some index ``j`` of the family admits a solution."""
    return any(solution_exists(I1, I2, fam.p).exists for I1, I2 in fam.intervals())


def x_spacing(fam: IntervalFamily) -> float:
    """``min_{j != k} p * ||(M_j - M_k)/p||``; ``p/2`` when ``J == 1``."""
    if fam.J == 0:
        raise ValueError("x_spacing needs at least one interval")
    if fam.J == 1:
        return fam.p / 2
    d = np.abs(fam.M[:, None] - fam.M[None, :]) % fam.p
    d = np.minimum(d, fam.p - d)
    np.fill_diagonal(d, fam.p)
    return float(d.min())


# -- thresholds (implied constants = 1) -------------------------------------

def _check_hk(p, H, K):
    if not (0 < H <= p and 0 < K <= p):
        raise ValueError(f"need 0 < H, K <= p; got H={H}, K={K}, p={p}")


def thm1_threshold(p, H, K) -> float:
    """``p^3 log^4 p / (H^2 K^2)``."""
    _check_hk(p, H, K)
    return p**3 * math.log(p) ** 4 / (H**2 * K**2)


def thm3_threshold(p, H, K, X, epsilon=0.5) -> float:
    """``p^3 log^(3+eps) p / (H K^2 min(H, X))`` for ``X``-spaced centres."""
    _check_hk(p, H, K)
    if X < 1:
        raise ValueError("spacing X must be at least 1")
    return p**3 * math.log(p) ** (3 + epsilon) / (H * K**2 * min(H, X))


def thm4_thresholds(p, H, K, epsilon=0.5) -> dict:
    """Largest admissible progression step and least ``J`` for progressions."""
    _check_hk(p, H, K)
    L = math.log(p)
    return {"X_max": H * K / (math.sqrt(p) * L ** (1 + epsilon)),
            "J_min": p**1.5 * L ** (2 + epsilon) / (H * K)}


def threshold_for(kind, p, H, K, spacing: SpacingParams | None = None, epsilon=0.5) -> float:
    """The threshold that governs ``kind``."""
    if kind == "x_spaced":
        return thm3_threshold(p, H, K, max(1.0, (spacing or SpacingParams()).X), epsilon)
    if kind == "arithmetic":
        return thm4_thresholds(p, H, K, epsilon)["J_min"]
    return thm1_threshold(p, H, K)


# -- family generation ------------------------------------------------------

def _center_range(p, width):
    # Integer centres c with [c - width/2, c + width/2] inside (0, p).
    lo = math.floor(width / 2) + 1
    hi = math.ceil(p - width / 2) - 1
    return lo, hi


def _spaced_sample(rng, lo, hi, J, gap):
    # J sorted integers in [lo, hi] with consecutive differences >= gap.
    slack = hi - lo - (J - 1) * gap
    offs = np.sort(rng.choice(slack + J, size=J, replace=False)) - np.arange(J)
    return lo + np.arange(J) * gap + offs


def family_capacity(kind, p, H, K, spacing: SpacingParams | None = None) -> int:
    """Largest ``J`` for which :func:`generate_family` can succeed."""
    sp = spacing or SpacingParams()
    lo, hi = _center_range(p, H)
    klo, khi = _center_range(p, K)
    if hi < lo or khi < klo:
        return 0
    if kind == "general":
        return p
    if kind == "disjoint":
        return (hi - lo) // (math.floor(H) + 1) + 1
    if kind == "x_spaced":
        g = max(1, math.ceil(sp.X))
        top = min(hi, lo + p - g)
        return min((top - lo) // g + 1, int(p // g))
    if kind == "arithmetic":
        X, Y = int(sp.X), int(sp.Y)
        if X < 1:
            return 0
        jm = (hi - lo) // X + 1
        jn = (khi - klo) // abs(Y) + 1 if Y else p
        return min(jm, jn)
    raise ValueError(f"unknown family kind {kind!r}")


def generate_family(kind, p, H, K, J, spacing: SpacingParams | None = None,
                    seed=DEFAULT_SEED) -> IntervalFamily:
    """Draw a family of ``kind``; deterministic in ``seed``.

    Raises ``ValueError`` naming the capacity constraint when ``J`` pairs of
    that kind do not fit in ``(0, p)``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown family kind {kind!r}")
    p = _as_modulus(p).p
    sp = spacing or SpacingParams()
    J = int(J)
    if J < 0:
        raise ValueError("J must be nonnegative")
    cap = family_capacity(kind, p, H, K, sp)
    if J > cap:
        need = {"general": "J <= p with intervals inside (0, p)",
                "disjoint": "J*H < p - 2 (disjoint I1 intervals)",
                "x_spaced": "J*X <= p (X-spaced centres)",
                "arithmetic": "M + J*X + H/2 < p and N + J*Y + K/2 < p"}[kind]
        raise ValueError(f"infeasible {kind} family: J={J} exceeds capacity {cap}; need {need}")
    rng = np.random.default_rng(seed)
    lo, hi = _center_range(p, H)
    klo, khi = _center_range(p, K)
    prog = None
    if kind == "general":
        M = rng.integers(lo, hi + 1, size=J)
    elif kind == "disjoint":
        M = _spaced_sample(rng, lo, hi, J, math.floor(H) + 1)
    elif kind == "x_spaced":
        g = max(1, math.ceil(sp.X))
        M = _spaced_sample(rng, lo, min(hi, lo + p - g), J, g)
    if kind == "arithmetic":
        X, Y = int(sp.X), int(sp.Y)
        if J == 0:
            return IntervalFamily(p, H, K, (), kind, (lo, klo, X, Y))
        M0 = int(rng.integers(lo - X, hi - J * X + 1))
        ny_lo = klo - min(Y, J * Y)
        ny_hi = khi - max(Y, J * Y)
        N0 = int(rng.integers(ny_lo, ny_hi + 1))
        j = np.arange(1, J + 1)
        M, N = M0 + j * X, N0 + j * Y
        prog = (M0, N0, X, Y)
    else:
        N = rng.integers(klo, khi + 1, size=J)
    fam = IntervalFamily(p, H, K, tuple(zip(M.tolist(), N.tolist())), kind, prog)
    if kind == "x_spaced" and J > 0 and x_spacing(fam) < sp.X:
        raise AssertionError("generated family is not X-spaced")
    return fam


def disjoint_intervals(p, H, J, seed=DEFAULT_SEED):
    """``J`` pairwise disjoint closed intervals in ``(0, p)`` with integer
    endpoints and lengths drawn uniformly from ``[ceil(H/2), floor(H)]``.
    """
    rng = np.random.default_rng(seed)
    lmin, lmax = math.ceil(H / 2), math.floor(H)
    if lmax < lmin or lmax < 1:
        raise ValueError(f"no integer length in [H/2, H] for H = {H}")
    lengths = rng.integers(lmin, lmax + 1, size=J)
    slack = (p - 2) - int(lengths.sum()) - (J - 1)
    if slack < 0:
        raise ValueError(f"J={J} intervals of length up to {lmax} do not fit in (0, {p})")
    # Distribute the free room among J+1 gaps.
    cuts = np.sort(rng.integers(0, slack + 1, size=J))
    gaps = np.diff(np.concatenate([[0], cuts]))
    out, pos = [], 1
    for L, g in zip(lengths.tolist(), gaps.tolist()):
        pos += g
        out.append((pos, pos + L))
        pos += L + 1
    return out


# -- experiments ------------------------------------------------------------

@dataclass(frozen=True)
class AuditRatio:
    shape: str
    actual: float
    predicted: float
    ratio: float


@dataclass
class ExperimentReport:
    p: int
    H: float
    K: float
    epsilon: float
    kind: str
    X: float
    Y: int
    seed: int
    trials: int
    threshold_value: float
    empirical_min_J: int | None
    c_emp: float | None
    saturated: bool = False
    audit_ratios: list = field(default_factory=list)
    table: dict = field(default_factory=dict)
    runtime: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["table"] = {str(k): v for k, v in sorted(self.table.items())}
        d["audit_ratios"] = [list(a) for a in self.audit_ratios]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        d = dict(d)
        d["table"] = {int(k): bool(v) for k, v in d.get("table", {}).items()}
        d["audit_ratios"] = [tuple(a) for a in d.get("audit_ratios", [])]
        return cls(**d)


def _trial(args):
    kind, p, H, K, J, spacing, seed = args
    return family_has_solution(generate_family(kind, p, H, K, J, spacing, seed))


def _all_trials_succeed(kind, p, H, K, J, spacing, trials, seed, pool=None):
    args = [(kind, p, H, K, J, spacing, [seed, J, t]) for t in range(trials)]
    results = pool.map(_trial, args) if pool is not None else map(_trial, args)
    return all(results)


def minimal_J_search(kind, p, H, K, spacing: SpacingParams | None = None, epsilon=0.5,
                     trials=20, seed=DEFAULT_SEED, jobs=1) -> ExperimentReport:
    """Least ``J`` such that every one of ``trials`` seeded families of size
    ``J`` has a solvable index, by doubling and then bisection.

    The report is marked ``saturated`` when no ``J`` up to the family
    capacity succeeds.
    """
    t0 = time.perf_counter()
    sp = spacing or SpacingParams()
    p = _as_modulus(p).p
    thr = threshold_for(kind, p, H, K, sp, epsilon)
    cap = family_capacity(kind, p, H, K, sp)
    table = {}
    pool = ProcessPoolExecutor(jobs) if jobs and jobs > 1 else None
    try:
        def ok(J):
            if J not in table:
                table[J] = _all_trials_succeed(kind, p, H, K, J, sp, trials, seed, pool)
                log.debug("%s p=%d J=%d -> %s", kind, p, J, table[J])
            return table[J]

        J, fail, hit = 1, 0, None
        while 1 <= J <= cap:
            if ok(J):
                hit = J
                break
            fail = J
            if J == cap:
                break
            J = min(2 * J, cap)
        if hit is not None:
            while hit - fail > 1:
                mid = (hit + fail) // 2
                if ok(mid):
                    hit = mid
                else:
                    fail = mid
    finally:
        if pool is not None:
            pool.shutdown()

    audits = []
    if hit is not None and kind in ("x_spaced", "arithmetic"):
        fam = generate_family(kind, p, H, K, hit, sp, [seed, hit, 0])
        try:
            sc = scales(H, K, p, epsilon)
            audits = [(a.actual, a.predicted) for a in bound_audit(fam, sc)]
        except ValueError as exc:
            log.info("audit skipped: %s", exc)
    return ExperimentReport(
        p=p, H=float(H), K=float(K), epsilon=float(epsilon), kind=kind, X=float(sp.X),
        Y=int(sp.Y), seed=int(seed), trials=int(trials), threshold_value=thr,
        empirical_min_J=hit, c_emp=(hit / thr if hit is not None else None),
        saturated=hit is None, audit_ratios=audits, table=table,
        runtime=time.perf_counter() - t0)


def verify_report(rep: ExperimentReport) -> bool:
    """Recompute the threshold and re-run the oracle on every recorded ``J``."""
    sp = SpacingParams(rep.X, rep.Y)
    thr = threshold_for(rep.kind, rep.p, rep.H, rep.K, sp, rep.epsilon)
    if not math.isclose(thr, rep.threshold_value, rel_tol=1e-12):
        return False
    for J, outcome in rep.table.items():
        if _all_trials_succeed(rep.kind, rep.p, rep.H, rep.K, J, sp, rep.trials, rep.seed) != outcome:
            return False
    if rep.empirical_min_J is not None:
        if not rep.table.get(rep.empirical_min_J, False):
            return False
        if rep.c_emp is None or not math.isclose(rep.c_emp, rep.empirical_min_J / thr, rel_tol=1e-12):
            return False
    return True


def sufficiency_check(kind, p, H, K, spacing: SpacingParams | None = None, epsilon=0.5,
                      trials=20, seed=DEFAULT_SEED, factor=10.0) -> dict:
    """Sample admissible families with ``J >= factor * threshold``; each must
    contain a solvable index.

    When ``factor * threshold`` exceeds the family capacity no admissible
    family exists and the result is flagged ``vacuous``.
    """
    sp = spacing or SpacingParams()
    thr = threshold_for(kind, p, H, K, sp, epsilon)
    J_req = math.ceil(factor * thr)
    cap = family_capacity(kind, p, H, K, sp)
    out = {"kind": kind, "p": int(p), "H": H, "K": K, "threshold": thr, "J_required": J_req,
           "capacity": cap, "vacuous": J_req > cap, "failures": []}
    if J_req <= cap:
        for t in range(trials):
            fam = generate_family(kind, p, H, K, J_req, sp, [seed, J_req, t])
            if not family_has_solution(fam):
                out["failures"].append({"trial": t, "family": fam.to_dict()})
                log.warning("no solvable index: %s", fam.to_dict())
    out["holds"] = not out["failures"]
    return out


def monotonicity_sweep(kind, p, Hs, spacing: SpacingParams | None = None, epsilon=0.5,
                       trials=10, seed=DEFAULT_SEED) -> dict:
    """Run :func:`minimal_J_search` with ``H = K`` over decreasing ``Hs`` and
    flag any step where the empirical minimal ``J`` decreases.
    """
    rows = []
    for H in sorted(Hs, reverse=True):
        r = minimal_J_search(kind, p, H, H, spacing, epsilon, trials, seed)
        rows.append(r)
    violations = []
    for a, b in zip(rows, rows[1:]):
        ja = a.empirical_min_J if a.empirical_min_J is not None else math.inf
        jb = b.empirical_min_J if b.empirical_min_J is not None else math.inf
        if jb < ja:
            violations.append((a.H, b.H, ja, jb))
    return {"rows": rows, "violations": violations}


def bound_audit(fam: IntervalFamily, sc: GaussianScale) -> list:
    """Compare ``|T - J x y / p|`` with the error shape the proof predicts.

    ``x_spaced``: ``sqrt(log(2J) J x p (1/x + 1/X))`` with ``X`` the measured
    spacing; ``arithmetic``: ``X J / sqrt p + sqrt p log p`` with ``X`` the
    progression step, which must be at least ``x``.
    """
    if fam.kind not in ("x_spaced", "arithmetic"):
        raise ValueError("bound_audit needs an x_spaced or arithmetic family")
    q, J = fam.p, fam.J
    actual = abs(t_direct(fam, sc).T - J * sc.x * sc.y / q)
    if fam.kind == "x_spaced":
        shape = "x_spaced"
        if J == 0:
            pred = 0.0
        else:
            X = x_spacing(fam)
            pred = math.sqrt(math.log(2 * J) * J * sc.x * q * (1 / sc.x + 1 / X))
    else:
        shape = "arithmetic"
        X = fam.progression[2]
        if X < sc.x:
            raise ValueError(f"progression step X={X} is below the smoothing width x={sc.x:.4g}")
        pred = X * J / math.sqrt(q) + math.sqrt(q) * math.log(q)
    ratio = 0.0 if actual == 0 else (actual / pred if pred > 0 else math.inf)
    return [AuditRatio(shape, actual, pred, ratio)]
