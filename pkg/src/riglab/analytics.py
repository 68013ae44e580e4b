"""Closed-form quantities for the intersection graph model.

Covers the exact and second-order edge probability, the binomial tail bound
(np/k)^k * exp(k - np) with its rate-function form, the envelope roots of
a*log(a) - a + 1 = c, the probe curve p(alpha) = (m * n**alpha) ** -1/2, and
the two competing degree laws for a single vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.stats import binom as _scipy_binom

__all__ = [
    "TailBoundQuery",
    "RootResult",
    "DegreeModel",
    "DEGREE_MODEL_KINDS",
    "q_exact",
    "q_approx",
    "zeta_bound",
    "rate_H",
    "tail_bound",
    "binom_tail_exact",
    "solve_a",
    "threshold_p",
    "conditional_adjacency_prob",
    "degree_pmf",
    "total_variation",
]

_RESIDUAL_TOL = 1e-12
DEGREE_MODEL_KINDS = ("binomial-approx", "exact-mixture")


def _check_count(value: int, name: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be an integer >= 1, got {value!r}")


def _check_prob(value: float, name: str, low_open: bool = False) -> float:
    ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    if ok and not math.isnan(value):
        if low_open:
            ok = 0.0 < value <= 1.0
        else:
            ok = 0.0 <= value <= 1.0
    else:
        ok = False
    if not ok:
        window = "(0, 1]" if low_open else "[0, 1]"
        raise ValueError(f"{name} must lie in {window}, got {value!r}")
    return float(value)


def q_exact(m: int, p: float) -> float:
    """Exact probability 1 - (1 - p^2)^m that two vertices share an object.

    m = 1 and m = 2 are returned through the plain polynomial so that the
    second-order sandwich holds as written even where it is mathematically
    tight; larger m goes through expm1/log1p for relative accuracy at small p.
    """
    _check_count(m, "m")
    p = _check_prob(p, "p")
    s = p * p
    if m == 1:
        return s
    if m == 2:
        return 2.0 * s - s * s
    if p == 1.0:
        return 1.0
    return -math.expm1(m * math.log1p(-s))


def q_approx(m: int, p: float) -> float:
    """First-order edge probability m * p^2.  May exceed 1 for large m*p^2."""
    _check_count(m, "m")
    p = _check_prob(p, "p")
    return m * (p * p)


def zeta_bound(m: int, p: float) -> float:
    """Upper bound (m*(m-1)/2) * p^4 on the second-order remainder q_approx - q_exact."""
    _check_count(m, "m")
    p = _check_prob(p, "p")
    s = p * p
    return 0.5 * m * (m - 1) * (s * s)


def rate_H(t: float) -> float:
    """Rate function H(t) = (1/t)*log(t) + 1/t - 1 for t > 0, with H(inf) = -1.

    H increases on (0, 1), decreases on (1, inf), vanishes only at t = 1,
    and is negative elsewhere.
    """
    if isinstance(t, bool) or not isinstance(t, (int, float)):
        raise ValueError(f"t must be a positive real or inf, got {t!r}")
    if math.isnan(t) or t <= 0.0:
        raise ValueError(f"t must be positive, got {t!r}")
    if math.isinf(t):
        return -1.0
    t = float(t)
    return (math.log(t) + 1.0) / t - 1.0


@dataclass(frozen=True)
class TailBoundQuery:
    """One binomial tail query: n trials, success probability, cutoff, side.

    The bound is only valid on one side of the mean, so construction rejects
    cutoffs on the wrong side of trials * success_prob.
    """

    trials: int
    success_prob: float
    cutoff: float
    direction: str

    def __post_init__(self) -> None:
        _check_count(self.trials, "trials")
        object.__setattr__(
            self, "success_prob", _check_prob(self.success_prob, "success_prob", low_open=True)
        )
        cutoff = self.cutoff
        if (
            isinstance(cutoff, bool)
            or not isinstance(cutoff, (int, float))
            or not math.isfinite(cutoff)
            or cutoff <= 0.0
        ):
            raise ValueError(f"cutoff must be a finite positive real, got {cutoff!r}")
        object.__setattr__(self, "cutoff", float(cutoff))
        if self.direction not in ("upper", "lower"):
            raise ValueError(f"direction must be 'upper' or 'lower', got {self.direction!r}")
        mean = self.trials * self.success_prob
        if self.direction == "upper" and self.cutoff < mean:
            raise ValueError(
                "upper tail bound requires cutoff >= trials * success_prob, "
                f"got cutoff={self.cutoff} < {mean}"
            )
        if self.direction == "lower" and self.cutoff > mean:
            raise ValueError(
                "lower tail bound requires 0 < cutoff <= trials * success_prob, "
                f"got cutoff={self.cutoff} > {mean}"
            )

    @property
    def mean(self) -> float:
        return self.trials * self.success_prob


def tail_bound(query: TailBoundQuery) -> float:
    """Evaluate (np/k)^k * exp(k - np) in log space.

    Equals exp(np * H(np/k)) and dominates the exact binomial tail on the
    query's side of the mean.
    """
    np_ = query.mean
    k = query.cutoff
    return math.exp(k * math.log(np_ / k) + (k - np_))


def binom_tail_exact(trials: int, p: float, cutoff: int, direction: str) -> float:
    """Exact P[X >= cutoff] or P[X <= cutoff] for X ~ Binomial(trials, p).

    Sums pmf terms with math.fsum; each term uses the exact integer binomial
    coefficient, so the result is accurate to a few ulps even deep in a tail.
    """
    _check_count(trials, "trials")
    p = _check_prob(p, "p")
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or not 0 <= cutoff <= trials:
        raise ValueError(f"cutoff must be an integer in [0, {trials}], got {cutoff!r}")
    if direction == "upper":
        ks = range(cutoff, trials + 1)
    elif direction == "lower":
        ks = range(0, cutoff + 1)
    else:
        raise ValueError(f"direction must be 'upper' or 'lower', got {direction!r}")
    q = 1.0 - p
    total = math.fsum(comb(trials, k) * p**k * q ** (trials - k) for k in ks)
    return min(1.0, total)


def _envelope(a: float) -> float:
    return a * math.log(a) - (a - 1.0)


@dataclass(frozen=True)
class RootResult:
    """A solved envelope root with its defining residual."""

    c: float
    branch: str
    a: float
    residual: float

    def __post_init__(self) -> None:
        if self.branch not in ("upper", "lower"):
            raise ValueError(f"branch must be 'upper' or 'lower', got {self.branch!r}")
        if self.branch == "upper" and self.a < 1.0:
            raise ValueError(f"upper-branch root must satisfy a >= 1, got {self.a}")
        if self.branch == "lower" and not 0.0 < self.a <= 1.0:
            raise ValueError(f"lower-branch root must satisfy 0 < a <= 1, got {self.a}")
        if self.residual > _RESIDUAL_TOL:
            raise ValueError(
                f"residual {self.residual} exceeds {_RESIDUAL_TOL}; solver did not converge"
            )


def solve_a(c: float, branch: str) -> RootResult:
    """Solve a*log(a) - a + 1 = c on the requested branch.

    The upper branch lives in [1, inf) and exists for every c >= 0; the lower
    branch lives in (0, 1] and exists only for 0 <= c < 1 because the left
    side tends to 1 as a -> 0.  Bracketed Newton iteration with bisection
    fallback; the returned residual is at most 1e-12.
    """
    if branch not in ("upper", "lower"):
        raise ValueError(f"branch must be 'upper' or 'lower', got {branch!r}")
    if isinstance(c, bool) or not isinstance(c, (int, float)):
        raise ValueError(f"c must be a finite real >= 0, got {c!r}")
    c = float(c)
    if not math.isfinite(c) or c < 0.0:
        raise ValueError(f"c must be a finite real >= 0, got {c!r}")
    if branch == "lower" and c >= 1.0:
        raise ValueError(
            f"lower branch requires c < 1 (the envelope tends to 1 as a -> 0), got c={c}"
        )
    if c == 0.0:
        # both branches meet at the double root a = 1
        return RootResult(c=c, branch=branch, a=1.0, residual=0.0)

    if branch == "upper":
        # exp(1 + c) already lands past the root; cap to avoid overflow
        lo, hi = 1.0, (1.0 + c + math.exp(1.0 + c)) if c < 5.5 else c + 2.0
    else:
        lo, hi = 1e-15, 1.0

    def g(a: float) -> float:
        return _envelope(a) - c

    g_lo = g(lo)
    if branch == "lower" and g_lo < 0.0:
        # envelope(1e-15) is within ~4e-14 of 1, so such c admits no
        # representable root above the bracket floor
        raise ValueError(f"c={c} is too close to 1; lower-branch root falls below 1e-15")
    x, gx = 0.5 * (lo + hi), math.inf
    tol = 0.5 * _RESIDUAL_TOL
    for _ in range(256):
        gx = g(x)
        if abs(gx) <= tol:
            break
        if (gx < 0.0) == (g_lo < 0.0):
            lo, g_lo = x, gx
        else:
            hi = x
        slope = math.log(x)
        trial = x - gx / slope if slope != 0.0 else x
        if not lo < trial < hi:
            trial = 0.5 * (lo + hi)
        if trial == x:
            trial = 0.5 * (lo + hi)
            if trial == x:
                break
        x = trial
    residual = abs(g(x))
    return RootResult(c=c, branch=branch, a=x, residual=residual)


def threshold_p(alpha: float, m: int, n: int) -> float:
    """Probe curve p(alpha) = (m * n**alpha) ** -1/2."""
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a finite real, got {alpha!r}")
    _check_count(m, "m")
    _check_count(n, "n")
    return (m * float(n) ** alpha) ** -0.5


def conditional_adjacency_prob(size: int, p: float) -> float:
    """P[another vertex touches a fixed set of `size` objects] = 1 - (1-p)^size."""
    if not isinstance(size, int) or isinstance(size, bool) or size < 0:
        raise ValueError(f"size must be an integer >= 0, got {size!r}")
    p = _check_prob(p, "p")
    if size == 0:
        return 0.0
    if p == 1.0:
        return 1.0
    return -math.expm1(size * math.log1p(-p))


@dataclass(frozen=True, eq=False)
class DegreeModel:
    """A degree law for one vertex: pmf over 0..n-1 plus the kind that produced it."""

    kind: str
    pmf: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in DEGREE_MODEL_KINDS:
            raise ValueError(f"kind must be one of {DEGREE_MODEL_KINDS}, got {self.kind!r}")
        total = float(np.sum(self.pmf))
        if abs(total - 1.0) > 1e-12 or np.any(self.pmf < 0.0):
            raise ValueError(f"pmf must be nonnegative and sum to 1, got sum={total}")


def degree_pmf(n: int, m: int, p: float, kind: str) -> DegreeModel:
    """Degree law of a single vertex under one of two models.

    'binomial-approx' treats the n-1 adjacency indicators as independent,
    giving Binomial(n-1, q_exact).  'exact-mixture' conditions on the vertex's
    own object count S ~ Binomial(m, p); given S = s the indicators really are
    independent with success probability 1 - (1-p)^s, so the mixture over s is
    the exact law.
    """
    _check_count(n, "n")
    _check_count(m, "m")
    p = _check_prob(p, "p")
    if kind not in DEGREE_MODEL_KINDS:
        raise ValueError(f"kind must be one of {DEGREE_MODEL_KINDS}, got {kind!r}")
    ks = np.arange(n)
    if kind == "binomial-approx":
        pmf = _scipy_binom.pmf(ks, n - 1, q_exact(m, p))
    else:
        sizes = np.arange(m + 1)
        weights = _scipy_binom.pmf(sizes, m, p)
        pmf = np.zeros(n)
        for s, w in zip(sizes, weights):
            if w == 0.0:
                continue
            share = conditional_adjacency_prob(int(s), p)
            pmf += w * _scipy_binom.pmf(ks, n - 1, share)
    return DegreeModel(kind=kind, pmf=pmf)


def total_variation(pmf_a, pmf_b) -> float:
    """Total variation distance 0.5 * sum |a_k - b_k| between two pmfs."""
    a = np.asarray(pmf_a, dtype=float)
    b = np.asarray(pmf_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"pmf shapes differ: {a.shape} vs {b.shape}")
    return 0.5 * float(np.sum(np.abs(a - b)))
