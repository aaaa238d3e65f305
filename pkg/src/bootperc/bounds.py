"""Closed-form calculators for the explicit bound formulas.

These are bounds, not probabilities: values may exceed 1 and are reported
raw. Overflowing expressions evaluate to +inf rather than raising, since
the iterated exponential is astronomically large for small p by design.
Every unknown absolute constant is an explicit argument.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

LAMBDA_2D = math.pi**2 / 18  # sharp constant for d = r = 2

LOG32_2 = math.log(2) / math.log(1.5)


@dataclass(frozen=True)
class BoundParams:
    """Parameter bundle recorded alongside every computed bound value."""

    d: int
    r: int
    n: int | None = None
    p: float | None = None
    lam: float | None = None
    delta: float | None = None
    p0: float = 0.1
    C: float = 1.0
    B: float = 1.0

    def lam_value(self) -> float:
        """The scaling constant: pi^2/18 for d=r=2, otherwise required input."""
        if self.lam is not None:
            return self.lam
        if self.d == 2 and self.r == 2:
            return LAMBDA_2D
        raise ValueError(
            "no default scaling constant is known for "
            f"(d={self.d}, r={self.r}); pass lam explicitly"
        )


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _safe_pow(base: float, exponent: float) -> float:
    try:
        return float(base**exponent)
    except OverflowError:
        return math.inf


def blocking_set_count(d: int, r: int, t: int) -> int:
    """Size of the extremal blocking set: l1-ball vectors whose last r-1
    coordinates are 0 or 1, counted by direct enumeration."""
    if not 2 <= r <= d:
        raise ValueError(f"need 2 <= r <= d, got r={r}, d={d}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    free = d - r + 1
    count = 0
    for head in itertools.product(range(-t, t + 1), repeat=free):
        used = sum(abs(c) for c in head)
        if used > t:
            continue
        for tail in itertools.product((0, 1), repeat=r - 1):
            if used + sum(tail) <= t:
                count += 1
    return count


def lower_tail_bound(n: int, d: int, p: float, t: int) -> float:
    """Upper bound on P(T <= t): every one of n^d/(2^d t) disjoint
    [2]^(d-1) x [2t+1] rectangles must be non-empty."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    cells = 2**d * t
    return float((1.0 - (1.0 - p) ** cells) ** (n**d / cells))


def lower_time_threshold(n: int, d: int, p: float) -> int | None:
    """Largest t with 2^d t log(1/(1-p)) <= d log n; None when p = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p == 0.0:
        return None
    if p == 1.0:
        return 0
    return math.floor(d * math.log(n) / (2**d * math.log(1.0 / (1.0 - p))))


def cube_scale(p: float, d: int, lam: float, p0: float) -> float:
    """The cube-size scale: exp iterated d-1 times on 2*lam/p, with the
    argument frozen at p0 once p exceeds p0."""
    if p <= 0 or p0 <= 0:
        raise ValueError("p and p0 must be > 0")
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    value = 2.0 * lam / (p if p <= p0 else p0)
    for _ in range(d - 1):
        value = _safe_exp(value)
        if math.isinf(value):
            return math.inf
    return value


def cube_side_threshold(p: float, delta: float, d: int, lam: float, p0: float) -> float:
    """Stated cube-size threshold: 16 K^3 (log 1/(1-p))^2 / (log 1/delta)^2."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    K = cube_scale(p, d, lam, p0)
    log_q = math.log(1.0 / (1.0 - p))
    log_d = math.log(1.0 / delta)
    return 16.0 * _safe_pow(K, 3) * log_q**2 / log_d**2


def cube_side_threshold_proof_form(
    p: float, delta: float, d: int, lam: float, p0: float
) -> float:
    """Threshold in the form the derivation actually yields:
    K * (4 K log(1/(1-p)) / log(1/delta))^(log_{3/2} 2)."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    K = cube_scale(p, d, lam, p0)
    if math.isinf(K):
        return math.inf
    log_q = math.log(1.0 / (1.0 - p))
    log_d = math.log(1.0 / delta)
    return K * _safe_pow(4.0 * K * log_q / log_d, LOG32_2)


def eta_upper_bound(L: float, d: int, p: float, B: float) -> float:
    """Bad-cube probability bound B * L^(d-1) * (1-p)^(2L-8) for large L."""
    if L < 5:
        raise ValueError(f"L must be >= 5, got {L}")
    return B * _safe_pow(L, d - 1) * _safe_pow(1.0 - p, 2 * L - 8)


def recursion_rhs(m: int, d: int, p: float, eta_m: float, C: float, B: float) -> float:
    """Right side of the doubling recursion:
    C * eta_m^3 + B * m^(d-1) * (1-p)^(4m-8)."""
    if not 0.0 <= eta_m <= 1.0:
        raise ValueError(f"eta_m must be in [0,1], got {eta_m}")
    return C * eta_m**3 + B * _safe_pow(m, d - 1) * _safe_pow(1.0 - p, 4 * m - 8)


def origin_tail_bound(t: int, t_prime: int, p: float, C: float) -> float:
    """Bound C * (1-p)^(t-t') / p on a fixed vertex staying uninfected at t."""
    if not t >= t_prime >= 0:
        raise ValueError(f"need t >= t' >= 0, got t={t}, t'={t_prime}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    return C * (1.0 - p) ** (t - t_prime) / p


def upper_tail_bound(n: int, d: int, p: float, t: int, t_prime: int) -> float:
    """Union bound n^d * (1-p)^(t-t') / p on P(T >= t)."""
    if not t >= t_prime >= 0:
        raise ValueError(f"need t >= t' >= 0, got t={t}, t'={t_prime}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    return _safe_pow(n, d) * (1.0 - p) ** (t - t_prime) / p


def path_weight(L: float, d: int, p: float, B: float) -> float:
    """Per-cube path weight B * L^d * (1-p)^(-8)."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0,1), got {p}")
    return B * _safe_pow(L, d) * (1.0 - p) ** -8


def clamp01(value: float) -> float:
    """Companion value clipped into [0,1] for plotting probability bounds."""
    if math.isnan(value):
        return value
    return min(1.0, max(0.0, value))
