"""Seeded random initial sets and Monte Carlo estimators.

Randomness is counter-based: every site's coin is a pure function of
(seed, site index) via the Philox generator, so a field is identical no
matter how or where it is produced, and trial seeds derive deterministically
from a master seed. For a fixed seed the fields at increasing p are nested
(site infected iff its uniform < p), which makes common-random-number
bisection curves monotone by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import engine
from .lattice import Boundary, LatticeShape, SiteSet, cube

_WILSON_Z = 1.959963984540054  # 97.5% normal quantile


def derive_seed(master_seed: int, *path: int) -> int:
    """Stable 64-bit seed for a sub-stream (trial, probe, ...) of a master seed."""
    ss = np.random.SeedSequence([int(master_seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def site_uniforms(shape: LatticeShape, seed: int) -> np.ndarray:
    """One uniform in [0,1) per site, a pure function of (seed, site index)."""
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    return gen.random(shape.volume)


def bernoulli_field(shape: LatticeShape, p: float, seed: int) -> SiteSet:
    """Each site infected independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0,1], got {p}")
    return SiteSet(shape, site_uniforms(shape, seed) < p)


@dataclass(frozen=True)
class TrialPlan:
    shape: LatticeShape
    r: int
    p: float
    trials: int
    master_seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability must be in [0,1], got {self.p}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def trial_seed(self, trial: int) -> int:
        return derive_seed(self.master_seed, trial)


@dataclass(frozen=True)
class EstimateResult:
    """Point estimate of a probability with its 95% Wilson interval."""

    point: float
    ci_low: float
    ci_high: float
    trials: int
    successes: int


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = _WILSON_Z
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    # rounding can push an endpoint a hair past phat at k=0 or k=n; the
    # interval always contains the point estimate mathematically
    low = max(0.0, min(center - half, phat))
    high = min(1.0, max(center + half, phat))
    return low, high


def _estimate(successes: int, trials: int) -> EstimateResult:
    low, high = wilson_interval(successes, trials)
    return EstimateResult(successes / trials, low, high, trials, successes)


def estimate_percolation(plan: TrialPlan) -> EstimateResult:
    """Fraction of seeded trials whose span is the whole vertex set."""
    params = engine.ProcessParams(plan.shape, plan.r)
    hits = 0
    for trial in range(plan.trials):
        field = bernoulli_field(plan.shape, plan.p, plan.trial_seed(trial))
        if engine.evolve_until_fixation(field, params).percolates:
            hits += 1
    return _estimate(hits, plan.trials)


def estimate_eta(m: int, d: int, p: float, trials: int, seed: int) -> EstimateResult:
    """Monte Carlo estimate of the probability that [m]^d is bad (threshold d)."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    shape = LatticeShape(d, m, Boundary.OPEN)
    box = cube(d, m)
    bad = 0
    for trial in range(trials):
        field = bernoulli_field(shape, p, derive_seed(seed, trial))
        if engine.classify_cube(box, field, r=d) is engine.CubeClass.BAD:
            bad += 1
    return _estimate(bad, trials)


@dataclass(frozen=True)
class TimeQuantiles:
    """Empirical percolation-time quantiles over percolating trials only."""

    quantiles: dict[float, float]
    percolated: int
    never: int

    @property
    def trials(self) -> int:
        return self.percolated + self.never


def percolation_times(plan: TrialPlan) -> list[int | None]:
    """Per-trial percolation time (None when the trial does not percolate)."""
    params = engine.ProcessParams(plan.shape, plan.r)
    out: list[int | None] = []
    for trial in range(plan.trials):
        field = bernoulli_field(plan.shape, plan.p, plan.trial_seed(trial))
        out.append(engine.evolve_until_fixation(field, params).percolation_time())
    return out


def time_quantiles(plan: TrialPlan, quantiles: list[float]) -> TimeQuantiles:
    """Quantiles of T over percolating trials; non-percolating counted aside."""
    for q in quantiles:
        if not 0.0 < q < 1.0:
            raise ValueError(f"quantiles must lie in (0,1), got {q}")
    times = percolation_times(plan)
    finite = np.array([t for t in times if t is not None], dtype=np.float64)
    never = sum(1 for t in times if t is None)
    if finite.size == 0:
        return TimeQuantiles({}, 0, never)
    values = np.quantile(finite, quantiles, method="linear")
    return TimeQuantiles(
        {q: float(v) for q, v in zip(quantiles, values)}, int(finite.size), never
    )


@dataclass(frozen=True)
class PcProbe:
    p: float
    successes: int
    trials: int

    @property
    def point(self) -> float:
        return self.successes / self.trials


def estimate_pc_detailed(
    shape: LatticeShape, r: int, trials_per_probe: int, tol: float, seed: int
) -> tuple[float, list[PcProbe]]:
    """Bisection of the estimated percolation probability against 1/2.

    Every probe reuses the same per-trial seeds (common random numbers), so
    the empirical curve is exactly nondecreasing in p and the bisection
    bracket is sound.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    if trials_per_probe < 1:
        raise ValueError("trials_per_probe must be >= 1")
    params = engine.ProcessParams(shape, r)
    seeds = [derive_seed(seed, i) for i in range(trials_per_probe)]
    probes: list[PcProbe] = []

    def probe(p: float) -> float:
        hits = 0
        for s in seeds:
            field = SiteSet(shape, site_uniforms(shape, s) < p)
            if engine.evolve_until_fixation(field, params).percolates:
                hits += 1
        probes.append(PcProbe(p, hits, trials_per_probe))
        return hits / trials_per_probe

    lo, hi = 0.0, 1.0
    if probe(lo) > 0.5 or probe(hi) <= 0.5:
        raise ValueError(
            "bisection bracket failure: estimated percolation probability "
            "does not cross 1/2 between p=0 and p=1"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if probe(mid) <= 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2, probes


def estimate_pc(
    shape: LatticeShape, r: int, trials_per_probe: int, tol: float, seed: int
) -> float:
    """Bisection estimate of the critical probability (midpoint of final bracket)."""
    pc, _ = estimate_pc_detailed(shape, r, trials_per_probe, tol, seed)
    return pc
