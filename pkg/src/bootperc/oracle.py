"""Exact brute-force ground truth on tiny instances.

Everything here enumerates configurations outright and is capped at desk
scale (24 sites for full enumeration, 20 ball sites for subset search).
The evolver used for enumeration deliberately recomputes every neighbor
count at every step: it shares no stepping logic with the optimized
frontier engine, which makes it a meaningful differential-testing oracle.
A deterministic ~1% sample of enumerated configurations is re-run through
the optimized engine and any disagreement is surfaced as a fault.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import engine
from .engine import ProcessParams, _safe_table
from .errors import CapacityError, InternalFault
from .lattice import Boundary, LatticeShape, SiteSet, ball, interior

MAX_ENUM_SITES = 24
MAX_BALL_SITES = 20

_CHUNK = 1 << 14
_CROSSCHECK_STRIDE = 97  # every 97th configuration, deterministic ~1% sample


def naive_span(A0: SiteSet, params: ProcessParams) -> SiteSet:
    """Reference evolver: recompute all neighbor counts at every step."""
    shape = params.shape
    safe = _safe_table(shape.dims, shape.boundary is Boundary.TORUS)
    state = np.concatenate([A0.mask, [False]])
    while True:
        counts = state[safe].sum(axis=1)
        new = state[:-1] | (counts >= params.r)
        if np.array_equal(new, state[:-1]):
            return SiteSet(shape, new)
        state[:-1] = new


def _batch_fixation(
    states: np.ndarray, dims: tuple[int, ...], torus: bool, r: int
) -> np.ndarray:
    """Synchronous fixation of many configurations at once (naive stepping)."""
    safe = _safe_table(dims, torus)
    volume = states.shape[1]
    ext = np.zeros((states.shape[0], volume + 1), dtype=bool)
    ext[:, :volume] = states
    while True:
        counts = ext[:, safe].sum(axis=2)
        new = ext[:, :volume] | (counts >= r)
        if np.array_equal(new, ext[:, :volume]):
            return new
        ext[:, :volume] = new


def _batch_steps(
    states: np.ndarray, dims: tuple[int, ...], torus: bool, r: int, steps: int
) -> np.ndarray:
    """Exactly `steps` synchronous updates (stops early at fixation)."""
    safe = _safe_table(dims, torus)
    volume = states.shape[1]
    ext = np.zeros((states.shape[0], volume + 1), dtype=bool)
    ext[:, :volume] = states
    for _ in range(steps):
        counts = ext[:, safe].sum(axis=2)
        new = ext[:, :volume] | (counts >= r)
        if np.array_equal(new, ext[:, :volume]):
            break
        ext[:, :volume] = new
    return ext[:, :volume].copy()


def _config_bits(start: int, stop: int, nsites: int) -> np.ndarray:
    cfg = np.arange(start, stop, dtype=np.int64)
    return ((cfg[:, None] >> np.arange(nsites)) & 1).astype(bool)


def _check_capacity(nsites: int) -> None:
    if nsites > MAX_ENUM_SITES:
        raise CapacityError(
            f"{nsites} sites exceed the full-enumeration cap of {MAX_ENUM_SITES}"
        )


@dataclass(frozen=True)
class PercPolynomial:
    """Exact percolation probability as binomial-weighted subset counts.

    counts[k] is the number of k-site initial sets whose span is everything,
    so P(p) = sum_k counts[k] p^k (1-p)^(N-k).
    """

    shape: LatticeShape
    r: int
    counts: tuple[int, ...]

    @property
    def nsites(self) -> int:
        return len(self.counts) - 1

    def evaluate(self, p: float) -> float:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {p}")
        n = self.nsites
        total = 0.0
        for k, c in enumerate(self.counts):
            if c:
                total += c * p**k * (1.0 - p) ** (n - k)
        return total


def exact_percolation_polynomial(shape: LatticeShape, r: int) -> PercPolynomial:
    """Enumerate all initial sets and tally percolating ones by cardinality."""
    nsites = shape.volume
    _check_capacity(nsites)
    torus = shape.boundary is Boundary.TORUS
    params = ProcessParams(shape, r)
    counts = np.zeros(nsites + 1, dtype=np.int64)
    for start in range(0, 1 << nsites, _CHUNK):
        stop = min(start + _CHUNK, 1 << nsites)
        states = _config_bits(start, stop, nsites)
        spans = _batch_fixation(states, shape.dims, torus, r)
        percolated = spans.all(axis=1)
        cards = states.sum(axis=1)
        np.add.at(counts, cards[percolated], 1)
        for offset in range(0, stop - start, _CROSSCHECK_STRIDE):
            reference = SiteSet(shape, spans[offset])
            optimized = engine.span(SiteSet(shape, states[offset]), params)
            if optimized != reference:
                raise InternalFault(
                    f"engine span disagrees with reference evolver on "
                    f"configuration {start + offset}"
                )
    return PercPolynomial(shape, r, tuple(int(c) for c in counts))


@lru_cache(maxsize=32)
def _bad_counts(m: int, d: int) -> tuple[int, ...]:
    """Number of bad configurations of [m]^d (threshold d) per cardinality."""
    nsites = m**d
    _check_capacity(nsites)
    dims = (m,) * d
    interior_mask = interior(m, d).mask
    counts = np.zeros(nsites + 1, dtype=np.int64)
    for start in range(0, 1 << nsites, _CHUNK):
        stop = min(start + _CHUNK, 1 << nsites)
        states = _config_bits(start, stop, nsites)
        spans = _batch_fixation(states, dims, torus=False, r=d)
        bad = ~spans[:, interior_mask].all(axis=1)
        cards = states.sum(axis=1)
        np.add.at(counts, cards[bad], 1)
    return tuple(int(c) for c in counts)


def exact_eta(m: int, d: int, p: float) -> float:
    """Exact probability that [m]^d is bad under Bernoulli(p) initialization."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    counts = _bad_counts(m, d)
    nsites = m**d
    return float(
        sum(c * p**k * (1.0 - p) ** (nsites - k) for k, c in enumerate(counts) if c)
    )


def exact_max_percolation_time(shape: LatticeShape, r: int) -> int:
    """Maximum percolation time over all percolating initial sets."""
    nsites = shape.volume
    _check_capacity(nsites)
    torus = shape.boundary is Boundary.TORUS
    safe = _safe_table(shape.dims, torus)
    best = 0
    for start in range(0, 1 << nsites, _CHUNK):
        stop = min(start + _CHUNK, 1 << nsites)
        states = _config_bits(start, stop, nsites)
        ext = np.zeros((states.shape[0], nsites + 1), dtype=bool)
        ext[:, :nsites] = states
        full_time = np.where(states.all(axis=1), 0, -1)
        t = 0
        while True:
            counts = ext[:, safe].sum(axis=2)
            new = ext[:, :nsites] | (counts >= r)
            if np.array_equal(new, ext[:, :nsites]):
                break
            ext[:, :nsites] = new
            t += 1
            newly_full = new.all(axis=1) & (full_time < 0)
            full_time[newly_full] = t
        if np.any(full_time >= 0):
            best = max(best, int(full_time.max()))
    return best


def exact_extremal(d: int, r: int, t: int) -> int:
    """Minimum number of uninfected ball sites that keep the origin
    uninfected at time t, everything outside the l1 ball being infected.

    Exhaustive search in ascending subset size; the first size with a
    witness is the minimum.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    n = 2 * t + 3
    shape = LatticeShape(d, n, Boundary.OPEN)
    center = (t + 2,) * d
    ball_idx = ball(t, center, shape).indices()
    if ball_idx.size > MAX_BALL_SITES:
        raise CapacityError(
            f"ball has {ball_idx.size} sites, above the cap of {MAX_BALL_SITES}"
        )
    center_idx = shape.index_of(center)
    for k in range(ball_idx.size + 1):
        found = _blocking_witness_exists(
            shape, r, t, ball_idx, center_idx, k
        )
        if found:
            return k
    raise InternalFault("even emptying the whole ball failed to block the origin")


def _blocking_witness_exists(
    shape: LatticeShape,
    r: int,
    t: int,
    ball_idx: np.ndarray,
    center_idx: int,
    k: int,
) -> bool:
    nsites = shape.volume
    combos = itertools.combinations([int(i) for i in ball_idx], k)
    while True:
        batch = list(itertools.islice(combos, 2048))
        if not batch:
            return False
        states = np.ones((len(batch), nsites), dtype=bool)
        for row, subset in enumerate(batch):
            states[row, list(subset)] = False
        after = _batch_steps(states, shape.dims, torus=False, r=r, steps=t)
        if np.any(~after[:, center_idx]):
            return True
