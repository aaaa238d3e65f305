"""Bootstrap percolation dynamics.

Synchronous threshold dynamics: an uninfected vertex becomes infected at
step i once at least r of its neighbors were infected at step i-1, and
infected vertices stay infected. The workhorse is a frontier/counter sweep
that relaxes each edge a constant number of times, so a full evolution runs
in O(V*d) amortized plus an O(V) scan per growth step.

Cube classification (strongly good / semi-good / bad) runs the dynamics on
the induced open-boundary subgraph of the cube with the threshold unchanged.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .lattice import (
    Boundary,
    LatticeShape,
    Region,
    Site,
    SiteSet,
    box_neighbor_table,
    interior,
)


@dataclass(frozen=True)
class ProcessParams:
    """Dynamics parameters: ambient lattice and infection threshold."""

    shape: LatticeShape
    r: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError(f"infection threshold must be >= 1, got {self.r}")
        if self.r > 2 * self.shape.d:
            warnings.warn(
                f"threshold r={self.r} exceeds the maximum degree {2 * self.shape.d}; "
                "nothing beyond the initial set will ever infect",
                stacklevel=2,
            )


class CubeClass(Enum):
    STRONGLY_GOOD = "strongly_good"
    SEMI_GOOD = "semi_good"
    BAD = "bad"

    @property
    def is_good(self) -> bool:
        return self is not CubeClass.BAD


class InfectionSchedule:
    """Per-site infection times; -1 encodes NEVER internally.

    The public accessors return None for never-infected sites; CSV output
    spells the sentinel as the literal string "never".
    """

    __slots__ = ("shape", "times")

    def __init__(self, shape: LatticeShape, times: np.ndarray):
        times = np.asarray(times, dtype=np.int64)
        if times.shape != (shape.volume,):
            raise ValueError("times length does not match lattice volume")
        times = times.copy()
        times.flags.writeable = False
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "times", times)

    def __setattr__(self, name, value):
        raise AttributeError("InfectionSchedule is immutable")

    def time_of(self, site: Site) -> int | None:
        t = int(self.times[self.shape.index_of(site)])
        return None if t < 0 else t

    def level(self, t: int) -> SiteSet:
        """The infected set A_t."""
        return SiteSet(self.shape, (self.times >= 0) & (self.times <= t))

    def span_set(self) -> SiteSet:
        return SiteSet(self.shape, self.times >= 0)

    @property
    def percolates(self) -> bool:
        return bool(np.all(self.times >= 0))

    def percolation_time(self) -> int | None:
        if not self.percolates:
            return None
        return int(self.times.max(initial=0))

    def max_finite_time(self) -> int:
        finite = self.times[self.times >= 0]
        return int(finite.max()) if finite.size else 0


@lru_cache(maxsize=128)
def _safe_table(dims: tuple[int, ...], torus: bool) -> np.ndarray:
    """Neighbor table with missing entries redirected to a sentinel slot V."""
    table = box_neighbor_table(dims, torus)
    volume = table.shape[0]
    safe = np.where(table < 0, volume, table)
    safe.flags.writeable = False
    return safe


def _schedule_times(mask: np.ndarray, dims: tuple[int, ...], torus: bool, r: int) -> np.ndarray:
    """Infection times for dynamics on a box; the frontier/counter sweep."""
    volume = mask.shape[0]
    safe = _safe_table(dims, torus)
    times = np.full(volume, -1, dtype=np.int64)
    infected = mask.copy()
    times[infected] = 0
    counts = np.zeros(volume + 1, dtype=np.int64)
    frontier = np.flatnonzero(infected)
    t = 0
    while frontier.size:
        touched = safe[frontier].ravel()
        counts += np.bincount(touched, minlength=volume + 1)
        # only neighbors of this level can newly reach the threshold
        cand = np.unique(touched)
        if cand.size and cand[-1] == volume:
            cand = cand[:-1]
        nxt = cand[(counts[cand] >= r) & ~infected[cand]]
        if nxt.size == 0:
            break
        t += 1
        if t > volume:
            raise AssertionError("fixation bound exceeded; dynamics not monotone")
        times[nxt] = t
        infected[nxt] = True
        frontier = nxt
    return times


def evolve_step(infected: SiteSet, params: ProcessParams) -> SiteSet:
    """One synchronous update step A_{i-1} -> A_i."""
    if infected.shape != params.shape:
        raise ValueError("infected set does not live on the process shape")
    shape = params.shape
    safe = _safe_table(shape.dims, shape.boundary is Boundary.TORUS)
    ext = np.concatenate([infected.mask, [False]])
    counts = ext[safe].sum(axis=1)
    return SiteSet(shape, infected.mask | (counts >= params.r))


def evolve_until_fixation(A0: SiteSet, params: ProcessParams) -> InfectionSchedule:
    """Run to fixation and return the full infection schedule."""
    if A0.shape != params.shape:
        raise ValueError("initial set does not live on the process shape")
    shape = params.shape
    times = _schedule_times(
        A0.mask, shape.dims, shape.boundary is Boundary.TORUS, params.r
    )
    return InfectionSchedule(shape, times)


def span(A0: SiteSet, params: ProcessParams) -> SiteSet:
    """The closure [A0]: all sites ever infected."""
    return evolve_until_fixation(A0, params).span_set()


def percolation_time(A0: SiteSet, params: ProcessParams) -> int | None:
    """Minimal t with A_t = V, or None when the span is not everything."""
    return evolve_until_fixation(A0, params).percolation_time()


def uninfected_at(x: Site, t: int, schedule: InfectionSchedule) -> bool:
    """True iff x is still uninfected at time t (never counts as uninfected)."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    tx = schedule.time_of(x)
    return tx is None or tx > t


def _restrict_to_box(D: Region, A0: SiteSet) -> tuple[np.ndarray, tuple[int, ...]]:
    """Initial membership of A0 inside D, in the box's own linearization."""
    if not D.is_subcube:
        raise ValueError("induced dynamics require an all-interval region")
    if D.d != A0.shape.d:
        raise ValueError("region dimension does not match the ambient shape")
    for lo, hi in D.bounds():
        if not (1 <= lo and hi <= A0.shape.n):
            raise ValueError(f"region {D.to_text()} out of shape bounds")
    dims = D.side_lengths()
    ranges = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in D.bounds()]
    mesh = np.meshgrid(*ranges, indexing="ij")
    idx = np.zeros(mesh[0].shape, dtype=np.int64)
    stride = 1
    for axis in range(D.d):
        idx += (mesh[axis] - 1) * stride
        stride *= A0.shape.n
    # F-order ravel varies axis 1 fastest, matching box linearization
    return A0.mask[idx.ravel(order="F")], dims


def is_internally_spanned(D: Region, A0: SiteSet, r: int) -> bool:
    """True iff D is covered by the span of A0 & D inside the induced box."""
    local, dims = _restrict_to_box(D, A0)
    times = _schedule_times(local, dims, torus=False, r=r)
    return bool(np.all(times >= 0))


@lru_cache(maxsize=64)
def _interior_mask(m: int, d: int) -> np.ndarray:
    mask = interior(m, d).mask
    return mask


def classify_cube(D: Region, A0: SiteSet, r: int) -> CubeClass:
    """Strongly good / semi-good / bad classification of a cube region.

    A side-2 cube has an empty interior, so it is never bad.
    """
    local, dims = _restrict_to_box(D, A0)
    lengths = set(dims)
    if len(lengths) != 1:
        raise ValueError("classify_cube requires equal side lengths")
    m = lengths.pop()
    if m < 2:
        raise ValueError(f"classify_cube requires side length >= 2, got {m}")
    times = _schedule_times(local, dims, torus=False, r=r)
    spanned = times >= 0
    if bool(np.all(spanned)):
        return CubeClass.STRONGLY_GOOD
    if bool(np.all(spanned[_interior_mask(m, D.d)])):
        return CubeClass.SEMI_GOOD
    return CubeClass.BAD
