"""Deterministic certificates and executable proof artifacts.

Covers four kinds of checkable statements:

* empty-rectangle certificates: an initially uninfected [2t+1] x [2]^(d-1)
  box forces percolation time > t (threshold d);
* extremal blocking sets: emptying the ball sites whose trailing r-1
  coordinates are 0/1 keeps the center uninfected at time t, and exhaustive
  subset search confirms no smaller blocking set exists;
* staircase paths: a vertex uninfected at time t yields a coordinatewise
  nondecreasing path of t+1 initially uninfected vertices;
* the d=3 seam-event audit: if all eight half-size subcubes of [2m]^3 are
  good and every seam segment group is hit by an initial infection, then
  the whole cube is good. The audit samples random fields hunting for
  counterexamples; by the mathematics there are none, and any hit is
  archived as a finding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import engine, sampler
from .engine import CubeClass, ProcessParams
from .errors import InternalFault
from .lattice import (
    Boundary,
    LatticeShape,
    Region,
    Site,
    SiteSet,
    cube,
    region_indices,
    subcube_partition,
    validate_site,
)
from .oracle import exact_extremal

# ---------------------------------------------------------------------------
# Empty-rectangle certificates


@dataclass(frozen=True)
class RectangleCertificate:
    """An axis-aligned [2t+1] x [2]^(d-1) box, fully uninfected initially."""

    region: Region
    t: int

    def __post_init__(self) -> None:
        lengths = sorted(self.region.side_lengths(), reverse=True)
        expected = sorted([2 * self.t + 1] + [2] * (self.region.d - 1), reverse=True)
        if lengths != expected:
            raise ValueError(
                f"region {self.region.to_text()} is not a "
                f"[2t+1] x [2]^(d-1) box for t={self.t}"
            )


def _rectangle_extents(d: int, t: int, long_axis: int) -> list[int]:
    if not 1 <= long_axis <= d:
        raise ValueError(f"long axis must be in [1,{d}], got {long_axis}")
    return [2 * t + 1 if axis == long_axis - 1 else 2 for axis in range(d)]


def plant_rectangle(
    shape: LatticeShape, r: int, t: int, position: Site, axis: int
) -> SiteSet:
    """All sites infected except a [2t+1] x [2]^(d-1) box at `position`.

    The box never wraps: it must fit within coordinate bounds as placed.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    validate_site(position, shape)
    extents = _rectangle_extents(shape.d, t, axis)
    axes = []
    for pos, ext in zip(position, extents):
        if pos + ext - 1 > shape.n:
            raise ValueError(
                f"box of extents {extents} at {position} does not fit in "
                f"[1,{shape.n}]^{shape.d} without wrapping"
            )
        axes.append((pos, pos + ext - 1))
    box = Region(tuple(axes))
    mask = np.ones(shape.volume, dtype=bool)
    mask[region_indices(box, shape)] = False
    return SiteSet(shape, mask)


def _window_sum(arr: np.ndarray, window: int, axis: int) -> np.ndarray:
    """Sliding sums of length `window` along `axis`."""
    cs = np.cumsum(arr, axis=axis, dtype=np.int64)
    length = arr.shape[axis] - window + 1
    upper = cs.take(range(window - 1, arr.shape[axis]), axis=axis)
    head = cs.take(range(0, length - 1), axis=axis)
    pad_shape = list(upper.shape)
    pad_shape[axis] = 1
    head = np.concatenate([np.zeros(pad_shape, dtype=np.int64), head], axis=axis)
    return upper - head


def find_empty_rectangle(A0: SiteSet, t: int) -> RectangleCertificate | None:
    """First fully-uninfected [2t+1] x [2]^(d-1) box, or None.

    Long axes are scanned in order, anchors in lexicographic coordinate
    order; wrapped placements are never considered. A None result means
    every such rectangle contains an initially infected vertex.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    shape = A0.shape
    uninfected = (~A0.mask).reshape(shape.dims, order="F")
    for long_axis in range(1, shape.d + 1):
        extents = _rectangle_extents(shape.d, t, long_axis)
        if any(ext > shape.n for ext in extents):
            continue
        counts = uninfected.astype(np.int64)
        for axis, ext in enumerate(extents):
            counts = _window_sum(counts, ext, axis)
        volume = int(np.prod(extents))
        anchors = np.argwhere(counts == volume)
        if anchors.size:
            corner = anchors[0] + 1  # argwhere yields lexicographic order
            region = Region(
                tuple(
                    (int(c), int(c) + ext - 1) for c, ext in zip(corner, extents)
                )
            )
            return RectangleCertificate(region, t)
    return None


def verify_lower_certificate(
    A0: SiteSet, params: ProcessParams, cert: RectangleCertificate
) -> bool:
    """Replay the dynamics and check percolation time > cert.t.

    A False return on a genuinely empty certificate region is a software
    fault (the rectangle provably delays percolation past t when r = d);
    callers surface it loudly.
    """
    box_idx = region_indices(cert.region, A0.shape)
    if bool(A0.mask[box_idx].any()):
        raise ValueError("certificate region is not empty in the initial set")
    T = engine.percolation_time(A0, params)
    return T is None or T > cert.t


# ---------------------------------------------------------------------------
# Extremal blocking sets


def blocking_set(d: int, r: int, t: int, center: Site, shape: LatticeShape) -> SiteSet:
    """The extremal blocking set anchored at `center`: ball offsets whose
    last r-1 coordinates are 0 or 1."""
    if not 2 <= r <= d:
        raise ValueError(f"need 2 <= r <= d, got r={r}, d={d}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    validate_site(center, shape)
    if shape.boundary is Boundary.TORUS and shape.n < 2 * t + 2:
        raise ValueError(
            f"ball of radius {t} self-wraps on a torus of side {shape.n}"
        )
    free = d - r + 1
    sites = []
    for head in itertools.product(range(-t, t + 1), repeat=free):
        used = sum(abs(c) for c in head)
        if used > t:
            continue
        for tail in itertools.product((0, 1), repeat=r - 1):
            if used + sum(tail) > t:
                continue
            offset = head + tail
            coords = []
            for c, o in zip(center, offset):
                x = c + o
                if shape.boundary is Boundary.TORUS:
                    x = (x - 1) % shape.n + 1
                elif not 1 <= x <= shape.n:
                    raise ValueError(
                        f"translated blocking set leaves the open grid at {tuple(center)}+{offset}"
                    )
                coords.append(x)
            sites.append(tuple(coords))
    return SiteSet.from_sites(shape, sites)


def verify_extremal(
    d: int, r: int, t: int, shape: LatticeShape | None = None
) -> bool:
    """Empty the blocking set, infect everything else, and check the center
    is still uninfected at time t. Guaranteed true; False is a fault."""
    if shape is None:
        shape = LatticeShape(d, 2 * t + 3, Boundary.OPEN)
    center = (shape.n // 2 + 1,) * d
    blocking = blocking_set(d, r, t, center, shape)
    A0 = ~blocking
    schedule = engine.evolve_until_fixation(A0, ProcessParams(shape, r))
    return engine.uninfected_at(center, t, schedule)


def exhaustive_extremal_check(d: int, r: int, t: int) -> int:
    """Brute-force minimum blocking-set size (delegates to the oracle)."""
    return exact_extremal(d, r, t)


# ---------------------------------------------------------------------------
# Staircase paths


def extract_staircase(
    A0: SiteSet, x: Site, t: int, params: ProcessParams
) -> list[Site]:
    """A path x = v_0, v_1, ..., v_t, each step +1 along one coordinate
    (wrapping on the torus), with v_k uninfected at time t-k.

    Consequently every vertex on the path is initially uninfected. Among
    valid continuations the smallest axis index wins. Existence is
    guaranteed when r = d and every vertex has its d forward neighbors
    (torus with n >= 3); a missing continuation is an internal fault.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if params.r != params.shape.d:
        raise ValueError("staircase extraction requires threshold r = d")
    if params.shape.n < 3:
        raise ValueError("staircase extraction requires n >= 3")
    shape = params.shape
    schedule = engine.evolve_until_fixation(A0, params)
    if not engine.uninfected_at(x, t, schedule):
        raise ValueError(f"site {x} is already infected at time {t}")
    path = [x]
    cur = x
    for k in range(t):
        remaining = t - k - 1
        nxt: Site | None = None
        for axis in range(shape.d):
            coords = list(cur)
            coords[axis] += 1
            if coords[axis] > shape.n:
                if shape.boundary is Boundary.TORUS:
                    coords[axis] = 1
                else:
                    continue
            cand = tuple(coords)
            if engine.uninfected_at(cand, remaining, schedule):
                nxt = cand
                break
        if nxt is None:
            raise InternalFault(
                f"no staircase continuation from {cur} at remaining time "
                f"{remaining}; this contradicts the pigeonhole guarantee"
            )
        path.append(nxt)
        cur = nxt
    return path


# ---------------------------------------------------------------------------
# d=3 seam events

_DOUBLE = ("M",)


def _slot_options(slot, m: int) -> list[tuple[int, ...]]:
    """Axis choices for one slot of a seam-event signature."""
    if slot == "M":
        return [(m,), (m + 1,)]
    if isinstance(slot, tuple) and slot[0] == "I":
        return [(slot[1], slot[2])]
    if isinstance(slot, tuple) and slot[0] == "F":
        return [(slot[1],)]
    raise ValueError(f"bad slot {slot!r}")


def _slot_label(slot, m: int) -> str:
    if slot == "M":
        return f"{m}|{m + 1}"
    if slot[0] == "I":
        return f"{slot[1]}..{slot[2]}"
    return str(slot[1])


@dataclass(frozen=True)
class _SegmentEvent:
    """At least one of a family of parallel line segments is non-empty."""

    name: str
    segment_indices: tuple[np.ndarray, ...]

    def occurs(self, mask: np.ndarray) -> bool:
        return any(bool(mask[idx].any()) for idx in self.segment_indices)


class _SeamEvaluator:
    """Precomputed index arrays for all seam events of [2m]^3."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError(f"m must be >= 2, got {m}")
        self.m = m
        self.shape = LatticeShape(3, 2 * m, Boundary.OPEN)
        n = 2 * m
        I1N = ("I", 1, n)
        Ilo = ("I", 1, m)
        Ihi = ("I", m + 1, n)
        F = lambda a: ("F", a)
        M = "M"

        def ev(s1, s2, s3) -> _SegmentEvent:
            segs = []
            for a1 in _slot_options(s1, m):
                for a2 in _slot_options(s2, m):
                    for a3 in _slot_options(s3, m):
                        segs.append(
                            region_indices(Region((a1, a2, a3)), self.shape)
                        )
            name = (
                f"B[{_slot_label(s1, m)},{_slot_label(s2, m)},{_slot_label(s3, m)}]"
            )
            return _SegmentEvent(name, tuple(segs))

        lows = (n, m + 1, m, 1)
        self.groups: list[list[_SegmentEvent]] = [
            [ev(M, I1N, F(a3)) for a3 in lows],
            [ev(I1N, M, F(a3)) for a3 in lows],
            [ev(M, M, Ihi), ev(M, M, Ilo)],
            [ev(M, F(1), I1N), ev(I1N, F(1), M)],
            [ev(F(n), M, I1N), ev(F(n), I1N, M)],
            [ev(I1N, F(n), M), ev(M, F(n), I1N)],
            [ev(F(1), M, I1N), ev(F(1), I1N, M)],
            [
                *(ev(M, F(a2), I1N) for a2 in (n, m + 1)),
                *(ev(I1N, F(a2), M) for a2 in (n, m + 1)),
                ev(M, Ihi, M),
            ],
            [
                *(ev(F(a1), M, I1N) for a1 in (n, m + 1)),
                *(ev(F(a1), I1N, M) for a1 in (n, m + 1)),
                ev(Ihi, M, M),
            ],
            [
                *(ev(M, I1N, F(a3)) for a3 in (n, m + 1)),
                *(ev(I1N, M, F(a3)) for a3 in (n, m + 1)),
                ev(M, M, Ihi),
            ],
        ]
        # inner-corner anchors of the three coordinate faces: both bounding
        # segments of the quadrant next to the first subcube must be non-empty
        def seg(axes) -> np.ndarray:
            return region_indices(Region(axes), self.shape)

        self.face_anchor_segments = {
            "x=1": (seg(((1,), (1, m), (m,))), seg(((1,), (m,), (1, m)))),
            "y=1": (seg(((1, m), (1,), (m,))), seg(((m,), (1,), (1, m)))),
            "z=1": (seg(((1, m), (m,), (1,))), seg(((m,), (1, m), (1,)))),
        }
        self.subcubes = subcube_partition(m, 3)
        self.whole = cube(3, n)


@lru_cache(maxsize=16)
def _seam_evaluator(m: int) -> _SeamEvaluator:
    return _SeamEvaluator(m)


@dataclass(frozen=True)
class SeamEventReport:
    """Evaluation of every named seam event on one initial configuration.

    `groups` holds the ten composite segment-event conjunctions in their
    definition order; `seam` is the conjunction of the first seven (the
    audit's B column). `cube_classes` lists the eight subcube classes in
    canonical partition order. A = all_cubes_good, E = whole_good in the
    audit CSV.
    """

    m: int
    primitives: dict[str, bool]
    groups: tuple[bool, ...]
    seam: bool
    face_anchors: dict[str, bool]
    cube_classes: tuple[CubeClass, ...]
    all_cubes_good: bool
    one_bad: bool
    two_bad: bool
    whole_good: bool


def seam_events_d3(m: int, A0: SiteSet) -> SeamEventReport:
    """Evaluate all seam events and cube classes of [2m]^3 for one field."""
    ev = _seam_evaluator(m)
    if A0.shape != ev.shape:
        raise ValueError(
            f"initial set must live on the open cube of side {2 * m}, "
            f"got {A0.shape}"
        )
    mask = A0.mask
    primitives: dict[str, bool] = {}
    group_flags = []
    for group in ev.groups:
        flags = []
        for event in group:
            value = event.occurs(mask)
            primitives.setdefault(event.name, value)
            flags.append(value)
        group_flags.append(all(flags))
    face_anchors = {
        key: all(bool(mask[idx].any()) for idx in segs)
        for key, segs in ev.face_anchor_segments.items()
    }
    classes = tuple(engine.classify_cube(D, A0, r=3) for D in ev.subcubes)
    bad = sum(1 for c in classes if not c.is_good)
    whole_good = engine.classify_cube(ev.whole, A0, r=3).is_good
    return SeamEventReport(
        m=m,
        primitives=primitives,
        groups=tuple(group_flags),
        seam=all(group_flags[:7]),
        face_anchors=face_anchors,
        cube_classes=classes,
        all_cubes_good=bad == 0,
        one_bad=bad == 1,
        two_bad=bad == 2,
        whole_good=whole_good,
    )


# ---------------------------------------------------------------------------
# Monte Carlo audit of the seam implication


@dataclass(frozen=True)
class AuditTrial:
    trial: int
    seed: int
    all_cubes_good: bool
    seam: bool
    whole_good: bool

    @property
    def counterexample(self) -> bool:
        return self.all_cubes_good and self.seam and not self.whole_good


@dataclass(frozen=True)
class AuditResult:
    m: int
    p: float
    trials: tuple[AuditTrial, ...]
    counterexamples: int
    samples: tuple[SiteSet, ...]


def audit_seam_implication(
    m: int, p: float, trials: int, seed: int, keep_samples: int = 10
) -> AuditResult:
    """Sample Bernoulli fields on [2m]^3 and count configurations where all
    subcubes are good and every seam group occurs, yet the cube is not good.

    The expected count is zero; any hit is returned for archiving.
    """
    if m < 3:
        raise ValueError(f"audit requires m >= 3, got {m}")
    shape = LatticeShape(3, 2 * m, Boundary.OPEN)
    rows = []
    hits: list[SiteSet] = []
    for trial in range(trials):
        trial_seed = sampler.derive_seed(seed, trial)
        field = sampler.bernoulli_field(shape, p, trial_seed)
        report = seam_events_d3(m, field)
        row = AuditTrial(
            trial=trial,
            seed=trial_seed,
            all_cubes_good=report.all_cubes_good,
            seam=report.seam,
            whole_good=report.whole_good,
        )
        rows.append(row)
        if row.counterexample and len(hits) < keep_samples:
            hits.append(field)
    count = sum(1 for row in rows if row.counterexample)
    return AuditResult(m, p, tuple(rows), count, tuple(hits))
