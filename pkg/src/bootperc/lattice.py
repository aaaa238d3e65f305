"""Lattice geometry and region algebra.

Coordinates are 1-based d-tuples, matching the usual [n]^d convention.
Sites linearize row-major with axis 1 fastest, so bitmaps are portable
across runs. Regions are axis-aligned generalized boxes: each axis is
either a fixed coordinate or a closed interval. Regions never wrap around
the torus; wrapped boxes are expressed by the caller as unions.

A torus with n <= 2 collapses the +1/-1 wraparound edges into a simple
graph (one edge per axis between the two layers, none at n = 1). This
matters because pigeonhole arguments about forward neighbors, and hence
staircase extraction, need n >= 3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Site = tuple[int, ...]


class Boundary(Enum):
    TORUS = "torus"
    OPEN = "open"


@dataclass(frozen=True)
class LatticeShape:
    """A d-dimensional lattice [n]^d with toroidal or open boundary."""

    d: int
    n: int
    boundary: Boundary = Boundary.TORUS

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.n < 1:
            raise ValueError(f"side length must be >= 1, got {self.n}")
        if self.n**self.d > 2**62:
            raise ValueError("vertex count exceeds the site index address space")

    @property
    def volume(self) -> int:
        return self.n**self.d

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    def index_of(self, site: Site) -> int:
        validate_site(site, self)
        return _coords_to_index(site, self.dims)

    def site_at(self, index: int) -> Site:
        if not 0 <= index < self.volume:
            raise ValueError(f"site index {index} out of range")
        return _index_to_coords(index, self.dims)


def validate_site(site: Site, shape: LatticeShape) -> None:
    if len(site) != shape.d:
        raise ValueError(f"site {site} has {len(site)} coordinates, expected {shape.d}")
    for x in site:
        if not 1 <= x <= shape.n:
            raise ValueError(f"site {site} outside [1, {shape.n}]^{shape.d}")


def _coords_to_index(site: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    stride = 1
    for x, m in zip(site, dims):
        idx += (x - 1) * stride
        stride *= m
    return idx


def _index_to_coords(index: int, dims: Sequence[int]) -> Site:
    coords = []
    for m in dims:
        coords.append(index % m + 1)
        index //= m
    return tuple(coords)


# ---------------------------------------------------------------------------
# Regions


@dataclass(frozen=True)
class Region:
    """Generalized box: per axis either a fixed coordinate or an interval.

    Each axis spec is a tuple of length 1 (fixed) or 2 (interval a <= b).
    All-interval regions are subcubes; exactly one fixed axis makes a
    sub-grid; exactly one interval axis makes a line segment.
    """

    axes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for spec in self.axes:
            if len(spec) == 1:
                if spec[0] < 1:
                    raise ValueError(f"fixed coordinate {spec[0]} must be >= 1")
            elif len(spec) == 2:
                a, b = spec
                if not 1 <= a <= b:
                    raise ValueError(f"interval {spec} must satisfy 1 <= a <= b")
            else:
                raise ValueError(f"axis spec {spec} must have length 1 or 2")

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def is_subcube(self) -> bool:
        return all(len(s) == 2 for s in self.axes)

    @property
    def is_line_segment(self) -> bool:
        return sum(len(s) == 2 for s in self.axes) == 1

    def bounds(self) -> tuple[tuple[int, int], ...]:
        """Per-axis (lo, hi), treating fixed coordinates as width-1 intervals."""
        return tuple((s[0], s[-1]) for s in self.axes)

    def side_lengths(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.bounds())

    @property
    def volume(self) -> int:
        v = 1
        for length in self.side_lengths():
            v *= length
        return v

    def contains(self, site: Site) -> bool:
        if len(site) != self.d:
            return False
        return all(lo <= x <= hi for x, (lo, hi) in zip(site, self.bounds()))

    def translate(self, offset: Sequence[int]) -> "Region":
        if len(offset) != self.d:
            raise ValueError("offset dimension mismatch")
        return Region(
            tuple(tuple(c + o for c in spec) for spec, o in zip(self.axes, offset))
        )

    def to_text(self) -> str:
        parts = []
        for spec in self.axes:
            parts.append("(" + ",".join(str(c) for c in spec) + ")")
        return "[" + ",".join(parts) + "]"

    @staticmethod
    def from_text(text: str) -> "Region":
        return parse_region(text)


def cube(d: int, m: int) -> Region:
    """The subcube [m]^d anchored at the origin corner."""
    return Region(((1, m),) * d)


def parse_region(text: str) -> Region:
    """Parse the bracketed region syntax, e.g. "[(1,5),(3),(2,4)]"."""
    import ast

    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise ValueError(f"malformed region text {text!r}") from exc
    if not isinstance(value, list):
        raise ValueError(f"region text must be a bracketed list: {text!r}")
    axes = []
    for spec in value:
        if isinstance(spec, int):
            axes.append((spec,))
        elif isinstance(spec, tuple) and len(spec) == 2 and all(isinstance(c, int) for c in spec):
            axes.append(tuple(spec))
        else:
            raise ValueError(f"bad axis spec {spec!r} in region text {text!r}")
    return Region(tuple(axes))


def parse_site(text: str) -> Site:
    """Parse a site literal, e.g. "(2,1,4)"; "(5)" parses as the 1-d site (5,)."""
    import ast

    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise ValueError(f"malformed site text {text!r}") from exc
    if isinstance(value, int):
        return (value,)
    if isinstance(value, tuple) and all(isinstance(c, int) for c in value):
        return tuple(value)
    raise ValueError(f"bad site text {text!r}")


def format_site(site: Site) -> str:
    return "(" + ",".join(str(c) for c in site) + ")"


# ---------------------------------------------------------------------------
# Site sets


class SiteSet:
    """Dense membership bitmap over a lattice. Immutable after construction."""

    __slots__ = ("shape", "mask")

    def __init__(self, shape: LatticeShape, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (shape.volume,):
            raise ValueError(
                f"mask length {mask.shape} does not match volume {shape.volume}"
            )
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("SiteSet is immutable")

    @staticmethod
    def empty(shape: LatticeShape) -> "SiteSet":
        return SiteSet(shape, np.zeros(shape.volume, dtype=bool))

    @staticmethod
    def full(shape: LatticeShape) -> "SiteSet":
        return SiteSet(shape, np.ones(shape.volume, dtype=bool))

    @staticmethod
    def from_sites(shape: LatticeShape, sites: Iterable[Site]) -> "SiteSet":
        mask = np.zeros(shape.volume, dtype=bool)
        for s in sites:
            mask[shape.index_of(s)] = True
        return SiteSet(shape, mask)

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    def contains(self, site: Site) -> bool:
        return bool(self.mask[self.shape.index_of(site)])

    def sites(self) -> list[Site]:
        return [self.shape.site_at(int(i)) for i in np.flatnonzero(self.mask)]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SiteSet)
            and self.shape == other.shape
            and bool(np.array_equal(self.mask, other.mask))
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.mask.tobytes()))

    def __or__(self, other: "SiteSet") -> "SiteSet":
        self._check_same_shape(other)
        return SiteSet(self.shape, self.mask | other.mask)

    def __and__(self, other: "SiteSet") -> "SiteSet":
        self._check_same_shape(other)
        return SiteSet(self.shape, self.mask & other.mask)

    def __invert__(self) -> "SiteSet":
        return SiteSet(self.shape, ~self.mask)

    def issubset(self, other: "SiteSet") -> bool:
        self._check_same_shape(other)
        return bool(np.all(~self.mask | other.mask))

    def _check_same_shape(self, other: "SiteSet") -> None:
        if self.shape != other.shape:
            raise ValueError("SiteSet shapes differ")

    def __repr__(self) -> str:
        return f"SiteSet(d={self.shape.d}, n={self.shape.n}, count={self.count})"

    def to_text(self) -> str:
        """Serialize as a header line plus hex-encoded little-endian bitmap."""
        header = (
            f"d={self.shape.d} n={self.shape.n} "
            f"boundary={self.shape.boundary.value} order=axis1-fastest-lsb"
        )
        packed = np.packbits(self.mask, bitorder="little")
        return header + "\n" + packed.tobytes().hex()

    @staticmethod
    def from_text(text: str) -> "SiteSet":
        try:
            header, hexline = text.strip().split("\n")
            fields = dict(kv.split("=") for kv in header.split())
            shape = LatticeShape(
                int(fields["d"]), int(fields["n"]), Boundary(fields["boundary"])
            )
            if fields["order"] != "axis1-fastest-lsb":
                raise ValueError(f"unknown bit order {fields['order']!r}")
            raw = np.frombuffer(bytes.fromhex(hexline), dtype=np.uint8)
            mask = np.unpackbits(raw, bitorder="little")[: shape.volume].astype(bool)
        except (KeyError, IndexError) as exc:
            raise ValueError("malformed SiteSet text") from exc
        return SiteSet(shape, mask)


# ---------------------------------------------------------------------------
# Neighbor tables
#
# The table row for site i lists the 2d neighbor indices in axis order
# (+e_1, -e_1, +e_2, -e_2, ...); missing neighbors (open boundary, or
# duplicates collapsed into a simple graph at n <= 2) are -1.


@lru_cache(maxsize=128)
def box_neighbor_table(dims: tuple[int, ...], torus: bool) -> np.ndarray:
    volume = 1
    for m in dims:
        volume *= m
    d = len(dims)
    table = np.full((volume, 2 * d), -1, dtype=np.int64)
    idx = np.arange(volume, dtype=np.int64)
    stride = 1
    for axis, m in enumerate(dims):
        coord = (idx // stride) % m + 1
        if m >= 2:
            plus = np.where(coord < m, idx + stride, -1)
            minus = np.where(coord > 1, idx - stride, -1)
            if torus:
                plus = np.where(coord == m, idx - (m - 1) * stride, plus)
                if m >= 3:
                    minus = np.where(coord == 1, idx + (m - 1) * stride, minus)
                else:
                    # m = 2 wraps +e and -e onto the same vertex; keep one edge
                    minus = np.full_like(idx, -1)
            table[:, 2 * axis] = plus
            table[:, 2 * axis + 1] = minus
        stride *= m
    table.flags.writeable = False
    return table


def shape_neighbor_table(shape: LatticeShape) -> np.ndarray:
    return box_neighbor_table(shape.dims, shape.boundary is Boundary.TORUS)


# ---------------------------------------------------------------------------
# Operations


def neighbors(x: Site, shape: LatticeShape) -> list[Site]:
    """Distinct lattice neighbors of x (wrapped distance 1 on the torus)."""
    validate_site(x, shape)
    table = shape_neighbor_table(shape)
    row = table[shape.index_of(x)]
    return [shape.site_at(int(i)) for i in row if i >= 0]


def enumerate_region(r: Region, shape: LatticeShape) -> list[Site]:
    """All sites of r, in lexicographic coordinate order."""
    return [shape.site_at(int(i)) for i in region_indices(r, shape)]


def region_indices(r: Region, shape: LatticeShape) -> np.ndarray:
    """Flat site indices of a region, in lexicographic coordinate order."""
    if r.d != shape.d:
        raise ValueError(f"region dimension {r.d} does not match shape {shape.d}")
    for lo, hi in r.bounds():
        if not (1 <= lo and hi <= shape.n):
            raise ValueError(f"region {r.to_text()} out of shape bounds [1,{shape.n}]")
    ranges = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in r.bounds()]
    mesh = np.meshgrid(*ranges, indexing="ij")
    idx = np.zeros(mesh[0].shape, dtype=np.int64)
    stride = 1
    for axis in range(shape.d):
        idx += (mesh[axis] - 1) * stride
        stride *= shape.n
    # C-order ravel varies the last coordinate fastest, i.e. tuple lex order
    return idx.ravel(order="C")


def region_mask(r: Region, shape: LatticeShape) -> np.ndarray:
    mask = np.zeros(shape.volume, dtype=bool)
    mask[region_indices(r, shape)] = True
    return mask


def sides(m: int, d: int) -> list[Region]:
    """The 2^(d-1) * d axis-aligned boundary line segments of [m]^d."""
    if m < 2:
        raise ValueError(f"sides require m >= 2, got {m}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    out: list[Region] = []
    seen: set[Region] = set()
    for j in range(d):
        for ends in itertools.product((1, m), repeat=d - 1):
            axes: list[tuple[int, ...]] = []
            it = iter(ends)
            for axis in range(d):
                axes.append((1, m) if axis == j else (next(it),))
            region = Region(tuple(axes))
            if region not in seen:
                seen.add(region)
                out.append(region)
    return out


def sides_of(subcube: Region) -> list[Region]:
    """Sides of an arbitrary cube region (the origin-cube sides, translated)."""
    if not subcube.is_subcube:
        raise ValueError("sides_of requires an all-interval region")
    lengths = set(subcube.side_lengths())
    if len(lengths) != 1:
        raise ValueError("sides_of requires equal side lengths")
    m = lengths.pop()
    offset = [lo - 1 for lo, _ in subcube.bounds()]
    return [s.translate(offset) for s in sides(m, subcube.d)]


def interior(m: int, d: int, shape: LatticeShape | None = None) -> SiteSet:
    """Vertex set of [m]^d minus the union of its sides.

    The result lives on the given shape (defaults to the open [m]^d box).
    """
    if m < 2:
        raise ValueError(f"interior requires m >= 2, got {m}")
    if d < 2:
        raise ValueError(f"interior requires d >= 2, got {d}")
    if shape is None:
        shape = LatticeShape(d, m, Boundary.OPEN)
    mask = region_mask(cube(d, m), shape)
    for side in sides(m, d):
        mask[region_indices(side, shape)] = False
    return SiteSet(shape, mask)


def perm_orbit(r: Region) -> set[Region]:
    """Orbit of a region under coordinate permutations; axis specs move as units."""
    return {
        Region(tuple(r.axes[i] for i in perm))
        for perm in itertools.permutations(range(r.d))
    }


def ball(t: int, center: Site, shape: LatticeShape) -> SiteSet:
    """All sites at l1 distance <= t from center (wrapped distance on the torus)."""
    if t < 0:
        raise ValueError(f"radius must be >= 0, got {t}")
    validate_site(center, shape)
    n, d = shape.n, shape.d
    line = np.arange(1, n + 1)
    total = np.zeros(shape.volume, dtype=np.int64)
    stride = 1
    for axis in range(d):
        delta = np.abs(line - center[axis])
        if shape.boundary is Boundary.TORUS:
            delta = np.minimum(delta, n - delta)
        reps_inner = stride
        reps_outer = shape.volume // (stride * n)
        total += np.tile(np.repeat(delta, reps_inner), reps_outer)
        stride *= n
    return SiteSet(shape, total <= t)


def buffers(D: Region, side: Region) -> list[Region]:
    """The d-1 buffer rectangles of a cube D for one of its sides.

    Each buffer is a [2] x [m-2] x [1] x ... x [1] box hugging the side's
    interval axis: the interval axis is trimmed by one at both ends, and one
    orthogonal fixed axis is widened outward from the cube by one layer.
    """
    if not D.is_subcube:
        raise ValueError("buffers require D to be a subcube")
    lengths = set(D.side_lengths())
    if len(lengths) != 1:
        raise ValueError("buffers require a cube (equal side lengths)")
    m = lengths.pop()
    if m < 3:
        raise ValueError(f"buffers require side length >= 3, got {m}")
    if side not in set(sides_of(D)):
        raise ValueError(f"{side.to_text()} is not a side of {D.to_text()}")
    j = next(i for i, spec in enumerate(side.axes) if len(spec) == 2)
    lo_j, hi_j = side.axes[j]
    out = []
    for k in range(D.d):
        if k == j:
            continue
        axes: list[tuple[int, ...]] = []
        for axis in range(D.d):
            if axis == j:
                axes.append((lo_j + 1, hi_j - 1))
            elif axis == k:
                c = side.axes[axis][0]
                d_lo, _ = D.axes[axis]
                if c == d_lo and c == 1:
                    raise ValueError(
                        "buffer leaves the lattice: the cube touches the "
                        f"boundary on axis {axis + 1} (regions never wrap)"
                    )
                axes.append((c - 1, c) if c == d_lo else (c, c + 1))
            else:
                axes.append(side.axes[axis])
        out.append(Region(tuple(axes)))
    return out


def subcube_partition(m: int, d: int) -> list[Region]:
    """The 2^d disjoint subcubes of side m tiling [2m]^d.

    Canonical order: binary order of the corner vector with axis 1 as the
    least significant bit (corner coordinate m+1 for a set bit, else 1).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    out = []
    for k in range(2**d):
        axes = []
        for axis in range(d):
            a = m + 1 if (k >> axis) & 1 else 1
            axes.append((a, a + m - 1))
        out.append(Region(tuple(axes)))
    return out
