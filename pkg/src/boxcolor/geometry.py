"""Axis-aligned integer boxes, arrangements, region probes and axis remaps."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import DomainError, EmptyRegion, InvalidArrangement, OverlappingBoxes

AXES = ("x", "y", "z")


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def overlap(self, other: Interval) -> int:
        """Signed overlap length: positive, zero when touching, negative when apart."""
        return min(self.hi, other.hi) - max(self.lo, other.lo)


@dataclass(frozen=True)
class Box:
    id: str
    extent: tuple[Interval, Interval, Interval]

    @classmethod
    def of(cls, id: str, x, y, z) -> Box:
        return cls(id, (Interval(*x), Interval(*y), Interval(*z)))

    def lo(self, d: int) -> int:
        return self.extent[d].lo

    def hi(self, d: int) -> int:
        return self.extent[d].hi

    def side(self, d: int) -> int:
        return self.extent[d].length

    @property
    def sides(self) -> tuple[int, int, int]:
        return tuple(iv.length for iv in self.extent)

    @property
    def surface(self) -> int:
        x, y, z = self.sides
        return 2 * (x * y + y * z + x * z)

    @property
    def volume(self) -> int:
        x, y, z = self.sides
        return x * y * z

    @property
    def min_side(self) -> int:
        return min(self.sides)


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple[str, ...]
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        head = "; ".join(f"{v.kind}{list(v.ids)}" for v in self.violations[:5])
        more = len(self.violations) - 5
        return head + (f" (+{more} more)" if more > 0 else "")


@dataclass(frozen=True, eq=False)
class Arrangement:
    """An ordered collection of boxes with named regions (sets of box ids).

    ``scale`` is the factor by which plan coordinates were multiplied to make
    them integral; ``floor_axis`` names the vertical axis when the boxes live
    on unit-thick floors (``None`` for free 3-D arrangements).
    """

    boxes: tuple[Box, ...]
    regions: Mapping[str, frozenset[str]] = field(default_factory=dict)
    scale: int = 1
    floor_axis: int | None = 2
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "regions", {k: frozenset(v) for k, v in self.regions.items()})

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def __eq__(self, other):
        if not isinstance(other, Arrangement):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @cached_property
    def by_id(self) -> dict[str, Box]:
        return {b.id: b for b in self.boxes}

    @property
    def ids(self) -> list[str]:
        return [b.id for b in self.boxes]

    def box(self, box_id: str) -> Box:
        return self.by_id[box_id]

    def region(self, name: str) -> frozenset[str]:
        return self.regions[name]

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(lo, hi)`` as ``(n, 3)`` int64 arrays in box order."""
        lo = np.array([[iv.lo for iv in b.extent] for b in self.boxes], dtype=np.int64).reshape(-1, 3)
        hi = np.array([[iv.hi for iv in b.extent] for b in self.boxes], dtype=np.int64).reshape(-1, 3)
        return lo, hi

    def subset(self, ids: Iterable[str]) -> Arrangement:
        keep = set(ids)
        return Arrangement(
            tuple(b for b in self.boxes if b.id in keep),
            {k: v & keep for k, v in self.regions.items() if v & keep},
            self.scale,
            self.floor_axis,
            dict(self.meta),
        )

    def floors(self) -> list[int]:
        """Distinct floor indices (low coordinate on the floor axis) in use."""
        if self.floor_axis is None:
            return []
        return sorted({b.lo(self.floor_axis) for b in self.boxes})

    def to_dict(self) -> dict:
        order = {bid: i for i, bid in enumerate(self.ids)}
        out = {
            "scale": self.scale,
            "floor_axis": self.floor_axis,
            "boxes": [
                {"id": b.id, **{a: [iv.lo, iv.hi] for a, iv in zip(AXES, b.extent)}} for b in self.boxes
            ],
            "regions": {
                name: sorted(members, key=lambda i: order.get(i, len(order)))
                for name, members in self.regions.items()
            },
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> Arrangement:
        boxes = []
        for item in data["boxes"]:
            coords = [item[a] for a in AXES]
            for c in coords:
                if len(c) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in c):
                    raise ValueError(f"box {item.get('id')!r}: coordinates must be integer pairs")
            boxes.append(Box.of(str(item["id"]), *coords))
        return cls(
            tuple(boxes),
            {k: frozenset(map(str, v)) for k, v in data.get("regions", {}).items()},
            int(data.get("scale", 1)),
            data.get("floor_axis", 2),
            dict(data.get("meta", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> Arrangement:
        return cls.from_dict(json.loads(text))

    def content_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


def _interiors_meet(a: Box, b: Box) -> bool:
    return all(ia.overlap(ib) > 0 for ia, ib in zip(a.extent, b.extent))


def contact(a: Box, b: Box) -> bool:
    """True iff ``a`` and ``b`` share a wall of positive area.

    Raises OverlappingBoxes if the interiors intersect.
    """
    if _interiors_meet(a, b):
        raise OverlappingBoxes(f"{a.id} and {b.id} overlap")
    touching = 0
    for ia, ib in zip(a.extent, b.extent):
        ov = ia.overlap(ib)
        if ov < 0:
            return False
        if ov == 0:
            touching += 1
    return touching == 1


def validate(arr: Arrangement) -> ValidationReport:
    violations = []
    seen = {}
    for b in arr.boxes:
        if b.id in seen:
            violations.append(Violation("duplicate_id", (b.id,)))
        seen[b.id] = b
        for a, iv in zip(AXES, b.extent):
            if not (isinstance(iv.lo, (int, np.integer)) and isinstance(iv.hi, (int, np.integer))):
                violations.append(Violation("non_integer", (b.id,), a))
            elif iv.lo >= iv.hi:
                violations.append(Violation("empty_interval", (b.id,), f"{a}=[{iv.lo},{iv.hi}]"))
    if len(arr.boxes) > 1 and not any(v.kind == "non_integer" for v in violations):
        lo, hi = arr.arrays()
        codes = _kernels.contact_codes(lo, hi)
        ii, jj = np.nonzero(np.triu(codes == _kernels.OVERLAP))
        for i, j in zip(ii.tolist(), jj.tolist()):
            violations.append(Violation("overlap", (arr.boxes[i].id, arr.boxes[j].id)))
    for name, members in arr.regions.items():
        for m in sorted(members - seen.keys()):
            violations.append(Violation("unknown_region_member", (m,), name))
    return ValidationReport(tuple(violations))


def require_valid(arr: Arrangement) -> Arrangement:
    report = validate(arr)
    if not report.ok:
        raise InvalidArrangement(report)
    return arr


@dataclass(frozen=True)
class SegmentProbe:
    """A segment along ``axis`` spanning ``range``; ``fixed`` holds the
    coordinates on the two remaining axes, in increasing axis order."""

    axis: int
    range: Interval
    fixed: tuple[int, int]

    def point_axes(self) -> tuple[int, int]:
        return tuple(d for d in range(3) if d != self.axis)


def region_from_probe(arr: Arrangement, probe: SegmentProbe) -> frozenset[str]:
    """Ids of boxes whose closed body meets the probe in positive length."""
    if probe.range.length <= 0:
        raise ValueError("probe range must have positive length")
    hit = set()
    for b in arr.boxes:
        if b.extent[probe.axis].overlap(probe.range) <= 0:
            continue
        if all(b.lo(d) <= c <= b.hi(d) for d, c in zip(probe.point_axes(), probe.fixed)):
            hit.add(b.id)
    if not hit:
        raise EmptyRegion(f"probe {probe} meets no box")
    return frozenset(hit)


@dataclass(frozen=True)
class AxisRemap:
    """Strictly increasing piecewise-linear integer maps, one per source axis,
    followed by an axis permutation: output axis ``d`` receives the mapped
    source axis ``perm[d]``. ``None`` leaves an axis unmapped."""

    maps: tuple[tuple[tuple[int, int], ...] | None, ...] = (None, None, None)
    perm: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"not an axis permutation: {self.perm}")
        for pts in self.maps:
            if pts is None:
                continue
            if len(pts) < 2:
                raise ValueError("an axis map needs at least two breakpoints")
            for (s0, t0), (s1, t1) in zip(pts, pts[1:]):
                if not (s1 > s0 and t1 > t0):
                    raise ValueError(f"breakpoints not strictly increasing: {pts}")

    @classmethod
    def scaling(cls, factor: int, extent: int) -> AxisRemap:
        pts = ((0, 0), (extent, extent * factor))
        return cls((pts, pts, pts))

    def apply(self, axis: int, value: int) -> int:
        pts = self.maps[axis]
        if pts is None:
            return value
        if value < pts[0][0] or value > pts[-1][0]:
            raise DomainError(f"coordinate {value} on axis {axis} outside [{pts[0][0]}, {pts[-1][0]}]")
        for (s0, t0), (s1, t1) in zip(pts, pts[1:]):
            if s0 <= value <= s1:
                num = (value - s0) * (t1 - t0)
                if num % (s1 - s0):
                    raise DomainError(f"coordinate {value} on axis {axis} maps to a non-integer")
                return t0 + num // (s1 - s0)
        raise AssertionError("unreachable")


def remap(arr: Arrangement, m: AxisRemap) -> Arrangement:
    boxes = []
    for b in arr.boxes:
        mapped = [Interval(m.apply(d, b.lo(d)), m.apply(d, b.hi(d))) for d in range(3)]
        boxes.append(Box(b.id, tuple(mapped[m.perm[d]] for d in range(3))))
    floor_axis = arr.floor_axis
    if floor_axis is not None:
        floor_axis = m.perm.index(floor_axis)
    return Arrangement(tuple(boxes), dict(arr.regions), arr.scale, floor_axis, dict(arr.meta))


def translate(arr: Arrangement, offset: tuple[int, int, int], prefix: str = "") -> Arrangement:
    """Shift every box by ``offset`` and optionally prefix ids (regions follow)."""
    boxes = tuple(
        Box(prefix + b.id, tuple(Interval(iv.lo + o, iv.hi + o) for iv, o in zip(b.extent, offset)))
        for b in arr.boxes
    )
    regions = {k: frozenset(prefix + i for i in v) for k, v in arr.regions.items()}
    return Arrangement(boxes, regions, arr.scale, arr.floor_axis, dict(arr.meta))
