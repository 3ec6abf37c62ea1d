"""Zone plans: lengthwise strips of vertices and their boundary candidates.

A plan is an ordered list of zones. Zone ``k`` owns a set of vertices and
names a pool of *boundary candidates* drawn from zone ``k + 1``: the
vertices that may receive tour edges crossing the boundary between the two
zones. ``allowed_crossings`` lists the permitted crossing-edge counts ``n``
(always even for a cycle).

Config format (line oriented, ``#`` starts a comment)::

    zone 1: 4 35 45
    boundary 1: 26 10 24
    crossings 1: 2
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations

from .tsplib import Instance

__all__ = [
    "PlanError",
    "ZoneSpec",
    "ZonePlan",
    "BoundaryChoice",
    "load_zone_plan",
    "format_zone_plan",
    "auto_zone",
    "widen_plan",
    "rotate_instance",
    "enumerate_boundary_choices",
    "perfect_matchings",
]


class PlanError(ValueError):
    """Zone plan is malformed or inconsistent with its instance."""


@dataclass(frozen=True)
class ZoneSpec:
    index: int
    own_vertices: frozenset[int]
    boundary_candidates: tuple[int, ...] = ()
    allowed_crossings: frozenset[int] = frozenset({2})

    def __post_init__(self):
        if not self.own_vertices:
            raise PlanError(f"zone {self.index} has no vertices")
        if len(set(self.boundary_candidates)) != len(self.boundary_candidates):
            raise PlanError(f"zone {self.index}: repeated boundary candidate")
        for n in self.allowed_crossings:
            if n <= 0 or n % 2:
                raise PlanError(f"zone {self.index}: crossing count {n} must be even and positive")

    @property
    def loop_boundary(self) -> bool:
        """True when the pool is one vertex that takes both crossing edges.

        Only legal into a single-vertex final zone (the last vertex closes
        the cycle, e.g. vertex 17 of att48).
        """
        return len(self.boundary_candidates) == 1 and 2 in self.allowed_crossings


@dataclass(frozen=True)
class ZonePlan:
    zones: tuple[ZoneSpec, ...]

    def __len__(self):
        return len(self.zones)

    def __iter__(self):
        return iter(self.zones)

    def __getitem__(self, k):
        return self.zones[k]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*(z.own_vertices for z in self.zones))

    def validate(self, inst: Instance) -> "ZonePlan":
        seen: set[int] = set()
        for z in self.zones:
            for v in z.own_vertices:
                if not 1 <= v <= inst.dimension:
                    raise PlanError(f"zone {z.index}: vertex {v} not in instance 1..{inst.dimension}")
            overlap = seen & z.own_vertices
            if overlap:
                raise PlanError(f"zone {z.index}: vertex {min(overlap)} already in an earlier zone")
            seen |= z.own_vertices
        missing = set(inst.vertices) - seen
        if missing:
            raise PlanError(f"vertex {min(missing)} is not assigned to any zone")
        for k, z in enumerate(self.zones):
            if [s.index for s in self.zones][k] != k + 1:
                raise PlanError("zones must be numbered 1..L consecutively")
            last = k == len(self.zones) - 1
            if last:
                if z.boundary_candidates:
                    raise PlanError(f"last zone {z.index} must not have boundary candidates")
                continue
            nxt = self.zones[k + 1]
            stray = [v for v in z.boundary_candidates if v not in nxt.own_vertices]
            if stray:
                raise PlanError(
                    f"boundary candidate {stray[0]} of zone {z.index} is not in zone {nxt.index}")
            if not z.boundary_candidates:
                raise PlanError(f"zone {z.index} has an empty boundary pool")
            b = len(z.boundary_candidates)
            for n in z.allowed_crossings:
                if n > b and not (z.loop_boundary and n == 2):
                    raise PlanError(f"zone {z.index}: crossing count {n} exceeds pool size {b}")
            if z.loop_boundary and not (k + 1 == len(self.zones) - 1 and len(nxt.own_vertices) == 1):
                raise PlanError(
                    f"zone {z.index}: a one-vertex pool is only allowed into a one-vertex last zone")
        return self


@dataclass(frozen=True)
class BoundaryChoice:
    """Chosen boundary vertices and their grouping into open-path endpoint pairs.

    ``chosen`` keeps pool order; each pair is ordered by pool position and
    pairs are sorted by their first member. A loop choice is the single
    pair ``(v, v)``.
    """

    chosen: tuple[int, ...]
    matching: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return 2 * len(self.matching)

    def __str__(self):
        return " ".join(f"{a}-{b}" for a, b in self.matching)


def perfect_matchings(items):
    """All perfect matchings of an even-length sequence, in canonical order.

    The first item is paired with each later item in turn and the rest is
    matched recursively, so for ``(a, b, c, d)`` the order is ``ab|cd``,
    ``ac|bd``, ``ad|bc``.
    """
    items = tuple(items)
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for m in perfect_matchings(remaining):
            yield ((head, partner),) + m


def enumerate_boundary_choices(spec: ZoneSpec) -> list[BoundaryChoice]:
    """Every (vertex subset, matching) for the zone's allowed crossing counts.

    Subsets are drawn in pool order, so a pool ``(26, 10, 24)`` with ``n = 2``
    gives ``26-10``, ``26-24``, ``10-24``.
    """
    pool = spec.boundary_candidates
    if spec.loop_boundary:
        v = pool[0]
        return [BoundaryChoice((v,), ((v, v),))]
    out = []
    for n in sorted(spec.allowed_crossings):
        if n > len(pool):
            continue
        for subset in combinations(pool, n):
            for m in perfect_matchings(subset):
                out.append(BoundaryChoice(subset, m))
    return out


_LINE_RE = re.compile(r"^\s*(zone|boundary|crossings)\s+(\d+)\s*:\s*(.*)$", re.IGNORECASE)


def load_zone_plan(text: str, inst: Instance) -> ZonePlan:
    own: dict[int, list[int]] = {}
    pools: dict[int, list[int]] = {}
    cross: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise PlanError(f"line {lineno}: cannot parse {raw.strip()!r}")
        kind, k, body = m.group(1).lower(), int(m.group(2)), m.group(3)
        body = body.strip()
        try:
            ids = [int(t) for t in re.split(r"[,\s]+", body) if t] if body not in ("", "-") else []
        except ValueError:
            raise PlanError(f"line {lineno}: non-integer entry in {body!r}") from None
        table = {"zone": own, "boundary": pools, "crossings": cross}[kind]
        if k in table:
            raise PlanError(f"line {lineno}: duplicate '{kind} {k}' entry")
        if kind == "crossings":
            odd = [n for n in ids if n <= 0 or n % 2]
            if odd:
                raise PlanError(f"line {lineno}: crossing count {odd[0]} must be even and positive")
        table[k] = ids
    if not own:
        raise PlanError("no zones defined")
    count = max(own)
    if sorted(own) != list(range(1, count + 1)):
        raise PlanError("zones must be numbered 1..L consecutively")
    for k in list(pools) + list(cross):
        if k not in own:
            raise PlanError(f"boundary/crossings entry for undefined zone {k}")
    zones = []
    for k in range(1, count + 1):
        if len(set(own[k])) != len(own[k]):
            raise PlanError(f"zone {k}: vertex listed twice")
        zones.append(ZoneSpec(
            index=k,
            own_vertices=frozenset(own[k]),
            boundary_candidates=tuple(pools.get(k, ())),
            allowed_crossings=frozenset(cross.get(k, [2])) if k < count else frozenset(),
        ))
    return ZonePlan(tuple(zones)).validate(inst)


def format_zone_plan(plan: ZonePlan) -> str:
    lines = []
    for z in plan:
        lines.append(f"zone {z.index}: " + " ".join(map(str, sorted(z.own_vertices))))
        if z.boundary_candidates:
            lines.append(f"boundary {z.index}: " + " ".join(map(str, z.boundary_candidates)))
            lines.append(f"crossings {z.index}: " + " ".join(map(str, sorted(z.allowed_crossings))))
    return "\n".join(lines) + "\n"


def auto_zone(inst: Instance, target_size: int, max_n: int | None = None) -> ZonePlan:
    """Cut the instance into x-sorted strips of about ``target_size`` vertices.

    Strip sizes differ by at most one. Each pool is the whole next strip and
    every even crossing count up to the pool size (and ``max_n``) is allowed.
    """
    n = inst.dimension
    if not 1 <= target_size <= n:
        raise PlanError(f"target_size must be in 1..{n}, got {target_size}")
    order = sorted(inst.vertices, key=lambda v: (*inst.xy(v), v))
    count = math.ceil(n / target_size)
    base, extra = divmod(n, count)
    groups, start = [], 0
    for k in range(count):
        size = base + (1 if k < extra else 0)
        groups.append(order[start:start + size])
        start += size
    zones = []
    for k, g in enumerate(groups):
        if k + 1 < count:
            pool = tuple(sorted(groups[k + 1], key=lambda v: (*inst.xy(v), v)))
            top = len(pool) if max_n is None else min(len(pool), max_n)
            crossings = frozenset(range(2, top + 1, 2))
            if len(pool) == 1 and k + 2 == count:
                crossings = frozenset({2})
        else:
            pool, crossings = (), frozenset()
        zones.append(ZoneSpec(k + 1, frozenset(g), pool, crossings))
    return ZonePlan(tuple(zones)).validate(inst)


def widen_plan(plan: ZonePlan, inst: Instance, max_n: int | None = None) -> ZonePlan:
    """Same zones with every pool widened to the whole next zone.

    Used to measure how much a hand-picked pool saves over full enumeration.
    """
    zones = []
    for k, z in enumerate(plan.zones):
        if k + 1 == len(plan.zones):
            zones.append(z)
            continue
        nxt = plan.zones[k + 1]
        pool = tuple(sorted(nxt.own_vertices, key=lambda v: (*inst.xy(v), v)))
        top = len(pool) if max_n is None else min(len(pool), max_n)
        crossings = frozenset(range(2, top + 1, 2)) if len(pool) > 1 else frozenset({2})
        zones.append(ZoneSpec(z.index, z.own_vertices, pool, crossings))
    return ZonePlan(tuple(zones)).validate(inst)


def rotate_instance(inst: Instance, degrees: float) -> Instance:
    """Copy of ``inst`` rotated about the origin; used only to choose zones."""
    if not degrees:
        return inst
    t = math.radians(degrees)
    c, s = math.cos(t), math.sin(t)
    coords = tuple((x * c - y * s, x * s + y * c) for x, y in inst.coords)
    return Instance(inst.name, inst.metric, coords, inst.comment)
