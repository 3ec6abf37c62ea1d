"""Left-to-right sweep over a zone plan.

After zone ``k`` the state holds, for every boundary choice into zone
``k + 1``, the cheapest set of disjoint paths covering zones ``1..k`` that
end at the chosen boundary vertices. Advancing a zone contracts those paths
to super-edges and re-solves with the next zone's vertices, which filters out
earlier paths that no longer take part in any minimum. The last zone closes
the cycle and the nested super-edges are expanded back into a tour.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .hpsearch import INF, EmbeddedHP, PathEngine, Traversal, expand, format_path
from .tsplib import Instance, path_length, tour_length
from .zoning import BoundaryChoice, ZonePlan, ZoneSpec, enumerate_boundary_choices

__all__ = [
    "InfeasibleError",
    "SweepEntry",
    "SweepState",
    "Tour",
    "initial_state",
    "sweep_step",
    "close_tour",
    "run_sweep",
    "filter_report",
    "FilterReport",
    "format_trace",
    "resolve_workers",
]


class InfeasibleError(RuntimeError):
    """No arrangement of paths satisfies the zone plan."""


@dataclass(eq=False)
class SweepEntry:
    choice: BoundaryChoice | None
    paths: tuple[EmbeddedHP, ...]
    total_length: int
    parent: "SweepEntry | None" = None

    @property
    def layouts(self) -> tuple[tuple, ...]:
        return tuple(p.layout for p in self.paths)

    def vertices(self) -> list[int]:
        out: list[int] = []
        for p in self.paths:
            out.extend(p.sequence)
        return out

    def row(self) -> str:
        return " | ".join(format_path(p.layout) for p in self.paths)

    def split_row(self) -> str:
        """Like :meth:`row`, but a path that joins several super-edges is shown
        as its outer path plus the closing segments between them."""
        out = []
        for p in self.paths:
            outer, loops = split_closing(p.layout)
            out.append(format_path(outer))
            out.extend(" ".join(map(str, seg)) for seg in loops)
        return " | ".join(out)


@dataclass
class SweepState:
    zone_index: int
    covered: frozenset[int]
    entries: dict[BoundaryChoice | None, list[SweepEntry]]
    infeasible: list[BoundaryChoice] = field(default_factory=list)
    evaluated: int = 0

    def all_entries(self) -> list[SweepEntry]:
        return [e for group in self.entries.values() for e in group]

    def __len__(self):
        return sum(len(g) for g in self.entries.values())


@dataclass(frozen=True)
class Tour:
    sequence: tuple[int, ...]
    length: int
    states: tuple[SweepState, ...] = field(default=(), compare=False, repr=False)
    candidate_counts: tuple[int, ...] = field(default=(), compare=False)
    evaluated: int = field(default=0, compare=False)
    elapsed: float = field(default=0.0, compare=False)
    entry: "SweepEntry | None" = field(default=None, compare=False, repr=False)

    def canonical(self) -> tuple[int, ...]:
        return canonical_cycle(self.sequence)


def canonical_cycle(seq: Iterable[int]) -> tuple[int, ...]:
    """Rotate to start at the smallest id; orient so the second id is the smaller neighbour."""
    seq = list(seq)
    if len(seq) < 3:
        return tuple(sorted(seq))
    i = seq.index(min(seq))
    rot = seq[i:] + seq[:i]
    if rot[-1] < rot[1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


def split_closing(layout) -> tuple[list, list[list[int]]]:
    """Separate a contracted path into its outer path and closing segments.

    With super-edges ``[a b]`` and ``[c d]`` joined through free vertices,
    ``x [a b] u v [c d] y`` becomes outer ``x [a d] y`` and the segment
    ``b u v c`` (read from its smaller end), which closes the two earlier
    paths inside this zone.
    """
    marks = [i for i, el in enumerate(layout) if isinstance(el, Traversal)]
    if len(marks) < 2:
        return list(layout), []
    first, last = layout[marks[0]], layout[marks[-1]]
    joined = EmbeddedHP((first.first, last.last), 0)
    outer = list(layout[:marks[0]]) + [Traversal(joined, True)] + list(layout[marks[-1] + 1:])
    loops = []
    for i, j in zip(marks, marks[1:]):
        seg = [layout[i].last, *layout[i + 1:j], layout[j].first]
        loops.append(seg if seg[0] <= seg[-1] else seg[::-1])
    return outer, loops


def initial_state() -> SweepState:
    return SweepState(0, frozenset(), {None: [SweepEntry(None, (), 0)]})


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("ZONETSP_THREADS", "")
        workers = int(env) if env.strip() else 1
    return max(1, workers)


def _items_for(entry: SweepEntry, zone: frozenset[int], zone_index: int) -> list:
    ports: set[int] = set()
    for p in entry.paths:
        for v in p.endpoints:
            if v not in zone:
                raise InfeasibleError(
                    f"path endpoint {v} is not in zone {zone_index}; plan does not match state")
            ports.add(v)
    return sorted(zone - ports) + list(entry.paths)


def _costs_job(args):
    """Worker: optimal totals for every choice against one incoming entry."""
    metric, coords, free, paths, matchings = args
    inst = Instance("job", metric, coords)
    items = list(free) + [EmbeddedHP(seq, ln) for seq, ln in paths]
    engine = PathEngine(inst, items)
    return [engine.solve(m, require_interior=True)[0] for m in matchings]


def _entry_costs(inst, incoming, zone, zone_index, choices, workers):
    items_per = [_items_for(e, zone, zone_index) for e in incoming]
    matchings = [c.matching for c in choices]
    if workers > 1 and len(incoming) > 1:
        jobs = []
        for items in items_per:
            free = [it for it in items if isinstance(it, int)]
            paths = [(it.sequence, it.length) for it in items if not isinstance(it, int)]
            jobs.append((inst.metric, inst.coords, free, paths, matchings))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            costs = list(pool.map(_costs_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
        return costs, items_per, {}
    engines = {}
    costs = []
    for i, items in enumerate(items_per):
        engine = PathEngine(inst, items)
        engines[i] = engine
        costs.append([engine.solve(m, require_interior=True)[0] for m in matchings])
    return costs, items_per, engines


def sweep_step(state: SweepState, spec: ZoneSpec, inst: Instance, keep_ties: bool = False,
               workers: int = 1) -> SweepState:
    """Absorb zone ``spec.index`` and solve for every boundary choice into the next zone."""
    incoming = state.all_entries()
    if not incoming:
        raise InfeasibleError(f"empty incoming state before zone {spec.index}")
    zone = spec.own_vertices
    choices = enumerate_boundary_choices(spec)
    costs, items_per, engines = _entry_costs(inst, incoming, zone, spec.index, choices, workers)
    covered = state.covered | zone
    entries: dict[BoundaryChoice, list[SweepEntry]] = {}
    infeasible = []
    for ci, choice in enumerate(choices):
        best = min((row[ci] for row in costs), default=INF)
        if best == INF:
            infeasible.append(choice)
            continue
        candidates = []
        for ei, row in enumerate(costs):
            if row[ci] != best:
                continue
            engine = engines.get(ei) or PathEngine(inst, items_per[ei])
            engines[ei] = engine
            _, arrangements = engine.solve(choice.matching, require_interior=True,
                                           all_ties=keep_ties)
            for arr in arrangements:
                paths = tuple(EmbeddedHP.from_path(p) for p in arr)
                key = tuple(p.sequence for p in paths)
                candidates.append((key, ei, paths))
        candidates.sort(key=lambda c: (c[0], c[1]))
        kept, seen = [], set()
        for key, ei, paths in candidates:
            if key in seen:
                continue
            seen.add(key)
            kept.append(SweepEntry(choice, paths, int(best), incoming[ei]))
            if not keep_ties:
                break
        entries[choice] = kept
    if not entries:
        raise InfeasibleError(f"zone {spec.index}: no boundary choice admits a feasible arrangement")
    return SweepState(spec.index, covered, entries, infeasible,
                      evaluated=len(incoming) * len(choices))


def close_tour(state: SweepState, last: ZoneSpec, inst: Instance) -> Tour:
    """Join the open paths through the final zone's vertices into one cycle."""
    incoming = state.all_entries()
    if not incoming:
        raise InfeasibleError("empty state before the final zone")
    zone = last.own_vertices
    best = None
    for entry in incoming:
        items = _items_for(entry, zone, last.index)
        engine = PathEngine(inst, items)
        first = engine.item_states[0][0]
        start, end = engine.s_out[first], engine.s_in[first]
        rest = engine.full ^ 1
        if engine.m > 1 and start == end and not isinstance(items[0], int):
            continue
        cost = engine.s_len[first] + engine.cost(start, end, rest)
        if cost == INF:
            continue
        elems = [engine.s_el[first]] + engine.walk(start, end, rest)
        seq = expand(elems)
        if len(seq) > 1 and seq[0] == seq[-1]:
            seq = seq[:-1]
        cand = (cost, canonical_cycle(seq))
        if best is None or cand < best[0]:
            best = (cand, entry)
    if best is None:
        raise InfeasibleError("no entry can be closed into a tour")
    (cost, seq), entry = best
    length = tour_length(inst, seq)
    if length != cost:
        raise AssertionError(f"closure length {cost} disagrees with recomputed {length}")
    return Tour(seq, length, entry=entry)


def check_state(state: SweepState, inst: Instance) -> None:
    """Assert coverage and length bookkeeping for every entry."""
    for entry in state.all_entries():
        chosen = set(entry.choice.chosen) if entry.choice else set()
        verts = entry.vertices()
        loop = entry.choice is not None and entry.choice.matching[0][0] == entry.choice.matching[0][1]
        expected = len(state.covered) + len(chosen) + (1 if loop else 0)
        if sorted(set(verts)) != sorted(state.covered | chosen) or len(verts) != expected:
            raise AssertionError(f"zone {state.zone_index}: entry {entry.row()} has bad coverage")
        if sum(path_length(inst, p.sequence) for p in entry.paths) != entry.total_length:
            raise AssertionError(f"zone {state.zone_index}: entry {entry.row()} length mismatch")
        for p, (a, b) in zip(entry.paths, entry.choice.matching if entry.choice else ()):
            if p.endpoints != (a, b):
                raise AssertionError(f"zone {state.zone_index}: path {p} not oriented {a}->{b}")


def run_sweep(inst: Instance, plan: ZonePlan, keep_ties: bool = False, trace: bool = False,
              workers: int | None = 1, check: bool = False) -> Tour:
    """Solve ``inst`` over ``plan``; keeps every intermediate state when ``trace``."""
    plan.validate(inst)
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    state = initial_state()
    states = []
    counts = []
    evaluated = 0
    for spec in plan.zones[:-1]:
        state = sweep_step(state, spec, inst, keep_ties=keep_ties, workers=workers)
        if check:
            check_state(state, inst)
        counts.append(len(state))
        evaluated += state.evaluated
        if trace:
            states.append(state)
    tour = close_tour(state, plan.zones[-1], inst)
    return Tour(tour.sequence, tour.length, tuple(states), tuple(counts), evaluated,
                time.perf_counter() - t0, tour.entry)


@dataclass
class ZoneFilter:
    zone_index: int
    kept: list[SweepEntry]
    dropped: list[SweepEntry]

    @staticmethod
    def _pairs(entries):
        return sorted({tuple(sorted(p.endpoints)) for e in entries for p in e.paths})

    @property
    def kept_embedded(self) -> list[tuple[int, int]]:
        return self._pairs(self.kept)

    @property
    def dropped_embedded(self) -> list[tuple[int, int]]:
        kept = set(self.kept_embedded)
        return [p for p in self._pairs(self.dropped) if p not in kept]


@dataclass
class FilterReport:
    zones: list[ZoneFilter]

    def __str__(self):
        lines = []
        for z in self.zones:
            kept = ", ".join(f"{a}-{b}" for a, b in z.kept_embedded) or "-"
            gone = ", ".join(f"{a}-{b}" for a, b in z.dropped_embedded) or "-"
            lines.append(f"zone {z.zone_index}: embeds {len(z.kept)} of "
                         f"{len(z.kept) + len(z.dropped)} zone-{z.zone_index - 1} candidates; "
                         f"kept {kept}; filtered {gone}")
        return "\n".join(lines)


def filter_report(states: list[SweepState]) -> FilterReport:
    """Which candidates of each zone are still referenced by the next zone."""
    zones = []
    for prev, cur in zip(states, states[1:]):
        used = {id(e.parent) for e in cur.all_entries()}
        kept = [e for e in prev.all_entries() if id(e) in used]
        dropped = [e for e in prev.all_entries() if id(e) not in used]
        zones.append(ZoneFilter(cur.zone_index, kept, dropped))
    return FilterReport(zones)


def format_trace(states: Iterable[SweepState], style: str = "contracted") -> str:
    """Candidate rows per zone, super-edges bracketed, one candidate per line.

    ``style="split"`` splits closing segments out of joined paths.
    """
    lines = []
    for st in states:
        lines.append(f"zone {st.zone_index}: {len(st)} candidates")
        for entry in st.all_entries():
            row = entry.split_row() if style == "split" else entry.row()
            lines.append(f"  {row}  # {entry.total_length}")
        for choice in st.infeasible:
            lines.append(f"  ! infeasible {choice}")
    return "\n".join(lines) + "\n"
