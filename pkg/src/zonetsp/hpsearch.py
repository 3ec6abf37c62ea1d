"""Minimum Hamiltonian paths over contracted graphs.

A contracted graph mixes free vertices with *super-edges*: previously solved
paths (``EmbeddedHP``) that must be traversed whole, in either direction.
Searches run a Held-Karp style subset DP over these elements. Ties are
broken by the lexicographically smallest expanded vertex sequence, read from
the smaller endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

from .tsplib import Instance

__all__ = [
    "EmbeddedHP",
    "Traversal",
    "ContractedGraph",
    "PathResult",
    "PathEngine",
    "min_hp",
    "min_two_hps",
    "min_k_hps",
    "expand",
    "format_path",
]

INF = float("inf")


@dataclass(frozen=True, eq=False)
class EmbeddedHP:
    """A solved path contracted to a super-edge between its two endpoints.

    ``sequence`` is the fully expanded vertex sequence (endpoints included);
    ``layout`` keeps the contracted form it was built from, for display.
    """

    sequence: tuple[int, ...]
    length: int
    layout: tuple = field(default=(), repr=False)

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.sequence[0], self.sequence[-1]

    @property
    def is_loop(self) -> bool:
        return self.sequence[0] == self.sequence[-1] and len(self.sequence) > 1

    def vertices(self) -> set[int]:
        return set(self.sequence)

    @classmethod
    def from_path(cls, path: "PathResult") -> "EmbeddedHP":
        return cls(tuple(expand(path)), path.length, path.sequence)

    def __repr__(self):
        a, b = self.endpoints
        return f"EmbeddedHP({a}..{b}, len={self.length}, n={len(self.sequence)})"


class Traversal(NamedTuple):
    """One pass over a super-edge; ``forward`` follows ``hp.sequence`` order."""

    hp: EmbeddedHP
    forward: bool

    @property
    def first(self) -> int:
        return self.hp.sequence[0] if self.forward else self.hp.sequence[-1]

    @property
    def last(self) -> int:
        return self.hp.sequence[-1] if self.forward else self.hp.sequence[0]

    def vertices(self) -> tuple[int, ...]:
        return self.hp.sequence if self.forward else self.hp.sequence[::-1]


Element = Union[int, Traversal]


@dataclass(frozen=True)
class ContractedGraph:
    inst: Instance
    free_vertices: frozenset[int] = frozenset()
    super_edges: tuple[EmbeddedHP, ...] = ()

    def __post_init__(self):
        ports: set[int] = set()
        for e in self.super_edges:
            a, b = e.endpoints
            ends = {a, b}
            if ends & ports or ends & self.free_vertices:
                raise ValueError(f"super-edge {a}..{b} shares an endpoint with another element")
            ports |= ends

    @property
    def size(self) -> int:
        return len(self.free_vertices) + len(self.super_edges)

    def port_owner(self, v: int) -> EmbeddedHP | None:
        for e in self.super_edges:
            if v in e.endpoints:
                return e
        return None

    def has(self, v: int) -> bool:
        return v in self.free_vertices or self.port_owner(v) is not None

    def vertex_set(self) -> set[int]:
        out = set(self.free_vertices)
        for e in self.super_edges:
            out |= e.vertices()
        return out


@dataclass(frozen=True)
class PathResult:
    sequence: tuple[Element, ...]
    length: int

    @property
    def endpoints(self) -> tuple[int, int]:
        return _first(self.sequence[0]), _last(self.sequence[-1])

    def reversed(self) -> "PathResult":
        seq = tuple(e if isinstance(e, int) else Traversal(e.hp, not e.forward)
                    for e in reversed(self.sequence))
        return PathResult(seq, self.length)


def _first(el: Element) -> int:
    return el if isinstance(el, int) else el.first


def _last(el: Element) -> int:
    return el if isinstance(el, int) else el.last


def expand(path: PathResult | Sequence[Element]) -> list[int]:
    """Replace every super-edge traversal by its interior, in traversal order."""
    seq = path.sequence if isinstance(path, PathResult) else path
    out: list[int] = []
    for el in seq:
        if isinstance(el, int):
            out.append(el)
        else:
            out.extend(el.vertices())
    return out


def format_path(path: PathResult | Sequence[Element]) -> str:
    """Row rendering with super-edges bracketed, e.g. ``2 [26 10] 24 42``."""
    seq = path.sequence if isinstance(path, PathResult) else path
    parts = []
    for el in seq:
        if isinstance(el, int):
            parts.append(str(el))
        else:
            parts.append(f"[{el.first} {el.last}]")
    return " ".join(parts)


class _Terminal(NamedTuple):
    vertex: int          # where connections attach
    elems: tuple         # fixed elements at this end (outermost first)
    extra: int           # length of those fixed elements
    item: int            # index of consumed super-edge, or -1


class PathEngine:
    """Subset DP over a fixed list of elements, reusable across endpoint pairs.

    ``items`` are free vertices (ints) and super-edges (``EmbeddedHP``).
    Path endpoints are plain vertices outside the item list, joined to the
    first/last element by ordinary edges. Tables are cached per end vertex.
    """

    def __init__(self, inst: Instance, items: Sequence[int | EmbeddedHP]):
        self.inst = inst
        self.D = inst.matrix
        self.items = list(items)
        self.m = len(self.items)
        s_in, s_out, s_len, s_el, s_item = [], [], [], [], []
        self.item_states: list[list[int]] = []
        for i, it in enumerate(self.items):
            if isinstance(it, int):
                variants = [(it, it, 0, it)]
            else:
                a, b = it.endpoints
                variants = [(a, b, it.length, Traversal(it, True))]
                if a != b:
                    variants.append((b, a, it.length, Traversal(it, False)))
            idx = []
            for vin, vout, ln, el in variants:
                idx.append(len(s_in))
                s_in.append(vin)
                s_out.append(vout)
                s_len.append(ln)
                s_el.append(el)
                s_item.append(i)
            self.item_states.append(idx)
        self.s_in, self.s_out, self.s_len, self.s_el, self.s_item = s_in, s_out, s_len, s_el, s_item
        self.full = (1 << self.m) - 1
        self._states_in: list[list[int]] = [[] for _ in range(1 << self.m)]
        for mask in range(1, 1 << self.m):
            low = (mask & -mask).bit_length() - 1
            self._states_in[mask] = self._states_in[mask & (mask - 1)] + self.item_states[low]
        self._tables: dict[int, list[list[float]]] = {}

    def table(self, end: int) -> list[list[float]]:
        """``T[mask][s]``: cheapest walk entering state ``s`` first, covering ``mask``, then to ``end``."""
        T = self._tables.get(end)
        if T is not None:
            return T
        D, s_in, s_out, s_len = self.D, self.s_in, self.s_out, self.s_len
        S = len(s_in)
        T = [[INF] * S for _ in range(1 << self.m)]
        for mask in range(1, 1 << self.m):
            row = T[mask]
            bits = mask
            while bits:
                low = bits & -bits
                bits ^= low
                i = low.bit_length() - 1
                rest = mask ^ low
                if rest == 0:
                    for s in self.item_states[i]:
                        row[s] = s_len[s] + D[s_out[s]][end]
                else:
                    prow = T[rest]
                    rs = self._states_in[rest]
                    for s in self.item_states[i]:
                        Do = D[s_out[s]]
                        row[s] = s_len[s] + min([Do[s_in[t]] + prow[t] for t in rs])
        self._tables[end] = T
        return T

    def cost(self, start: int, end: int, mask: int) -> float:
        if mask == 0:
            return self.D[start][end]
        T = self.table(end)[mask]
        Ds = self.D[start]
        s_in = self.s_in
        return min([Ds[s_in[s]] + T[s] for s in self._states_in[mask]])

    def walk(self, start: int, end: int, mask: int) -> list[Element]:
        """Lexicographically smallest optimal element order from ``start``."""
        out: list[Element] = []
        if mask == 0:
            return out
        table = self.table(end)
        cur = start
        while mask:
            T = table[mask]
            Dc = self.D[cur]
            s = min(self._states_in[mask], key=lambda t: (Dc[self.s_in[t]] + T[t], self.s_in[t]))
            out.append(self.s_el[s])
            cur = self.s_out[s]
            mask ^= 1 << self.s_item[s]
        return out

    def walks(self, start: int, end: int, mask: int, limit: int = 64) -> list[list[Element]]:
        """All optimal element orders (at most ``limit``), lexicographic order."""
        if mask == 0:
            return [[]]
        table = self.table(end)
        found: list[list[Element]] = []

        def rec(cur, mask, acc):
            if len(found) >= limit:
                return
            if not mask:
                found.append(list(acc))
                return
            T = table[mask]
            Dc = self.D[cur]
            opts = [(Dc[self.s_in[t]] + T[t], self.s_in[t], t) for t in self._states_in[mask]]
            best = min(o[0] for o in opts)
            for val, _, t in sorted(opts):
                if val != best:
                    continue
                acc.append(self.s_el[t])
                rec(self.s_out[t], mask ^ (1 << self.s_item[t]), acc)
                acc.pop()

        rec(start, mask, [])
        return found

    # -- endpoint handling -------------------------------------------------

    def terminal(self, v: int, at_start: bool) -> _Terminal:
        """Resolve a path endpoint: plain vertex, or port of a super-edge item."""
        for i, it in enumerate(self.items):
            if isinstance(it, EmbeddedHP) and v in it.endpoints:
                a, b = it.endpoints
                fwd = (v == a) if at_start else (v == b)
                tr = Traversal(it, fwd)
                inner = tr.last if at_start else tr.first
                return _Terminal(inner, (tr,), it.length, i)
            if it == v:
                raise ValueError(f"endpoint {v} must not be an interior item")
        return _Terminal(v, (v,), 0, -1)

    def pair_cost(self, a: _Terminal, b: _Terminal, mask: int, require_interior: bool) -> float:
        if a.item >= 0 and a.item == b.item:
            return a.extra if mask == 0 else INF
        if mask == 0 and require_interior and a.item < 0 and b.item < 0:
            return INF
        return a.extra + b.extra + self.cost(a.vertex, b.vertex, mask)

    def pair_walk(self, a: _Terminal, b: _Terminal, mask: int) -> tuple[Element, ...]:
        if a.item >= 0 and a.item == b.item:
            return a.elems
        return a.elems + tuple(self.walk(a.vertex, b.vertex, mask)) + b.elems[::-1]

    def solve(self, pairs: Sequence[tuple[int, int]], require_interior: bool = False,
              all_ties: bool = False) -> tuple[float, list[tuple[PathResult, ...]]]:
        """Cover every item with ``len(pairs)`` disjoint paths, one per endpoint pair.

        Returns the optimal total and the canonical optimal arrangement (or
        all tied arrangements when ``all_ties``), each path oriented as its
        pair is given. Infeasible problems return ``(inf, [])``.
        """
        k = len(pairs)
        terms = []
        used = 0
        for a, b in pairs:
            lo, hi = (a, b) if a <= b else (b, a)
            ta, tb = self.terminal(lo, True), self.terminal(hi, False)
            for t in (ta, tb):
                if t.item >= 0:
                    used |= 1 << t.item
            terms.append((ta, tb, a > b))
        owned = [0] * k
        for j, (ta, tb, _) in enumerate(terms):
            for t in (ta, tb):
                if t.item >= 0:
                    owned[j] |= 1 << t.item
        # a super-edge can close only one path
        if sum(bin(o).count("1") for o in owned) != bin(used).count("1"):
            return INF, []
        free = self.full & ~used

        memo: dict[tuple[int, int], float] = {}

        def best(j: int, mask: int) -> float:
            key = (j, mask)
            if key in memo:
                return memo[key]
            ta, tb, _ = terms[j]
            if j == k - 1:
                val = self.pair_cost(ta, tb, mask, require_interior)
            else:
                val = INF
                sub = mask
                while True:
                    c = self.pair_cost(ta, tb, sub, require_interior)
                    if c < INF:
                        c += best(j + 1, mask ^ sub)
                        if c < val:
                            val = c
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
            memo[key] = val
            return val

        total = best(0, free) if k else (0 if free == 0 else INF)
        if total == INF:
            return INF, []

        # enumerate optimal partitions
        parts: list[list[int]] = []

        def collect(j: int, mask: int, acc: list[int]):
            ta, tb, _ = terms[j]
            if j == k - 1:
                parts.append(acc + [mask])
                return
            target = memo[(j, mask)]
            sub = mask
            while True:
                c = self.pair_cost(ta, tb, sub, require_interior)
                if c < INF and c + best(j + 1, mask ^ sub) == target:
                    collect(j + 1, mask ^ sub, acc + [sub])
                if sub == 0:
                    break
                sub = (sub - 1) & mask

        if k:
            collect(0, free, [])
        else:
            parts.append([])

        results = []
        for part in parts:
            option_lists = []
            for (ta, tb, flip), sub in zip(terms, part):
                if all_ties and not (ta.item >= 0 and ta.item == tb.item):
                    walks = [ta.elems + tuple(w) + tb.elems[::-1]
                             for w in self.walks(ta.vertex, tb.vertex, sub)]
                else:
                    walks = [self.pair_walk(ta, tb, sub)]
                paths = []
                for w in walks:
                    p = PathResult(w, int(self.pair_cost(ta, tb, sub, require_interior)))
                    paths.append((tuple(expand(p)), p.reversed() if flip else p))
                option_lists.append(paths)
            combos = [[]]
            for opts in option_lists:
                combos = [c + [o] for c in combos for o in opts]
            for c in combos:
                canon = tuple(sorted((seq for seq, _ in c)))
                results.append((canon, tuple(p for _, p in c)))
        results.sort(key=lambda r: r[0])
        if not all_ties:
            results = results[:1]
        return total, [r[1] for r in results]


def _graph_items(graph: ContractedGraph) -> list[int | EmbeddedHP]:
    return sorted(graph.free_vertices) + list(graph.super_edges)


def _check_endpoints(graph: ContractedGraph, ends: Sequence[int]) -> None:
    if graph.size == 0:
        raise ValueError("graph is empty")
    if len(set(ends)) != len(ends):
        raise ValueError(f"endpoints must be distinct, got {tuple(ends)}")
    for v in ends:
        if not graph.has(v):
            raise ValueError(f"endpoint {v} is not in the graph")


def min_k_hps(graph: ContractedGraph, pairs: Sequence[tuple[int, int]],
              all_ties: bool = False) -> list[tuple[PathResult, ...]]:
    """Minimum total-length cover of ``graph`` by disjoint paths, one per pair."""
    ends = [v for p in pairs for v in p]
    _check_endpoints(graph, ends)
    items = [it for it in _graph_items(graph) if not (isinstance(it, int) and it in ends)]
    engine = PathEngine(graph.inst, items)
    total, arrangements = engine.solve(pairs, all_ties=all_ties)
    if total == INF:
        raise ValueError(f"no feasible arrangement for endpoint pairs {list(pairs)}")
    return arrangements


def min_hp(graph: ContractedGraph, a: int, b: int) -> PathResult:
    """Shortest Hamiltonian path from ``a`` to ``b`` over all free vertices and super-edges."""
    return min_k_hps(graph, [(a, b)])[0][0]


def min_two_hps(graph: ContractedGraph,
                pairs: Sequence[tuple[int, int]]) -> tuple[PathResult, PathResult]:
    """Two vertex-disjoint paths jointly covering ``graph`` with least total length."""
    if len(pairs) != 2:
        raise ValueError("min_two_hps needs exactly two endpoint pairs")
    first, second = min_k_hps(graph, pairs)[0]
    return first, second
