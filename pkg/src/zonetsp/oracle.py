"""Exact reference solvers for small inputs.

These are deliberately naive (permutation enumeration) or classical
(Held-Karp over vertex subsets) and share no search code with
:mod:`zonetsp.hpsearch`, so agreement between the two is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

import numpy as np

from .hpsearch import ContractedGraph, PathResult, Traversal, expand
from .tsplib import Instance, path_length, tour_length

__all__ = ["OracleBudget", "BudgetExceeded", "brute_force_hp", "brute_force_k_hps",
           "held_karp", "brute_force_tour"]


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_elements_bruteforce: int = 9
    max_vertices_heldkarp: int = 18

    def __post_init__(self):
        if self.max_elements_bruteforce < 1 or self.max_vertices_heldkarp < 1:
            raise ValueError("oracle budgets must be positive")
        if self.max_vertices_heldkarp > 20:
            raise ValueError("held-karp budget above 20 vertices is not supported")


DEFAULT_BUDGET = OracleBudget()


def _orientations(elems):
    """Every way to traverse the given elements (super-edges both ways)."""
    choices = []
    for el in elems:
        if isinstance(el, int):
            choices.append([el])
        else:
            a, b = el.endpoints
            opts = [Traversal(el, True)]
            if a != b:
                opts.append(Traversal(el, False))
            choices.append(opts)
    return product(*choices)


def _end_element(graph: ContractedGraph, v: int, at_start: bool):
    e = graph.port_owner(v)
    if e is None:
        return v, None
    fwd = (v == e.endpoints[0]) if at_start else (v == e.endpoints[1])
    return Traversal(e, fwd), e


def _canonical(paths_lo_hi: Sequence[list[int]]):
    return tuple(sorted(tuple(p) for p in paths_lo_hi))


def brute_force_k_hps(graph: ContractedGraph, pairs: Sequence[tuple[int, int]],
                      budget: OracleBudget = DEFAULT_BUDGET) -> tuple[PathResult, ...]:
    """Exhaustive cover of ``graph`` by one path per endpoint pair.

    Every permutation of the interior elements, every split of it into
    consecutive runs (one per pair) and every super-edge orientation is
    scored from the expanded vertex sequences.
    """
    if graph.size > budget.max_elements_bruteforce:
        raise BudgetExceeded(f"{graph.size} elements exceeds brute-force budget "
                             f"{budget.max_elements_bruteforce}")
    ends = [v for p in pairs for v in p]
    if len(set(ends)) != len(ends):
        raise ValueError("endpoints must be distinct")
    heads = []
    consumed: set[int] = set()
    consumed_edges = []
    for j, (a, b) in enumerate(pairs):
        for c, d in pairs[j + 1:]:
            for v in (a, b):
                e = graph.port_owner(v)
                if e is not None and (c in e.endpoints or d in e.endpoints):
                    raise ValueError("a super-edge cannot end two different paths")
    for a, b in pairs:
        lo, hi = min(a, b), max(a, b)
        ea, oa = _end_element(graph, lo, True)
        eb, ob = _end_element(graph, hi, False)
        if oa is not None and oa is ob:
            heads.append(((ea,), None, a > b))
        else:
            heads.append(((ea,), (eb,), a > b))
        for v, o in ((lo, oa), (hi, ob)):
            if o is None:
                consumed.add(v)
            elif all(o is not x for x in consumed_edges):
                consumed_edges.append(o)
    interior = [v for v in sorted(graph.free_vertices) if v not in consumed]
    interior += [e for e in graph.super_edges if all(e is not x for x in consumed_edges)]
    k = len(pairs)
    inst = graph.inst
    best = None
    for perm in permutations(range(len(interior))):
        ordered = [interior[i] for i in perm]
        # k-1 cut points split the permutation into k consecutive runs
        for cuts in _cut_points(len(ordered), k):
            runs = [ordered[cuts[j]:cuts[j + 1]] for j in range(k)]
            if any(h[1] is None and run for h, run in zip(heads, runs)):
                continue
            for oriented in _orientations_runs(runs):
                seqs = []
                for (head, tail, _), run in zip(heads, oriented):
                    elems = list(head) + list(run) + (list(tail) if tail else [])
                    seqs.append(expand(elems))
                total = sum(path_length(inst, s) for s in seqs)
                key = (total, _canonical(seqs))
                if best is None or key < best[0]:
                    best = (key, [list(head) + list(run) + (list(tail) if tail else [])
                                  for (head, tail, _), run in zip(heads, oriented)])
    if best is None:
        raise ValueError("no feasible arrangement")
    out = []
    for (head, tail, flip), elems in zip(heads, best[1]):
        p = PathResult(tuple(elems), path_length(inst, expand(elems)))
        out.append(p.reversed() if flip else p)
    return tuple(out)


def _cut_points(length: int, k: int):
    for inner in product(range(length + 1), repeat=k - 1):
        if all(inner[i] <= inner[i + 1] for i in range(len(inner) - 1)):
            yield (0, *inner, length)


def _orientations_runs(runs):
    flat = [el for run in runs for el in run]
    sizes = [len(r) for r in runs]
    for combo in _orientations(flat):
        out, pos = [], 0
        for s in sizes:
            out.append(combo[pos:pos + s])
            pos += s
        yield out


def brute_force_hp(graph: ContractedGraph, a: int, b: int,
                   budget: OracleBudget = DEFAULT_BUDGET) -> PathResult:
    if a == b:
        raise ValueError("endpoints must differ")
    for v in (a, b):
        if not graph.has(v):
            raise ValueError(f"endpoint {v} is not in the graph")
    return brute_force_k_hps(graph, [(a, b)], budget)[0]


def held_karp(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[list[int], int]:
    """Optimal tour by subset dynamic programming; returns ``(tour, length)``.

    The tour starts at vertex 1; ties resolve to the smallest predecessor.
    """
    n = inst.dimension
    if n > budget.max_vertices_heldkarp:
        raise BudgetExceeded(f"{n} vertices exceeds held-karp budget {budget.max_vertices_heldkarp}")
    if n <= 3:
        tour = list(range(1, n + 1))
        return tour, tour_length(inst, tour)
    D = np.array(inst.matrix, dtype=np.int64)[1:, 1:]
    m = n - 1                     # vertex 1 (index 0) is the fixed start
    big = np.int64(1) << np.int64(60)
    size = 1 << m
    dp = np.full((size, m), big, dtype=np.int64)
    parent = np.full((size, m), -1, dtype=np.int64)
    idx = np.arange(m)
    dp[1 << idx, idx] = D[0, 1:]
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for j in range(m):
        pop += (masks >> j) & 1
    W = D[1:, 1:]                 # W[k, j]: distance between non-start vertices
    for count in range(2, m + 1):
        layer = masks[pop == count]
        for j in range(m):
            sel = layer[((layer >> j) & 1) == 1]
            prev = sel ^ (1 << j)
            cand = dp[prev] + W[:, j][None, :]
            k = np.argmin(cand, axis=1)
            dp[sel, j] = cand[np.arange(len(sel)), k]
            parent[sel, j] = k
    full = size - 1
    closing = dp[full] + D[1:, 0]
    last = int(np.argmin(closing))
    length = int(closing[last])
    order = []
    mask, j = full, last
    while j >= 0:
        order.append(j + 2)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    tour = [1] + order[::-1]
    return tour, length


def brute_force_tour(inst: Instance) -> tuple[list[int], int]:
    """Exhaustive optimal tour for tiny instances (fixes vertex 1 first)."""
    n = inst.dimension
    if n > 10:
        raise BudgetExceeded("brute-force tour is limited to 10 vertices")
    best = None
    for perm in permutations(range(2, n + 1)):
        tour = [1, *perm]
        ln = tour_length(inst, tour)
        if best is None or ln < best[1]:
            best = (tour, ln)
    return best
