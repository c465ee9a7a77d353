"""Words, word graphs, trace expansions and the tree/leaf reductions.

A letter is an unoriented (d-1)-cell stored as a sorted tuple of vertex
labels; orientation signs never enter the word combinatorics, they live in
the matrix entries. Canonical representatives relabel vertices 1,2,3,... in
order of first appearance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, perm

import numpy as np

from .distributions import DistributionSpec, bernoulli, rademacher, uniform
from .errors import ResourceCapError
from .models import complex_structure

Letter = tuple[int, ...]

MAX_WORD_LENGTH = 9
DEFAULT_WALK_BUDGET = 10**7


# ---------------------------------------------------------------------------
# words


def check_word(letters, d: int) -> tuple[Letter, ...]:
    w = tuple(tuple(sorted(l)) for l in letters)
    if not w:
        raise ValueError("a word has at least one letter")
    for l in w:
        if len(l) != d or len(set(l)) != d:
            raise ValueError(f"letter {l} is not a (d-1)-cell for d={d}")
    for a, b in zip(w, w[1:]):
        if len(set(a) | set(b)) != d + 1:
            raise ValueError(f"consecutive letters {a}, {b} do not span a d-cell")
    return w


def is_closed(word) -> bool:
    return word[0] == word[-1]


def supports(letters, d: int):
    """(supp0, suppd): the vertex support and the set of crossed d-cells."""
    w = check_word(letters, d)
    supp0 = set()
    for l in w:
        supp0.update(l)
    suppd = {tuple(sorted(set(a) | set(b))) for a, b in zip(w, w[1:])}
    return supp0, suppd


def crossing_numbers(letters, d: int) -> dict:
    """Number of word steps crossing each d-cell."""
    w = check_word(letters, d)
    counts: dict = {}
    for a, b in zip(w, w[1:]):
        tau = tuple(sorted(set(a) | set(b)))
        counts[tau] = counts.get(tau, 0) + 1
    return counts


def canonicalize(letters, d: int) -> tuple[Letter, ...]:
    """Relabel vertices 1,2,3,... by first appearance, scanning letters left
    to right and each letter in ascending order."""
    w = check_word(letters, d)
    relabel: dict = {}
    for l in w:
        for v in l:
            if v not in relabel:
                relabel[v] = len(relabel) + 1
    return tuple(tuple(sorted(relabel[v] for v in l)) for l in w)


def apply_injection(letters, mapping: dict) -> tuple[Letter, ...]:
    return tuple(tuple(sorted(mapping[v] for v in l)) for l in letters)


def enumerate_closed_words(d: int, k: int, min_mult: int = 2) -> list:
    """All canonical closed words of length 2k+1 whose every crossed d-cell
    is crossed at least min_mult times."""
    length = 2 * k + 1
    if length > MAX_WORD_LENGTH:
        raise ResourceCapError(
            f"word length {length} exceeds enumeration cap {MAX_WORD_LENGTH}")
    first: Letter = tuple(range(1, d + 1))
    out = []

    def steps_left_ok(counts, remaining):
        singles = sum(1 for c in counts.values() if c < min_mult)
        return singles <= remaining * (min_mult - 1) if min_mult > 1 else True

    def extend(word, used_max, counts):
        remaining = length - len(word)
        if remaining == 0:
            if word[-1] == first and all(c >= min_mult for c in counts.values()):
                out.append(tuple(word))
            return
        if not steps_left_ok(counts, remaining):
            return
        sigma = word[-1]
        sset = set(sigma)
        candidates = [v for v in range(1, used_max + 1) if v not in sset]
        candidates.append(used_max + 1)
        for u in sigma:
            for v in candidates:
                nxt = tuple(sorted((sset - {u}) | {v}))
                tau = tuple(sorted(sset | {v}))
                counts[tau] = counts.get(tau, 0) + 1
                word.append(nxt)
                extend(word, max(used_max, v), counts)
                word.pop()
                counts[tau] -= 1
                if counts[tau] == 0:
                    del counts[tau]

    extend([first], d, {})
    return sorted(out)


def count_embeddings(letters, d: int, n: int):
    """(exact, lower, upper) counts of distinct words over [1..n] equivalent
    to the given word. Exact mode enumerates injections of the support."""
    w = canonicalize(letters, d)
    supp0 = sorted({v for l in w for v in l})
    s = len(supp0)
    if n < s:
        raise ValueError(f"need n >= |supp0| = {s}")
    images = set()
    for img in permutations(range(1, n + 1), s):
        mapping = dict(zip(supp0, img))
        images.add(apply_injection(w, mapping))
    lower = perm(n - d + 1, s - d + 1)  # (n-d+1)!/(n-s)!
    upper = perm(n, s)  # n!/(n-s)!
    return len(images), lower, upper


# ---------------------------------------------------------------------------
# word graphs


@dataclass
class WordGraph:
    """Labeled graph induced by a word, with positive integer edge weights."""

    edges: dict  # frozenset({letter, letter}) -> weight
    vertices: set = field(default_factory=set)

    def __post_init__(self):
        for e, wgt in self.edges.items():
            a, b = tuple(e)
            if wgt < 1:
                raise ValueError("edge weights must be positive")
            if len(set(a) | set(b)) != len(a) + 1:
                raise ValueError(f"edge {e} does not span a d-cell")
            self.vertices.update(e)

    @staticmethod
    def from_word(letters, d: int) -> "WordGraph":
        w = check_word(letters, d)
        edges: dict = {}
        for a, b in zip(w, w[1:]):
            e = frozenset((a, b))
            edges[e] = edges.get(e, 0) + 1
        g = WordGraph(edges=edges)
        g.vertices.update(w)  # single-letter words have a vertex, no edges
        return g

    def support0(self) -> set:
        return {v for l in self.vertices for v in l}

    def cell_of(self, edge) -> tuple:
        a, b = tuple(edge)
        return tuple(sorted(set(a) | set(b)))

    def cell_weights(self) -> dict:
        agg: dict = {}
        for e, wgt in self.edges.items():
            tau = self.cell_of(e)
            agg[tau] = agg.get(tau, 0) + wgt
        return agg

    def total_weight(self) -> int:
        return sum(self.edges.values())

    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = set()
        stack = [next(iter(sorted(self.vertices)))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v] - seen)
        return seen == self.vertices

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def find_cycle(self):
        """Edges of some cycle, or None. Deterministic DFS order."""
        adj = {v: sorted(nb) for v, nb in self.adjacency().items()}
        seen: dict = {}
        for root in sorted(self.vertices):
            if root in seen:
                continue
            stack = [(root, None)]
            parent = {root: None}
            while stack:
                v, par = stack.pop()
                if v in seen:
                    continue
                seen[v] = True
                parent[v] = par
                for u in adj[v]:
                    if u == par:
                        continue
                    if u in parent and u in seen:
                        # back edge: cycle u ... v, u
                        path = [v]
                        x = v
                        while x != u:
                            x = parent[x]
                            path.append(x)
                        cyc = [frozenset((path[i], path[i + 1]))
                               for i in range(len(path) - 1)]
                        cyc.append(frozenset((v, u)))
                        return cyc
                    if u not in seen:
                        stack.append((u, v))
        return None


def evaluate_G(graph: WordGraph, n: int, spec: DistributionSpec) -> float:
    """|S0|! * C(n,|S0|) * product over crossed d-cells of the absolute
    central moment of order equal to the aggregated cell weight."""
    s0 = len(graph.support0())
    if n < s0:
        raise ValueError(f"need n >= |S0| = {s0}")
    value = factorial(s0) * comb(n, s0)
    for wgt in graph.cell_weights().values():
        value *= spec.abs_central_moment(wgt)
    return value


# ---------------------------------------------------------------------------
# trace expansions


@lru_cache(maxsize=16)
def _neighbor_lists(d: int, n: int):
    """For every (d-1)-cell rank: arrays of (neighbor rank, d-cell rank,
    sign) over the complete complex."""
    rows, cols, signs, tau_idx = complex_structure(d, n)
    size = comb(n, d)
    buckets: list = [[] for _ in range(size)]
    for r, c, s, t in zip(rows, cols, signs, tau_idx):
        buckets[r].append((c, t, s))
        buckets[c].append((r, t, s))
    return [tuple(b) for b in buckets]


def _num_closed_walks(d: int, n: int, k: int) -> int:
    return comb(n, d) * (d * (n - d)) ** (2 * k - 1)


def trace_walk_sum(d: int, n: int, spec: DistributionSpec | None, k: int,
                   realized=None, budget: int = DEFAULT_WALK_BUDGET) -> float:
    """Closed-walk expansion of Trace(H^{2k}).

    With a realized matrix: the exact sum of entry products over its closed
    walks of length 2k. Without: the exact expectation, using independence
    across d-cells and the signed central moments of the entry law.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if _num_closed_walks(d, n, k) > budget:
        raise ResourceCapError(
            f"{_num_closed_walks(d, n, k)} closed walks exceed budget {budget}")
    if realized is not None:
        return _walk_sum_realized(realized, k)
    if spec is None:
        raise ValueError("expectation mode needs a distribution spec")
    return _walk_sum_expectation(d, n, spec, k)


def _walk_sum_realized(mat, k: int) -> float:
    import scipy.sparse as sp

    csr = sp.csr_matrix(mat)
    size = csr.shape[0]
    indptr, indices, data = csr.indptr, csr.indices, csr.data
    steps = 2 * k
    total = 0.0

    def dfs(pos, depth, prod, start):
        nonlocal total
        if depth == steps:
            if pos == start:
                total += prod
            return
        for idx in range(indptr[pos], indptr[pos + 1]):
            dfs(indices[idx], depth + 1, prod * data[idx], start)

    for start in range(size):
        dfs(start, 0, 1.0, start)
    return total


def _walk_sum_expectation(d: int, n: int, spec: DistributionSpec, k: int) -> float:
    nbrs = _neighbor_lists(d, n)
    steps = 2 * k
    moments = [spec.central_moment(m) for m in range(steps + 1)]
    norm = (n * spec.variance) ** k
    total = 0.0
    counts: dict = {}

    def dfs(pos, depth, sign, start):
        nonlocal total
        remaining = steps - depth
        singles = sum(1 for c in counts.values() if c == 1)
        if singles > remaining:
            return
        if depth == steps:
            if pos == start:
                contrib = float(sign)
                for c in counts.values():
                    contrib *= moments[c]
                total += contrib
            return
        for nxt, tau, s in nbrs[pos]:
            counts[tau] = counts.get(tau, 0) + 1
            dfs(nxt, depth + 1, sign * s, start)
            counts[tau] -= 1
            if counts[tau] == 0:
                del counts[tau]

    for start in range(comb(n, d)):
        dfs(start, 0, 1, start)
    return total / norm


def trace_exhaustive(d: int, n: int, p: float, k: int,
                     max_cells: int = 14) -> float:
    """Exact E[Trace(calA^{2k})] by enumerating every complex, weighting by
    its Bernoulli probability and running a dense linear-algebra trace.

    Independent of the walk expansion: no word enumeration is involved.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("calA needs p in (0,1)")
    m = comb(n, d + 1)
    if m > max_cells:
        raise ResourceCapError(f"C({n},{d + 1}) = {m} exceeds cap {max_cells}")
    rows, cols, signs, tau_idx = complex_structure(d, n)
    size = comb(n, d)
    q = p * (1.0 - p)
    scale = 1.0 / np.sqrt(n * q)
    total = 0.0
    for mask in range(2**m):
        present = np.array([(mask >> t) & 1 for t in range(m)], dtype=np.float64)
        weight = p ** present.sum() * (1.0 - p) ** (m - present.sum())
        dense = np.zeros((size, size))
        vals = (present[tau_idx] - p) * signs * scale
        dense[rows, cols] = vals
        dense[cols, rows] = vals
        total += weight * np.trace(np.linalg.matrix_power(dense, 2 * k))
    return float(total)


# ---------------------------------------------------------------------------
# reductions


DEFAULT_CHECK_SPECS = (bernoulli(0.3), rademacher(), uniform(0.0, 1.0))


@dataclass
class ReductionCertificate:
    kind: str  # "tree" or "leaf"
    case_tags: list
    properties: dict
    output_graph: WordGraph | None = None
    harvested: dict | None = None  # d-cell -> M weight (leaf pruning)

    @property
    def ok(self) -> bool:
        return all(self.properties.values())


def tree_reduce(graph: WordGraph, n: int | None = None,
                check_specs=DEFAULT_CHECK_SPECS) -> ReductionCertificate:
    """Remove cycles one edge at a time, always moving the dropped weight
    onto a surviving edge, until a tree remains.

    Weight moves stay within a d-cell whenever any d-cell is crossed by two
    or more surviving edges of the graph with one on the cycle; only when
    every cycle-crossed cell is crossed exactly once does the weight jump to
    an adjacent cell.
    """
    if not graph.is_connected():
        raise ValueError("tree reduction needs a connected graph")
    edges = dict(graph.edges)
    tags = []
    current = WordGraph(edges=dict(edges), vertices=set(graph.vertices))
    while True:
        cycle = current.find_cycle()
        if cycle is None:
            break
        cell_edges: dict = {}
        for e in current.edges:
            cell_edges.setdefault(current.cell_of(e), []).append(e)
        cycle_cells = {current.cell_of(e) for e in cycle}
        moved = False
        for e in sorted(cycle, key=lambda e: sorted(tuple(e))):
            tau = current.cell_of(e)
            others = [e2 for e2 in cell_edges[tau] if e2 != e]
            if others:
                # weight stays inside tau
                partner = min(others, key=lambda e2: sorted(tuple(e2)))
                if len(cycle_cells) == 1:
                    tags.append("1.1")
                else:
                    tags.append("1.2.1")
                current.edges[partner] += current.edges.pop(e)
                moved = True
                break
        if not moved:
            # every crossed cell is crossed exactly once: move weight to the
            # cell of an adjacent cycle edge
            ordered = sorted(cycle, key=lambda e: sorted(tuple(e)))
            e_drop = None
            for e in ordered:
                tau = current.cell_of(e)
                for e2 in cycle:
                    if e2 != e and (tuple(e) and set(e) & set(e2)) \
                            and current.cell_of(e2) != tau:
                        e_drop, e_keep = e, e2
                        break
                if e_drop is not None:
                    break
            assert e_drop is not None, "cycle with a single cell handled above"
            tags.append("1.2.2")
            current.edges[e_keep] += current.edges.pop(e_drop)
        current = WordGraph(edges=current.edges, vertices=set(graph.vertices))

    props = {
        "tree": current.is_tree(),
        "cells_subset": set(current.cell_weights()) <= set(graph.cell_weights()),
        "support_preserved": current.support0() == graph.support0(),
        "weights_monotone": all(
            current.cell_weights()[tau] >= graph.cell_weights()[tau]
            for tau in current.cell_weights()
        ),
        "weight_conserved": current.total_weight() == graph.total_weight(),
    }
    n_eval = n if n is not None else len(graph.support0()) + 2
    props["G_monotone"] = all(
        evaluate_G(graph, n_eval, spec) <= evaluate_G(current, n_eval, spec)
        * (1 + 1e-12)
        for spec in check_specs
    )
    return ReductionCertificate(kind="tree", case_tags=tags, properties=props,
                                output_graph=current)


def leaf_prune(tree: WordGraph, k: int, n: int | None = None,
               check_specs=DEFAULT_CHECK_SPECS) -> ReductionCertificate:
    """Prune leaves of a weighted tree, harvesting one d-cell per removed
    vertex label, and verify the resulting product bound.

    Total edge weight must equal 2k. Harvested weights use the exponents
    p_tau = 2k / M(tau) in the numeric inequality check.
    """
    if not tree.is_tree():
        raise ValueError("leaf pruning needs a tree")
    if tree.total_weight() != 2 * k:
        raise ValueError(
            f"total weight {tree.total_weight()} != 2k = {2 * k}")
    d = len(next(iter(tree.vertices)))
    orig_cells = tree.cell_weights()
    s0_orig = tree.support0()
    current = WordGraph(edges=dict(tree.edges), vertices=set(tree.vertices))
    harvested: dict = {}
    tags = []
    while len(current.support0()) > d + 1:
        adj = current.adjacency()
        leaf = min((v for v in current.vertices if len(adj[v]) == 1))
        anchor = next(iter(adj[leaf]))
        leaf_edge = frozenset((leaf, anchor))
        tau_l = current.cell_of(leaf_edge)
        (i_l,) = set(tau_l) - set(anchor)
        same_cell = [e for e in current.edges
                     if e != leaf_edge and current.cell_of(e) == tau_l]
        if same_cell:
            # another edge crosses tau_l: merge weight inside the cell
            partner = min(same_cell, key=lambda e: sorted(tuple(e)))
            tags.append("2.2")
            current.edges[partner] += current.edges.pop(leaf_edge)
            current = WordGraph(edges=current.edges,
                                vertices=current.vertices - {leaf})
        elif any(i_l in v for v in current.vertices - {leaf}):
            # i_l survives elsewhere: move the weight onto a colex-least
            # edge at the anchor crossing a different cell
            others = [e for e in current.edges
                      if e != leaf_edge and anchor in e]
            partner = min(others, key=lambda e: sorted(tuple(e)))
            tags.append("2.3")
            current.edges[partner] += current.edges.pop(leaf_edge)
            current = WordGraph(edges=current.edges,
                                vertices=current.vertices - {leaf})
        else:
            # harvest: removing the leaf removes the label i_l for good
            tags.append("2.1")
            harvested[tau_l] = current.edges.pop(leaf_edge)
            current = WordGraph(edges=current.edges,
                                vertices=current.vertices - {leaf})
    # base case: everything left lives inside a single d-cell
    tau0 = tuple(sorted(current.support0()))
    base_weight = current.total_weight()
    if base_weight:
        harvested[tau0] = harvested.get(tau0, 0) + base_weight
    props = {
        "harvest_size": len(harvested) == len(s0_orig) - d,
        "weights_monotone": all(
            harvested[tau] >= orig_cells.get(tau, 0) for tau in harvested
        ),
        "weight_conserved": sum(harvested.values()) == sum(orig_cells.values()),
    }
    n_eval = n if n is not None else len(s0_orig) + 2
    props["product_bound"] = all(
        _leaf_bound_holds(tree, harvested, k, n_eval, spec)
        for spec in check_specs
    )
    return ReductionCertificate(kind="leaf", case_tags=tags, properties=props,
                                harvested=harvested)


def _leaf_bound_holds(tree: WordGraph, harvested: dict, k: int, n: int,
                      spec: DistributionSpec) -> bool:
    d = len(next(iter(tree.vertices)))
    lhs = evaluate_G(tree, n, spec)
    rhs = float(factorial(d))
    for tau, m_tau in harvested.items():
        p_tau = 2 * k / m_tau
        inner = (n - d) * spec.abs_central_moment(m_tau)
        rhs *= (comb(n, d) * inner**p_tau) ** (1.0 / p_tau)
    return lhs <= rhs * (1 + 1e-9)
