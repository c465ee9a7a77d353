"""Combinatorics of cells of the complete d-complex on n vertices.

Vertices are 0-based internally; I/O layers render them 1-based. A cell is a
strictly increasing tuple of vertex ids. The positive orientation of every
cell is its ascending vertex order, fixed once and for all.

Cells of size k are indexed densely by their colexicographic rank, so that
growing n extends the index space without re-ranking existing cells.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import comb

import numpy as np

Cell = tuple[int, ...]


def _check_cell(vertices, n=None):
    vs = tuple(vertices)
    for a, b in zip(vs, vs[1:]):
        if a >= b:
            raise ValueError(f"cell vertices must be strictly increasing, got {vs}")
    if vs and vs[0] < 0:
        raise ValueError(f"negative vertex id in {vs}")
    if n is not None and vs and vs[-1] >= n:
        raise ValueError(f"vertex {vs[-1]} out of range for n={n}")
    return vs


def rank_cell(vertices) -> int:
    """Colex rank of a k-subset: sum of C(v_i, i+1) over 0-based positions."""
    vs = _check_cell(vertices)
    return sum(comb(v, i + 1) for i, v in enumerate(vs))


def unrank_cell(rank: int, k: int, n: int) -> Cell:
    """Inverse of rank_cell for k-subsets of [0, n)."""
    if not 0 <= rank < comb(n, k):
        raise ValueError(f"rank {rank} out of range for C({n},{k})")
    out = []
    r = rank
    for i in range(k, 0, -1):
        # largest v with C(v, i) <= r
        v = i - 1
        while comb(v + 1, i) <= r:
            v += 1
        out.append(v)
        r -= comb(v, i)
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def _comb_table(n: int, kmax: int) -> np.ndarray:
    """C[v, j] = C(v, j) for 0 <= v <= n, 0 <= j <= kmax, as int64."""
    table = np.zeros((n + 1, kmax + 1), dtype=np.int64)
    table[:, 0] = 1
    for v in range(1, n + 1):
        for j in range(1, kmax + 1):
            table[v, j] = table[v - 1, j - 1] + table[v - 1, j]
    return table


def rank_cells_array(cells: np.ndarray, n: int) -> np.ndarray:
    """Vectorized colex ranking of an (m, k) array of ascending subsets."""
    m, k = cells.shape
    table = _comb_table(n, k)
    return table[cells, np.arange(1, k + 1)].sum(axis=1)


def all_cells(k: int, n: int) -> np.ndarray:
    """All k-subsets of [0, n) in colex order, as an (C(n,k), k) array."""
    cells = np.array(list(combinations(range(n), k)), dtype=np.int64)
    if len(cells) == 0:
        return cells.reshape(0, k)
    order = np.argsort(rank_cells_array(cells, n), kind="stable")
    return cells[order]


def boundary_faces(tau) -> list[tuple[Cell, int]]:
    """The d+1 faces of a d-cell, each with the index of the omitted vertex."""
    ts = _check_cell(tau)
    if len(ts) < 2:
        raise ValueError(f"boundary_faces needs a cell of dimension >= 1, got {ts}")
    return [(ts[:i] + ts[i + 1:], i) for i in range(len(ts))]


def pair_sign(tau, i: int, j: int) -> int:
    """Sign relating the ascending-oriented faces of tau omitting i and j.

    +1 when the two faces are neighbors through tau, -1 otherwise; equals
    (-1)**(i+j+1). The induced-orientation derivation is checked against
    pair_sign_bruteforce in the test suite.
    """
    ts = _check_cell(tau)
    d = len(ts) - 1
    if i == j:
        raise ValueError("omitted indices must differ")
    if not (0 <= i <= d and 0 <= j <= d):
        raise ValueError(f"omitted index out of range for dim-{d} cell")
    return -1 if (i + j) % 2 == 0 else 1


def _perm_parity(seq) -> int:
    """+1 for an even permutation of sorted(seq), -1 for odd."""
    seq = list(seq)
    parity = 1
    for i in range(len(seq)):
        m = min(range(i, len(seq)), key=seq.__getitem__)
        if m != i:
            seq[i], seq[m] = seq[m], seq[i]
            parity = -parity
    return parity


def _oriented_boundary(ordering) -> set[tuple[Cell, int]]:
    """Oriented faces of an explicitly ordered cell, normalized to
    (ascending face, sign relative to ascending orientation)."""
    faces = set()
    for i in range(len(ordering)):
        face = ordering[:i] + ordering[i + 1:]
        sign = (-1) ** i * _perm_parity(face)
        faces.add((tuple(sorted(face)), sign))
    return faces


def pair_sign_bruteforce(tau, i: int, j: int) -> int:
    """pair_sign computed straight from the induced-orientation definition.

    Enumerates every ordering of tau, splits them into the two orientation
    classes, and tests whether the ascending face omitting i and the
    reversed ascending face omitting j lie in a common oriented boundary.
    """
    ts = _check_cell(tau)
    d = len(ts) - 1
    if i == j or not (0 <= i <= d and 0 <= j <= d):
        raise ValueError("invalid omitted indices")
    sigma = (ts[:i] + ts[i + 1:], 1)
    sigma_prime_flipped = (ts[:j] + ts[j + 1:], -1)
    neighbor = False
    for ordering in permutations(ts):
        bnd = _oriented_boundary(ordering)
        if sigma in bnd and sigma_prime_flipped in bnd:
            neighbor = True
            break
    return 1 if neighbor else -1


def neighbors(sigma, n: int) -> list[tuple[Cell, Cell, int]]:
    """All (sigma', tau, sign) with sigma ~ +/-sigma' through a candidate
    d-cell tau of the complete complex. Exactly d*(n-d) entries."""
    ss = _check_cell(sigma, n)
    d = len(ss)
    sset = set(ss)
    out = []
    for u in ss:
        for v in range(n):
            if v in sset:
                continue
            tau = tuple(sorted(sset | {v}))
            i = tau.index(u)
            j = tau.index(v)
            sigma_prime = tau[:i] + tau[i + 1:]
            out.append((sigma_prime, tau, pair_sign(tau, i, j)))
    assert len(out) == d * (n - d)
    return out
