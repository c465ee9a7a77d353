"""The X(d,n,p) sampler and the matrix families built on top of it.

All matrices are real symmetric, indexed by the colex rank of the
(d-1)-cells, and returned as scipy CSR. The i.i.d. draw attached to a
candidate d-cell always uses the counter-based stream position equal to the
cell's rank, so matrices do not depend on construction order and the A / H
couplings hold exactly.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
import scipy.sparse as sp

from .cells import all_cells, rank_cells_array
from .distributions import DistributionSpec
from . import cells as _cells

_MAGIC = b"SXSC"
_VERSION = 1


@lru_cache(maxsize=32)
def complex_structure(d: int, n: int):
    """Static incidence data of K(d,n): for every candidate d-cell (row =
    its rank) and every face pair (i,j), i<j, the ranks of the two faces and
    the orientation sign (-1)**(i+j+1).

    Returns (rows, cols, signs, tau_index), flat arrays of equal length
    C(n,d+1)*C(d+1,2).
    """
    taus = all_cells(d + 1, n)
    m = len(taus)
    face_ranks = np.empty((m, d + 1), dtype=np.int64)
    for i in range(d + 1):
        faces = np.delete(taus, i, axis=1)
        face_ranks[:, i] = rank_cells_array(faces, n)
    rows, cols, signs, tau_idx = [], [], [], []
    for i in range(d + 1):
        for j in range(i + 1, d + 1):
            rows.append(face_ranks[:, i])
            cols.append(face_ranks[:, j])
            signs.append(np.full(m, (-1) ** (i + j + 1), dtype=np.int64))
            tau_idx.append(np.arange(m, dtype=np.int64))
    return (
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(signs),
        np.concatenate(tau_idx),
    )


def cell_uniforms(d: int, n: int, seed: int) -> np.ndarray:
    """One uniform(0,1) draw per candidate d-cell of K(d,n); the draw for
    cell rank t sits at stream position t (Philox counter-based)."""
    m = comb(n, d + 1)
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    return gen.random(m)


@dataclass(frozen=True)
class ComplexSample:
    """A realization of X(d,n,p): presence bits over all candidate d-cells."""

    d: int
    n: int
    p: float
    seed: int
    present: np.ndarray  # bool, length C(n, d+1)

    def __post_init__(self):
        if len(self.present) != comb(self.n, self.d + 1):
            raise ValueError("presence bitset has wrong length")

    @property
    def num_cells(self) -> int:
        return int(self.present.sum())


def sample_complex(d: int, n: int, p: float, seed: int) -> ComplexSample:
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    present = cell_uniforms(d, n, seed) < p
    return ComplexSample(d=d, n=n, p=p, seed=seed, present=present)


def save_sample(sample: ComplexSample, path) -> None:
    packed = np.packbits(sample.present)
    header = _MAGIC + struct.pack(
        "<IIIdQQ", _VERSION, sample.d, sample.n, sample.p,
        sample.seed, len(sample.present),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(packed.tobytes())


def load_sample(path) -> ComplexSample:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _MAGIC:
        raise ValueError(f"{path} is not a complex sample file")
    version, d, n, p, seed, nbits = struct.unpack("<IIIdQQ", blob[4:4 + 36])
    if version != _VERSION:
        raise ValueError(f"unsupported sample file version {version}")
    bits = np.unpackbits(np.frombuffer(blob[4 + 36:], dtype=np.uint8))[:nbits]
    return ComplexSample(d=d, n=n, p=p, seed=int(seed), present=bits.astype(bool))


def sample_to_json(sample: ComplexSample) -> str:
    """Human-readable mirror: present d-cells listed 1-based."""
    taus = all_cells(sample.d + 1, sample.n)
    present = [
        [int(v) + 1 for v in taus[t]]
        for t in np.nonzero(sample.present)[0]
    ]
    return json.dumps(
        {
            "d": sample.d,
            "n": sample.n,
            "p": sample.p,
            "seed": sample.seed,
            "num_present": sample.num_cells,
            "present_cells": present,
        },
        sort_keys=True,
    )


def _assemble(d: int, n: int, values: np.ndarray, signed: bool) -> sp.csr_matrix:
    """Symmetric CSR from one value per candidate d-cell."""
    rows, cols, signs, tau_idx = complex_structure(d, n)
    data = values[tau_idx] * (signs if signed else 1.0)
    size = comb(n, d)
    mat = sp.coo_matrix(
        (np.concatenate([data, data]),
         (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(size, size),
    ).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat


def build_A(sample: ComplexSample) -> sp.csr_matrix:
    """Signed adjacency of the sampled complex, entries in {-1, 0, +1}."""
    return _assemble(sample.d, sample.n, sample.present.astype(np.float64), signed=True)


def build_expected_A(d: int, n: int, p: float) -> sp.csr_matrix:
    """E[A] = p times the signed adjacency of the complete complex."""
    m = comb(n, d + 1)
    return _assemble(d, n, np.full(m, float(p)), signed=True)


def build_calA(sample: ComplexSample, p: float) -> sp.csr_matrix:
    """(A - E[A]) / sqrt(n p (1-p)); nonzero on absent candidate cells too."""
    q = p * (1.0 - p)
    if q == 0.0:
        raise ValueError("p in {0,1} gives q=0; centered matrix undefined")
    vals = (sample.present.astype(np.float64) - p) / np.sqrt(sample.n * q)
    return _assemble(sample.d, sample.n, vals, signed=True)


def _draw_values(d: int, n: int, spec: DistributionSpec, seed: int) -> np.ndarray:
    return spec.from_uniforms(cell_uniforms(d, n, seed))


def build_H(d: int, n: int, spec: DistributionSpec, seed: int) -> sp.csr_matrix:
    """Signed matrix with entries +/-(Z_tau - E[Z]) / sqrt(n Var Z), one
    i.i.d. Z per candidate d-cell of the complete complex."""
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    z = _draw_values(d, n, spec, seed)
    vals = (z - spec.mean) / np.sqrt(n * spec.variance)
    return _assemble(d, n, vals, signed=True)


def build_H_unsigned(d: int, n: int, spec: DistributionSpec, seed: int) -> sp.csr_matrix:
    """Unsigned variant of build_H (all orientation signs dropped)."""
    if n < d + 1:
        raise ValueError(f"need n >= d+1, got n={n}, d={d}")
    z = _draw_values(d, n, spec, seed)
    vals = (z - spec.mean) / np.sqrt(n * spec.variance)
    return _assemble(d, n, vals, signed=False)


def build_Y(d: int, r: int, p0: float, seed: int) -> sp.csr_matrix:
    """Unoriented normalized Bernoulli matrix on K(d,r): entry
    (chi_tau - p0)/sqrt(p0(1-p0)) on every candidate face pair, without the
    1/sqrt(r) normalization."""
    if r < d + 1:
        raise ValueError(f"need r >= d+1, got r={r}, d={d}")
    if not 0.0 < p0 < 1.0:
        raise ValueError(f"p0 must be in (0,1), got {p0}")
    q0 = p0 * (1.0 - p0)
    chi = (cell_uniforms(d, r, seed) < p0).astype(np.float64)
    vals = (chi - p0) / np.sqrt(q0)
    return _assemble(d, r, vals, signed=False)


def to_dense(mat: sp.spmatrix, cap: int = 8192) -> np.ndarray:
    from .errors import ResourceCapError

    if mat.shape[0] > cap:
        raise ResourceCapError(
            f"matrix of size {mat.shape[0]} exceeds dense cap {cap}")
    return mat.toarray()


def matrix_entry(mat: sp.spmatrix, sigma, sigma_prime, n: int) -> float:
    """Entry addressed by two (d-1)-cells (0-based vertex tuples)."""
    i = _cells.rank_cell(sigma)
    j = _cells.rank_cell(sigma_prime)
    return mat[i, j]
