"""Eigenvalue machinery: dense full spectra, Lanczos extremes, inertia
counts, operator and Schatten norms, spectral gap, confinement reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ResourceCapError

DENSE_CAP = 8192


class ConvergenceError(RuntimeError):
    """Iterative solver failed to reach the requested tolerance."""


@dataclass
class SpectrumReport:
    size: int
    method: str
    eigenvalues: np.ndarray | None = None  # ascending, full mode only
    lambda_min: float = 0.0
    lambda_max: float = 0.0
    tolerance: float = 0.0
    interval_counts: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "size": self.size,
            "method": self.method,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "tolerance": self.tolerance,
            "interval_counts": {str(k): v for k, v in self.interval_counts.items()},
            "eigenvalues": None
            if self.eigenvalues is None
            else [float(x) for x in self.eigenvalues],
        }
        return json.dumps(payload, sort_keys=True)

    def eigenvalues_csv(self) -> str:
        if self.eigenvalues is None:
            raise ValueError("no full spectrum available")
        return "\n".join(repr(float(x)) for x in self.eigenvalues) + "\n"


def _as_dense(mat) -> np.ndarray:
    return mat.toarray() if sp.issparse(mat) else np.asarray(mat, dtype=float)


def full_spectrum(mat, cap: int = DENSE_CAP) -> SpectrumReport:
    """All eigenvalues, ascending, by a dense symmetric solve."""
    n = mat.shape[0]
    if n > cap:
        raise ResourceCapError(f"matrix size {n} exceeds dense cap {cap}")
    vals = np.linalg.eigvalsh(_as_dense(mat))
    return SpectrumReport(
        size=n,
        method="dense",
        eigenvalues=vals,
        lambda_min=float(vals[0]),
        lambda_max=float(vals[-1]),
        tolerance=0.0,
    )


def extreme_eigs(mat, which: str = "both", tol: float = 1e-8,
                 max_iter: int | None = None) -> SpectrumReport:
    """Extreme eigenvalues by Lanczos iteration, residual-verified.

    Falls back to a dense solve for very small matrices, where the iterative
    solver cannot run.
    """
    if which not in ("min", "max", "both"):
        raise ValueError(f"which must be min/max/both, got {which!r}")
    n = mat.shape[0]
    if n < 2:
        raise ValueError("need a matrix of size >= 2")
    mat = sp.csr_matrix(mat) if not sp.issparse(mat) else mat
    if mat.nnz == 0:
        return SpectrumReport(size=n, method="zero", lambda_min=0.0,
                              lambda_max=0.0, tolerance=0.0)
    if n <= 32:
        rep = full_spectrum(mat)
        rep.method = "dense-small"
        rep.eigenvalues = None
        return rep
    v0 = np.full(n, 1.0 / np.sqrt(n))  # fixed start => deterministic runs
    scale = max(abs(mat).sum(axis=1).max(), 1e-300)  # infinity norm bound

    def one_side(mode):
        try:
            vals, vecs = spla.eigsh(mat, k=1, which=mode, tol=tol, v0=v0,
                                    maxiter=max_iter)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError(f"Lanczos did not converge for {mode}") from exc
        lam, vec = float(vals[0]), vecs[:, 0]
        resid = np.linalg.norm(mat @ vec - lam * vec)
        if resid > max(tol, 1e-12) * scale * 100:
            raise ConvergenceError(
                f"residual {resid:.3e} exceeds tolerance for {mode}")
        return lam

    lo = one_side("SA") if which in ("min", "both") else np.nan
    hi = one_side("LA") if which in ("max", "both") else np.nan
    return SpectrumReport(size=n, method="lanczos", lambda_min=lo,
                          lambda_max=hi, tolerance=tol)


def operator_norm(mat, tol: float = 1e-8) -> float:
    rep = extreme_eigs(mat, which="both", tol=tol)
    return max(abs(rep.lambda_min), abs(rep.lambda_max))


def schatten(mat, p: int, cap: int = DENSE_CAP) -> float:
    """Schatten p-norm (Trace |M|^p)^(1/p) from the full spectrum."""
    if p < 1:
        raise ValueError("Schatten order must be >= 1")
    vals = full_spectrum(mat, cap=cap).eigenvalues
    return float(np.sum(np.abs(vals) ** p) ** (1.0 / p))


def _inertia_of_ldl(dmat: np.ndarray, tol: float) -> int:
    """Count of negative eigenvalues of the block-diagonal LDL factor."""
    n = dmat.shape[0]
    neg = 0
    i = 0
    while i < n:
        if i + 1 < n and abs(dmat[i + 1, i]) > tol:
            block = dmat[i:i + 2, i:i + 2]
            ev = np.linalg.eigvalsh(block)
            neg += int(np.sum(ev < 0))
            i += 2
        else:
            if dmat[i, i] < 0:
                neg += 1
            i += 1
    return neg


def inertia_below(mat, theta: float, cap: int = DENSE_CAP) -> int:
    """#{eigenvalues < theta} via the inertia of an LDL^T factorization of
    M - theta*I (Bunch-Kaufman pivoting)."""
    n = mat.shape[0]
    if n > cap:
        raise ResourceCapError(f"matrix size {n} exceeds dense cap {cap}")
    dense = _as_dense(mat)
    scale = max(np.abs(dense).max(), 1.0)
    shift = theta
    for attempt in range(3):
        shifted = dense - shift * np.eye(n)
        _, dmat, _ = sla.ldl(shifted)
        diag_tol = 1e-14 * scale
        # near-singular shift: perturb downward and retry, so an eigenvalue
        # exactly at theta is never counted as strictly below it
        if _ldl_near_singular(dmat, diag_tol):
            shift = theta - (attempt + 1) * 1e-10 * scale
            continue
        return _inertia_of_ldl(dmat, diag_tol)
    return _inertia_of_ldl(dmat, diag_tol)


def _ldl_near_singular(dmat: np.ndarray, tol: float) -> bool:
    n = dmat.shape[0]
    i = 0
    while i < n:
        if i + 1 < n and abs(dmat[i + 1, i]) > tol:
            if abs(np.linalg.det(dmat[i:i + 2, i:i + 2])) <= tol**2:
                return True
            i += 2
        else:
            if abs(dmat[i, i]) <= tol:
                return True
            i += 1
    return False


def count_in_interval(mat, lo: float, hi: float, cap: int = DENSE_CAP) -> int:
    """#{eigenvalues in [lo, hi)} by two inertia computations."""
    if lo >= hi:
        raise ValueError("need lo < hi")
    return inertia_below(mat, hi, cap=cap) - inertia_below(mat, lo, cap=cap)


def spectral_gap(mat_or_eigs, n: int, d: int, cap: int = DENSE_CAP) -> float:
    """Difference of the ascending eigenvalues at 1-based positions
    C(n-1,d)+1 and C(n-1,d)."""
    vals = _eigenvalues_of(mat_or_eigs, cap)
    idx = comb(n - 1, d)  # 1-based position of the top-of-bulk eigenvalue
    if not 1 <= idx < len(vals):
        raise ValueError(f"gap index {idx} out of range for size {len(vals)}")
    return float(vals[idx] - vals[idx - 1])


def _eigenvalues_of(mat_or_eigs, cap: int) -> np.ndarray:
    if isinstance(mat_or_eigs, SpectrumReport):
        if mat_or_eigs.eigenvalues is None:
            raise ValueError("report carries no full spectrum")
        return mat_or_eigs.eigenvalues
    if isinstance(mat_or_eigs, np.ndarray) and mat_or_eigs.ndim == 1:
        return mat_or_eigs
    return full_spectrum(mat_or_eigs, cap=cap).eigenvalues


def confinement_report(mat_or_eigs, n: int, d: int, p: float, xi: float,
                       cap: int = DENSE_CAP) -> dict:
    """Check the two-interval split of the spectrum of A.

    The smallest C(n-1,d) eigenvalues are tested against the bulk interval
    sqrt(d n q)*[-2-xi, 2+xi] and the remaining C(n-1,d-1) against the
    cluster interval nq + [-7d, 7d], with q = p(1-p).
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0,1)")
    vals = _eigenvalues_of(mat_or_eigs, cap)
    q = p * (1.0 - p)
    bulk_expected = comb(n - 1, d)
    cluster_expected = comb(n - 1, d - 1)
    assert bulk_expected + cluster_expected == comb(n, d) == len(vals)
    half = np.sqrt(d * n * q) * (2.0 + xi)
    bulk_lo, bulk_hi = -half, half
    clus_lo, clus_hi = n * q - 7.0 * d, n * q + 7.0 * d
    bulk_vals = vals[:bulk_expected]
    cluster_vals = vals[bulk_expected:]
    bulk_ok = (bulk_vals >= bulk_lo) & (bulk_vals <= bulk_hi)
    clus_ok = (cluster_vals >= clus_lo) & (cluster_vals <= clus_hi)
    violations = [float(v) for v in bulk_vals[~bulk_ok]]
    violations += [float(v) for v in cluster_vals[~clus_ok]]
    return {
        "bulk_count": int(bulk_ok.sum()),
        "cluster_count": int(clus_ok.sum()),
        "bulk_expected": bulk_expected,
        "cluster_expected": cluster_expected,
        "bulk_interval": [float(bulk_lo), float(bulk_hi)],
        "cluster_interval": [float(clus_lo), float(clus_hi)],
        "violations": violations,
        "exact": bool(bulk_ok.all() and clus_ok.all()),
    }
