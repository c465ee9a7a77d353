"""Walk-sum traces checked against linear algebra, both ways.

Tr(H^{2k}) is a sum over closed walks on (d-1)-cells of the complete complex.
The expectation of that sum has a combinatorial closed form (a sum over
walks weighted by entry moments); the realized sum for one sampled matrix is
a plain trace of a matrix power. Both routes are computed independently here
and compared.
"""

import numpy as np

from simplex_spectra import build_H
from simplex_spectra.distributions import bernoulli
from simplex_spectra.words import trace_exhaustive, trace_walk_sum

d, n = 2, 5
spec = bernoulli(0.3)

print(f"expectation route, d={d}, n={n}, Bernoulli(0.3) entries")
print(f"{'k':>3} {'walk sum':>16} {'exhaustive':>16} {'rel delta':>10}")
for k in (1, 2, 3):
    walk = trace_walk_sum(d, n, spec, k)
    # independent oracle: enumerate every possible complex on the candidate
    # cells and average Tr(H^{2k}) exactly over the Bernoulli weights
    exact = trace_exhaustive(d, n, 0.3, k)
    print(f"{k:>3} {walk:>16.10f} {exact:>16.10f} "
          f"{abs(walk - exact) / abs(exact):>10.1e}")

print(f"\nrealized route, one sampled matrix (d={d}, n=6, seed=0)")
mat = build_H(d, 6, spec, seed=0)
dense = mat.toarray()
print(f"{'k':>3} {'walk sum':>16} {'matrix power':>16} {'rel delta':>10}")
for k in (1, 2, 3):
    walk = trace_walk_sum(d, 6, None, k, realized=mat)
    trace = float(np.trace(np.linalg.matrix_power(dense, 2 * k)))
    print(f"{k:>3} {walk:>16.10f} {trace:>16.10f} "
          f"{abs(walk - trace) / abs(trace):>10.1e}")
