"""Spectra of sparse random simplicial complexes.

Sampling of the X(d,n,p) model, the signed adjacency and normalized matrix
ensembles on its (d-1)-cells, eigenvalue experiments (norm convergence,
two-interval confinement, spectral gap), closed-form bounds, and the
closed-word combinatorics that ties traces of matrix powers to weighted
graph reductions.
"""

from .bounds import (
    BoundConstants,
    gamma_interval,
    k_zero,
    phi,
    schatten_bound,
    script_E,
    tail_probability_bound,
    tail_xi,
    talagrand_rate,
    theta_k,
    theta_k_star,
)
from .cells import (
    all_cells,
    boundary_faces,
    neighbors,
    pair_sign,
    pair_sign_bruteforce,
    rank_cell,
    unrank_cell,
)
from .distributions import (
    DistributionSpec,
    bernoulli,
    dist_stats,
    parse_dist,
    rademacher,
    twopoint,
    uniform,
)
from .errors import ResourceCapError
from .experiments import (
    ExperimentConfig,
    bound_compare,
    confinement_experiment,
    emit,
    gap_experiment,
    oracle_verify,
    run_ensemble,
    trial_seed,
)
from .models import (
    ComplexSample,
    build_A,
    build_calA,
    build_expected_A,
    build_H,
    build_H_unsigned,
    build_Y,
    load_sample,
    sample_complex,
    sample_to_json,
    save_sample,
    to_dense,
)
from .spectral import (
    ConvergenceError,
    SpectrumReport,
    confinement_report,
    count_in_interval,
    extreme_eigs,
    full_spectrum,
    inertia_below,
    operator_norm,
    schatten,
    spectral_gap,
)
from .words import (
    ReductionCertificate,
    WordGraph,
    canonicalize,
    count_embeddings,
    crossing_numbers,
    enumerate_closed_words,
    evaluate_G,
    leaf_prune,
    supports,
    trace_exhaustive,
    trace_walk_sum,
    tree_reduce,
)

__version__ = "1.0.0"
