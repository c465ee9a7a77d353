from math import comb, factorial, perm

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplex_spectra import models, words
from simplex_spectra.distributions import bernoulli, rademacher, uniform
from simplex_spectra.errors import ResourceCapError
from simplex_spectra.words import WordGraph


PAPER_WORD = [(5, 6), (6, 7), (5, 6), (5, 8)]


class TestWordBasics:
    def test_validation(self):
        with pytest.raises(ValueError):
            words.check_word([(1, 2), (3, 4)], 2)  # union has size 4
        with pytest.raises(ValueError):
            words.check_word([(1, 2, 3)], 2)  # wrong letter size
        with pytest.raises(ValueError):
            words.check_word([], 2)

    def test_supports_example(self):
        supp0, suppd = words.supports(PAPER_WORD, 2)
        assert supp0 == {5, 6, 7, 8}
        assert suppd == {(5, 6, 7), (5, 6, 8)}

    def test_crossing_numbers_example(self):
        counts = words.crossing_numbers(PAPER_WORD, 2)
        assert counts == {(5, 6, 7): 2, (5, 6, 8): 1}
        assert sum(counts.values()) == len(PAPER_WORD) - 1

    def test_closed(self):
        assert words.is_closed([(1, 2), (2, 3), (1, 2)])
        assert not words.is_closed(words.check_word(PAPER_WORD, 2))


class TestCanonicalize:
    def test_reference_example(self):
        w = [(5, 6), (6, 7), (5, 6), (1, 6), (1, 2)]
        assert words.canonicalize(w, 2) == (
            (1, 2), (2, 3), (1, 2), (2, 4), (4, 5))

    def test_idempotent(self):
        w = words.canonicalize(PAPER_WORD, 2)
        assert words.canonicalize(w, 2) == w

    @given(st.integers(0, 10**6))
    @settings(max_examples=200, deadline=None)
    def test_constant_under_order_preserving_relabelings(self, seed):
        # letters are unoriented and re-read in ascending order, so the
        # equivalence preserved by the first-appearance scan is relabeling
        # by strictly increasing injections
        rng = np.random.default_rng(seed)
        base = words.canonicalize([(1, 2), (2, 3), (1, 3), (1, 2), (2, 4)], 2)
        labels = sorted({v for l in base for v in l})
        image = sorted(int(x) for x in rng.choice(
            np.arange(1, 50), size=len(labels), replace=False))
        mapping = dict(zip(labels, image))
        relabeled = words.apply_injection(base, mapping)
        assert words.canonicalize(relabeled, 2) == base

    def test_general_relabelings_can_swap_within_letter_order(self):
        # swapping the two vertices of the first letter moves the word to
        # the other canonical class of the same shape
        w1 = ((1, 2), (1, 3), (1, 2))
        w2 = ((1, 2), (2, 3), (1, 2))
        swapped = words.apply_injection(w2, {1: 2, 2: 1, 3: 3})
        assert words.canonicalize(swapped, 2) == w1


class TestEnumeration:
    def test_shortest_closed_words(self):
        got = words.enumerate_closed_words(2, 1)
        assert got == [((1, 2), (1, 3), (1, 2)), ((1, 2), (2, 3), (1, 2))]

    def test_class_counts_frozen(self):
        assert len(words.enumerate_closed_words(2, 2)) == 14
        assert len(words.enumerate_closed_words(2, 3)) == 176

    def test_all_enumerated_words_are_canonical_closed_doubled(self):
        for w in words.enumerate_closed_words(2, 2):
            assert words.canonicalize(w, 2) == w
            assert words.is_closed(w)
            assert all(c >= 2 for c in words.crossing_numbers(w, 2).values())

    def test_min_mult_one_is_a_superset(self):
        loose = set(words.enumerate_closed_words(2, 2, min_mult=1))
        strict = set(words.enumerate_closed_words(2, 2, min_mult=2))
        assert strict < loose

    def test_no_duplicates(self):
        ws = words.enumerate_closed_words(2, 3)
        assert len(set(ws)) == len(ws)

    def test_length_cap(self):
        with pytest.raises(ResourceCapError):
            words.enumerate_closed_words(2, 5)

    def test_d1_enumeration(self):
        # d=1: letters are single vertices, steps are edges
        got = words.enumerate_closed_words(1, 1)
        assert got == [((1,), (2,), (1,))]


class TestEmbeddings:
    def test_exact_and_bounds(self):
        w = [(1, 2), (2, 3), (1, 2)]
        exact, lower, upper = words.count_embeddings(w, 2, 6)
        assert exact == 6 * 5 * 4  # injections act freely on this word
        assert lower == perm(6 - 1, 2)  # (n-d+1)!/(n-s)! with s=3
        assert upper == perm(6, 3)
        assert lower <= exact <= upper

    def test_bounds_hold_for_enumerated_words(self):
        for w in words.enumerate_closed_words(2, 2)[:6]:
            exact, lower, upper = words.count_embeddings(w, 2, 7)
            assert lower <= exact <= upper

    def test_needs_enough_vertices(self):
        with pytest.raises(ValueError):
            words.count_embeddings([(1, 2), (2, 3), (1, 2)], 2, 2)


class TestWordGraph:
    def test_from_word_weights(self):
        g = WordGraph.from_word(PAPER_WORD, 2)
        weights = {tuple(sorted(tuple(sorted(x)) for x in e)): w
                   for e, w in g.edges.items()}
        assert weights == {((5, 6), (6, 7)): 2, ((5, 6), (5, 8)): 1}
        assert g.support0() == {5, 6, 7, 8}
        assert g.cell_weights() == {(5, 6, 7): 2, (5, 6, 8): 1}
        assert g.total_weight() == 3

    def test_tree_and_cycle_detection(self):
        path = WordGraph(edges={frozenset(((1, 2), (2, 3))): 1,
                                frozenset(((2, 3), (3, 4))): 1})
        assert path.is_tree()
        assert path.find_cycle() is None
        triangle_edges = dict(path.edges)
        triangle_edges[frozenset(((1, 2), (1, 3)))] = 1
        triangle_edges[frozenset(((1, 3), (3, 4)))] = 1
        cyc_graph = WordGraph(edges=triangle_edges)
        assert not cyc_graph.is_tree()
        assert cyc_graph.find_cycle() is not None

    def test_evaluate_G(self):
        g = WordGraph.from_word(PAPER_WORD, 2)
        spec = bernoulli(0.3)
        want = (factorial(4) * comb(9, 4)
                * spec.abs_central_moment(2) * spec.abs_central_moment(1))
        assert words.evaluate_G(g, 9, spec) == pytest.approx(want, rel=1e-14)

    def test_evaluate_G_needs_room(self):
        g = WordGraph.from_word(PAPER_WORD, 2)
        with pytest.raises(ValueError):
            words.evaluate_G(g, 3, bernoulli(0.3))


class TestTraceOracles:
    def test_expectation_matches_exhaustive(self):
        for k in (1, 2):
            walk = words.trace_walk_sum(2, 5, bernoulli(0.3), k)
            exhaustive = words.trace_exhaustive(2, 5, 0.3, k)
            assert walk == pytest.approx(exhaustive, rel=1e-10)

    def test_expectation_k1_closed_form(self):
        # Tr E[H^2] = C(n,d) d(n-d) Var / (n Var) = C(n,d) d(n-d)/n
        for spec in (bernoulli(0.3), rademacher(), uniform(0, 1)):
            got = words.trace_walk_sum(2, 5, spec, 1)
            assert got == pytest.approx(comb(5, 2) * 2 * 3 / 5, rel=1e-12)

    def test_realized_matches_matrix_power(self):
        for seed in (0, 1):
            for k in (1, 2):
                mat = models.build_H(2, 6, uniform(0, 1), seed)
                walk = words.trace_walk_sum(2, 6, None, k, realized=mat)
                trace = float(np.trace(np.linalg.matrix_power(
                    mat.toarray(), 2 * k)))
                assert walk == pytest.approx(trace, rel=1e-8)

    def test_sign_mutation_detected(self):
        # flipping one orientation sign must break the trace identity
        mat = models.build_H(2, 6, uniform(0, 1), 3).toarray()
        trace = float(np.trace(np.linalg.matrix_power(mat, 4)))
        mutated = mat.copy()
        i, j = np.transpose(np.nonzero(mutated))[0]
        mutated[i, j] *= -1.0
        mutated[j, i] *= -1.0
        walk = words.trace_walk_sum(2, 6, None, 2, realized=mutated)
        assert walk != pytest.approx(trace, rel=1e-8)

    def test_walk_budget(self):
        with pytest.raises(ResourceCapError):
            words.trace_walk_sum(2, 30, bernoulli(0.3), 3)

    def test_exhaustive_cap_and_domain(self):
        with pytest.raises(ResourceCapError):
            words.trace_exhaustive(2, 7, 0.3, 1)
        with pytest.raises(ValueError):
            words.trace_exhaustive(2, 5, 1.0, 1)

    def test_expectation_needs_spec(self):
        with pytest.raises(ValueError):
            words.trace_walk_sum(2, 5, None, 1)


CHECK_SPECS = (bernoulli(0.3), rademacher(), uniform(0, 1))


class TestTreeReduce:
    def test_on_all_short_closed_words(self):
        for k in (1, 2):
            for w in words.enumerate_closed_words(2, k):
                g = WordGraph.from_word(w, 2)
                cert = words.tree_reduce(g)
                assert cert.ok, (w, cert.properties)
                assert cert.output_graph.is_tree()
                assert cert.output_graph.total_weight() == 2 * k
                # case tags recorded once per removed cycle edge
                removed = len(g.edges) - len(cert.output_graph.edges)
                assert len(cert.case_tags) == removed
                assert all(t in ("1.1", "1.2.1", "1.2.2")
                           for t in cert.case_tags)

    def test_tree_input_is_a_fixed_point(self):
        g = WordGraph(edges={frozenset(((1, 2), (2, 3))): 2,
                             frozenset(((2, 3), (3, 4))): 2})
        cert = words.tree_reduce(g)
        assert cert.case_tags == []
        assert cert.output_graph.edges == g.edges

    def test_triangle_inside_one_cell(self):
        # all three letters inside the single d-cell (1,2,3): case 1.1
        g = WordGraph(edges={frozenset(((1, 2), (2, 3))): 2,
                             frozenset(((2, 3), (1, 3))): 2,
                             frozenset(((1, 2), (1, 3))): 2})
        cert = words.tree_reduce(g)
        assert cert.ok
        assert "1.1" in cert.case_tags

    def test_G_monotone_numerically(self):
        for w in words.enumerate_closed_words(2, 2)[:8]:
            g = WordGraph.from_word(w, 2)
            cert = words.tree_reduce(g, n=8, check_specs=CHECK_SPECS)
            tree = cert.output_graph
            for spec in CHECK_SPECS:
                assert words.evaluate_G(g, 8, spec) <= \
                    words.evaluate_G(tree, 8, spec) * (1 + 1e-12)

    def test_disconnected_rejected(self):
        g = WordGraph(edges={frozenset(((1, 2), (2, 3))): 1,
                             frozenset(((7, 8), (8, 9))): 1})
        with pytest.raises(ValueError):
            words.tree_reduce(g)


class TestLeafPrune:
    def test_two_cell_path(self):
        g = WordGraph(edges={frozenset(((1, 2), (2, 3))): 2,
                             frozenset(((2, 3), (3, 4))): 2})
        cert = words.leaf_prune(g, k=2)
        assert cert.ok
        assert len(cert.harvested) == len(g.support0()) - 2  # |S| = |S0| - d
        assert sum(cert.harvested.values()) == 4

    def test_single_cell_tree_base_identity(self):
        # everything inside one d-cell: S = {tau0}, p = 1, equality holds
        k = 2
        g = WordGraph(edges={frozenset(((1, 2), (1, 3))): 2 * k})
        cert = words.leaf_prune(g, k=k)
        assert cert.ok
        assert cert.harvested == {(1, 2, 3): 2 * k}
        spec = bernoulli(0.3)
        n = 7
        lhs = words.evaluate_G(g, n, spec)
        rhs = (factorial(2) * comb(n, 2) * (n - 2)
               * spec.abs_central_moment(2 * k))
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_on_all_reduced_words(self):
        for k in (1, 2):
            for w in words.enumerate_closed_words(2, k):
                tree = words.tree_reduce(WordGraph.from_word(w, 2)).output_graph
                cert = words.leaf_prune(tree, k)
                assert cert.ok, (w, cert.properties)
                assert sum(cert.harvested.values()) == 2 * k
                assert len(cert.harvested) == len(tree.support0()) - 2
                assert all(t in ("2.1", "2.2", "2.3")
                           for t in cert.case_tags)

    def test_harvested_weights_dominate_crossings(self):
        for w in words.enumerate_closed_words(2, 2)[:10]:
            tree = words.tree_reduce(WordGraph.from_word(w, 2)).output_graph
            cert = words.leaf_prune(tree, 2)
            for tau, m in cert.harvested.items():
                assert m >= tree.cell_weights().get(tau, 0)

    def test_validation(self):
        not_tree = WordGraph(edges={frozenset(((1, 2), (2, 3))): 1,
                                    frozenset(((2, 3), (1, 3))): 1,
                                    frozenset(((1, 2), (1, 3))): 2})
        with pytest.raises(ValueError):
            words.leaf_prune(not_tree, 2)
        tree = WordGraph(edges={frozenset(((1, 2), (2, 3))): 3})
        with pytest.raises(ValueError):
            words.leaf_prune(tree, 2)  # weight != 2k
