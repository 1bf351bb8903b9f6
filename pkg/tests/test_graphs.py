import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    complete_graph,
    cycle_graph,
    er_graph,
    path_graph,
    random_weighted_graph,
    relabelled_copy,
)
from robustiso import (
    Assignment,
    Graph,
    PartialInjection,
    blowup,
    edit_cost,
    edit_distance_bruteforce,
    is_isomorphic_bruteforce,
    mixed_neighbourhood,
    parse_graph,
    serialize_graph,
    threshold_graph,
)
from robustiso.errors import CapExceededError, ParseError


K3 = complete_graph(3)
PATH3 = path_graph(3)


class TestGraphConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(2, {(0, 0)})

    def test_rejects_out_of_range_edge(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(2, {(0, 2)})

    def test_rejects_zero_weight(self):
        with pytest.raises(ValueError, match="nonzero"):
            Graph(2, {(0, 1)}, weights={(0, 1): 0})

    def test_rejects_weight_on_non_edge(self):
        with pytest.raises(ValueError, match="non-edge"):
            Graph(3, {(0, 1)}, weights={(1, 2): 1})

    def test_edges_are_normalised(self):
        g = Graph(3, {(2, 0), (1, 0)})
        assert g.edges == frozenset({(0, 2), (0, 1)})

    def test_weights_completed_with_unit(self):
        g = Graph(3, {(0, 1), (1, 2)}, weights={(0, 1): Fraction(3, 2)})
        assert g.weights[(1, 2)] == 1

    def test_colours_completed_with_zero(self):
        g = Graph(3, {(0, 1)}, colours={2: 5})
        assert g.colour_of(0) == 0 and g.colour_of(2) == 5

    def test_bound(self):
        assert Graph(3, set()).bound_b() == 0
        assert K3.bound_b() == 1
        g = Graph(2, {(0, 1)}, weights={(0, 1): Fraction(-7, 2)})
        assert g.bound_b() == Fraction(7, 2)


class TestAssignment:
    def test_identity_and_inverse(self):
        pi = Assignment((2, 0, 1))
        assert pi.inverse().mapping == (1, 2, 0)
        assert Assignment.identity(3).mapping == (0, 1, 2)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            Assignment((0, 0, 1))

    def test_graph_of_assignment(self):
        pairs = Assignment((1, 0)).graph().sorted_pairs()
        assert pairs == ((0, 1), (1, 0))

    def test_partial_injection_validation(self):
        with pytest.raises(ValueError):
            PartialInjection(frozenset({(0, 1), (0, 2)}))
        with pytest.raises(ValueError):
            PartialInjection(frozenset({(0, 1), (2, 1)}))


class TestEditCost:
    def test_identity_on_equal_graphs(self):
        assert edit_cost(K3, K3, Assignment.identity(3)) == 0

    def test_one_mismatching_pair(self):
        assert edit_cost(K3, PATH3, Assignment.identity(3)) == 1

    def test_weighted_difference(self):
        g = Graph(2, {(0, 1)}, weights={(0, 1): 3})
        h = Graph(2, {(0, 1)}, weights={(0, 1): 1})
        assert edit_cost(g, h, Assignment.identity(2)) == 2

    def test_size_mismatch_is_error(self):
        with pytest.raises(ValueError, match="order"):
            edit_cost(K3, Graph(4, set()), Assignment.identity(3))

    def test_colour_violation_is_error(self):
        g = Graph(2, set(), colours={0: 0, 1: 1})
        h = Graph(2, set(), colours={0: 0, 1: 1})
        with pytest.raises(ValueError, match="colour"):
            edit_cost(g, h, Assignment((1, 0)))

    def test_symmetry_under_inverse(self):
        rng = random.Random(1)
        for trial in range(40):
            n = rng.randint(2, 7)
            g = er_graph(n, 0.5, 100 + trial)
            h = er_graph(n, 0.5, 200 + trial)
            perm = list(range(n))
            rng.shuffle(perm)
            pi = Assignment(tuple(perm))
            assert edit_cost(g, h, pi) == edit_cost(h, g, pi.inverse())

    def test_unweighted_equals_unit_weighted(self):
        rng = random.Random(2)
        for trial in range(25):
            n = rng.randint(2, 6)
            g = er_graph(n, 0.5, 300 + trial)
            h = er_graph(n, 0.5, 400 + trial)
            gw = Graph(n, g.edges, weights={e: 1 for e in g.edges})
            hw = Graph(n, h.edges, weights={e: 1 for e in h.edges})
            perm = list(range(n))
            rng.shuffle(perm)
            pi = Assignment(tuple(perm))
            assert edit_cost(g, h, pi) == edit_cost(gw, hw, pi)


class TestEditDistanceBruteforce:
    def test_isomorphic_cycles(self):
        c4 = cycle_graph(4)
        c4r = Graph(4, {(0, 2), (2, 1), (1, 3), (3, 0)})
        dist, _ = edit_distance_bruteforce(c4, c4r)
        assert dist == 0

    def test_triangle_vs_path(self):
        dist, pi = edit_distance_bruteforce(K3, PATH3)
        assert dist == 1
        # independently: scan all six bijections for value and tie-break
        best = min(
            (edit_cost(K3, PATH3, Assignment(p)), p)
            for p in itertools.permutations(range(3))
        )
        assert (dist, pi.mapping) == best

    def test_cycle_vs_path_five(self):
        dist, _ = edit_distance_bruteforce(cycle_graph(5), path_graph(5))
        assert dist == 1

    def test_weighted_bruteforce(self):
        g = Graph(2, {(0, 1)}, weights={(0, 1): 3})
        h = Graph(2, {(0, 1)}, weights={(0, 1): 1})
        dist, _ = edit_distance_bruteforce(g, h)
        assert dist == 2

    def test_cap(self):
        with pytest.raises(CapExceededError):
            edit_distance_bruteforce(Graph(11, set()), Graph(11, set()))

    def test_colour_histogram_mismatch(self):
        g = Graph(2, set(), colours={0: 0, 1: 0})
        h = Graph(2, set(), colours={0: 0, 1: 1})
        with pytest.raises(ValueError, match="histogram"):
            edit_distance_bruteforce(g, h)

    def test_colour_preserving_restriction(self):
        # same underlying graphs; colours force the costly bijection
        g = Graph(2, {(0, 1)}, colours={0: 0, 1: 1})
        h = Graph(2, set(), colours={0: 0, 1: 1})
        dist, pi = edit_distance_bruteforce(g, h)
        assert dist == 1 and pi.mapping == (0, 1)

    def test_zero_distance_iff_isomorphic(self):
        rng = random.Random(3)
        for trial in range(30):
            n = rng.randint(2, 6)
            g = er_graph(n, 0.5, 500 + trial)
            h = (
                relabelled_copy(g, 600 + trial)
                if trial % 2
                else er_graph(n, 0.5, 700 + trial)
            )
            dist, _ = edit_distance_bruteforce(g, h)
            assert (dist == 0) == (is_isomorphic_bruteforce(g, h) is not None)

    def test_zero_distance_iff_isomorphic_at_cap_scale(self):
        for trial, isomorphic in ((0, True), (1, False)):
            g = er_graph(8, 0.5, 710 + trial)
            h = relabelled_copy(g, 720) if isomorphic else er_graph(8, 0.5, 730)
            dist, _ = edit_distance_bruteforce(g, h)
            assert (dist == 0) == (is_isomorphic_bruteforce(g, h) is not None)
            assert (dist == 0) == isomorphic


class TestIsomorphismSearch:
    def test_finds_relabelling(self):
        g = er_graph(8, 0.5, 42)
        h = relabelled_copy(g, 43)
        pi = is_isomorphic_bruteforce(g, h)
        assert pi is not None
        assert edit_cost(g, h, pi) == 0

    def test_detects_non_isomorphic(self):
        assert is_isomorphic_bruteforce(K3, PATH3) is None

    def test_respects_colours(self):
        g = Graph(2, set(), colours={0: 0, 1: 1})
        h = Graph(2, set(), colours={0: 1, 1: 0})
        pi = is_isomorphic_bruteforce(g, h)
        assert pi is not None and pi.mapping == (1, 0)


class TestMixedNeighbourhood:
    def test_same_vertex_empty(self):
        assert mixed_neighbourhood(K3, 1, 1) == frozenset()

    def test_path_endpoints_agree(self):
        assert mixed_neighbourhood(PATH3, 0, 2) == frozenset()

    def test_path_endpoint_vs_centre(self):
        assert mixed_neighbourhood(PATH3, 0, 1) == frozenset({0, 1, 2})

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mixed_neighbourhood(PATH3, 0, 3)

    @given(st.integers(0, 2**15 - 1), st.integers(0, 5), st.integers(0, 5))
    @settings(max_examples=60, deadline=None)
    def test_cardinality_identity(self, bits, v, w):
        edges = set()
        pairs = list(itertools.combinations(range(6), 2))
        for i, e in enumerate(pairs):
            if bits >> i & 1:
                edges.add(e)
        g = Graph(6, frozenset(edges))
        m = mixed_neighbourhood(g, v, w)
        nv, nw = g.neighbourhood(v), g.neighbourhood(w)
        assert len(m) == len(nv) + len(nw) - 2 * len(nv & nw)


class TestThresholdGraph:
    TRI = Graph(3, {(0, 1), (0, 2), (1, 2)},
                weights={(0, 1): 1, (0, 2): 2, (1, 2): 3})

    def test_below_min_keeps_everything(self):
        assert threshold_graph(self.TRI, 0).edges == self.TRI.edges

    def test_at_max_empties(self):
        assert threshold_graph(self.TRI, 3).edges == frozenset()

    def test_intermediate(self):
        assert threshold_graph(self.TRI, Fraction(3, 2)).edges == frozenset(
            {(0, 2), (1, 2)}
        )

    def test_unweighted_behaves_as_unit_weights(self):
        assert threshold_graph(K3, Fraction(1, 2)).edges == K3.edges
        assert threshold_graph(K3, 1).edges == frozenset()


class TestBlowup:
    def test_factor_one_is_isomorphic(self):
        b = blowup(PATH3, 1)
        assert b.n == 3 and b.edges == PATH3.edges
        assert all(b.colour_of(v) == 0 for v in range(3))

    def test_single_edge_becomes_k22(self):
        b = blowup(Graph(2, {(0, 1)}), 2)
        assert b.n == 4 and len(b.edges) == 4
        # no edges inside a copy-class
        assert (0, 1) not in b.edges and (2, 3) not in b.edges

    def test_counts(self):
        rng = random.Random(4)
        for trial in range(15):
            n = rng.randint(1, 5)
            ell = rng.randint(1, 3)
            g = er_graph(n, 0.6, 800 + trial)
            b = blowup(g, ell)
            assert b.n == ell * n
            assert len(b.edges) == ell * ell * len(g.edges)

    def test_colour_encoding_is_injective(self):
        g = Graph(3, {(0, 1)}, colours={0: 0, 1: 1, 2: 2})
        b = blowup(g, 2)
        assert b.colour_of(0) == 0 and b.colour_of(1) == 1
        assert b.colour_of(2) == 2 and b.colour_of(3) == 3
        assert b.colour_of(4) == 4 and b.colour_of(5) == 5

    def test_rejects_bad_factor(self):
        with pytest.raises(ValueError):
            blowup(K3, 0)

    def test_large_blowups_scale_edit_distance(self):
        # quadratic growth of blowup distance at desk scale
        rng = random.Random(5)
        checked = 0
        while checked < 8:
            n = rng.randint(2, 4)
            seed = rng.randint(0, 10**6)
            cols = {v: 0 for v in range(n)}
            g = er_graph(n, 0.5, seed, colours=cols)
            h = er_graph(n, 0.5, seed + 1, colours=cols)
            base, _ = edit_distance_bruteforce(g, h)
            blown, _ = edit_distance_bruteforce(blowup(g, 2), blowup(h, 2))
            assert blown >= Fraction(1, 3) * 4 * base
            checked += 1


class TestGraphFiles:
    def test_parse_simple_path(self):
        assert parse_graph("n 3\ne 0 1\ne 1 2") == PATH3

    def test_parse_decimal_weight(self):
        g = parse_graph("n 2\ne 0 1 2.5")
        assert g.weights[(0, 1)] == Fraction(5, 2)

    def test_parse_fraction_weight_and_comments(self):
        g = parse_graph("# header\nn 2\ne 0 1 -7/3   # a weight\n")
        assert g.weights[(0, 1)] == Fraction(-7, 3)

    def test_self_loop_reports_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_graph("n 2\ne 0 0")

    def test_duplicate_edge(self):
        with pytest.raises(ParseError, match="duplicate edge"):
            parse_graph("n 2\ne 0 1\ne 1 0")

    def test_vertex_out_of_range(self):
        with pytest.raises(ParseError, match="out of range"):
            parse_graph("n 2\ne 0 2")

    def test_missing_header(self):
        with pytest.raises(ParseError, match="header"):
            parse_graph("e 0 1")

    def test_unknown_line(self):
        with pytest.raises(ParseError, match="unknown line"):
            parse_graph("n 1\nx 0")

    def test_round_trip_plain(self):
        rng = random.Random(6)
        for trial in range(10):
            g = er_graph(rng.randint(0, 7), 0.5, 900 + trial)
            assert parse_graph(serialize_graph(g)) == g

    def test_round_trip_weighted_coloured(self):
        g = random_weighted_graph(5, 17)
        assert parse_graph(serialize_graph(g)) == g
        gc = Graph(4, {(0, 1), (2, 3)}, colours={0: 2, 1: 2, 2: 0, 3: 1})
        assert parse_graph(serialize_graph(gc)) == gc
