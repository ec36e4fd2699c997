import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbgmatch.errors import CapExceeded
from dbgmatch.graph import LabeledDigraph
from dbgmatch.instances import HamInstance, OvInstance
from dbgmatch.oracles import (
    all_two_cycle_free_digraphs,
    hamiltonian_oracle,
    ov_oracle,
    walk_enumeration_oracle,
    walks,
)
from dbgmatch.verify import random_ov


def digraph(labels, edges, sigma=2):
    g = LabeledDigraph(sigma)
    for a in labels:
        g.add_vertex(a)
    for u, v in edges:
        g.add_edge(u, v)
    return g


class TestHamiltonian:
    def test_three_cycle(self):
        ok, cycle = hamiltonian_oracle(HamInstance.from_edges(3, [(0, 1), (1, 2), (2, 0)]))
        assert ok and cycle == [0, 1, 2]

    def test_path(self):
        assert hamiltonian_oracle(HamInstance.from_edges(3, [(0, 1), (1, 2)])) == (False, None)

    def test_two_cycles_bridged_one_way(self):
        edges = [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]
        assert not hamiltonian_oracle(HamInstance.from_edges(4, edges))[0]

    def test_empty(self):
        assert hamiltonian_oracle(HamInstance.from_edges(0, [])) == (False, None)

    def test_witness_is_a_cycle(self):
        edges = [(0, 2), (2, 1), (1, 3), (3, 0), (0, 1)]
        ok, cycle = hamiltonian_oracle(HamInstance.from_edges(4, edges))
        assert ok and sorted(cycle) == [0, 1, 2, 3]
        closed = cycle + cycle[:1]
        assert all((a, b) in edges for a, b in zip(closed, closed[1:]))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            hamiltonian_oracle(HamInstance.from_edges(5, [(i, (i + 1) % 5) for i in range(5)]), cap=4)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_invariant_under_relabelling(self, data):
        n = data.draw(st.integers(2, 6))
        pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
        edges = data.draw(st.lists(pairs, max_size=3 * n))
        perm = data.draw(st.permutations(range(n)))
        a = hamiltonian_oracle(HamInstance.from_edges(n, edges))[0]
        b = hamiltonian_oracle(HamInstance.from_edges(n, [(perm[u], perm[v]) for u, v in edges]))[0]
        assert a == b


class TestOv:
    def test_orthogonal_pair(self):
        ok, (i, j) = ov_oracle(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)]))
        assert ok and (i, j) == (1, 1)

    def test_all_ones(self):
        assert ov_oracle(OvInstance([(1, 1)] * 2, [(1, 1)] * 2)) == (False, None)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            ov_oracle(OvInstance([(0,)] * 4, [(0,)] * 4), cap=10)

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_swapped_scan(self, seed):
        ov = random_ov(4, 4, random.Random(seed), 0.6)
        want = any(all(x * y == 0 for x, y in zip(a, b)) for b in ov.B for a in ov.A)
        ok, wit = ov_oracle(ov)
        assert ok == want
        if ok:
            i, j = wit
            assert all(x * y == 0 for x, y in zip(ov.A[i], ov.B[j]))


class TestWalks:
    def test_counts_and_order(self):
        g = digraph([0, 1], [(0, 1), (1, 0), (1, 1)])
        assert list(walks(g, 3)) == [[0, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 1, 1]]

    def test_cap(self):
        g = digraph([0, 1], [(0, 1), (1, 0), (0, 0), (1, 1)])
        with pytest.raises(CapExceeded):
            list(walks(g, 6, cap=10))

    def test_one_mismatch(self):
        g = digraph([0, 1, 0], [(0, 1), (1, 2)])
        assert walk_enumeration_oracle(g, [0, 0, 0]) == (1, 1)

    def test_loop_relabels_once(self):
        g = digraph([0], [(0, 0)])
        assert walk_enumeration_oracle(g, [1, 1, 1]) == (3, 1)

    def test_no_walk(self):
        g = digraph([0, 1, 0], [(0, 1), (1, 2)])
        assert walk_enumeration_oracle(g, [0] * 4) == (math.inf, math.inf)

    def test_conflicting_visits(self):
        g = digraph([0], [(0, 0)])
        assert walk_enumeration_oracle(g, [0, 1]) == (1, math.inf)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_two_cycle_free_enumeration(n):
    graphs = list(all_two_cycle_free_digraphs(n))
    assert len(graphs) == 3 ** (n * (n - 1) // 2)
    assert len({tuple(sorted(e)) for e in graphs}) == len(graphs)
    for edges in graphs:
        assert not HamInstance.from_edges(n, edges).has_two_cycle()
