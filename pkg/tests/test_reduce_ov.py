import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbgmatch.errors import InvariantViolation, NotPowerOfTwo
from dbgmatch.graph import validate_de_bruijn
from dbgmatch.instances import OvInstance
from dbgmatch.matchers import min_pattern_substitutions, replay
from dbgmatch.oracles import ov_oracle
from dbgmatch.reduce_ov import (
    FAN_IN,
    MERGE,
    SELECTION,
    SYNC,
    THREE,
    TWO,
    OvParams,
    a_gadget,
    b_gadget,
    build_ov_graph,
    build_ov_pattern,
    build_seth_instance,
    check_ov_optimality_probes,
    f_A,
    f_B,
    gadget_cost,
    hamming,
)
from dbgmatch.verify import random_ov


def bits(s):
    return tuple(int(c) for c in s)


class TestGadgets:
    def test_maps(self):
        assert f_A(0) == bits("1100") and f_A(1) == bits("1111")
        assert f_B(0) == bits("0110") and f_B(1) == bits("0000")

    def test_hamming_identities(self):
        assert hamming(f_A(1), f_B(1)) == 4
        assert hamming(f_A(0), f_B(1)) == 2
        assert hamming(f_A(0), f_B(0)) == hamming(f_A(1), f_B(0)) == 2

    def test_hamming_length_mismatch(self):
        with pytest.raises(ValueError):
            hamming((0,), (0, 1))

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_block_costs(self, d):
        for a in itertools.product((0, 1), repeat=d):
            for b in itertools.product((0, 1), repeat=d):
                dot = sum(x * y for x, y in zip(a, b))
                cost = gadget_cost(a, b)
                if dot == 0:
                    assert cost == 2 * (d + 1)
                else:
                    assert cost == 2 * (d + 1) + 2 * dot >= 2 * d + 4

    def test_gadget_lengths(self):
        assert len(a_gadget((1, 0, 1))) == len(b_gadget((0, 0, 0))) == 16


class TestParams:
    def test_smallest(self):
        p = OvParams.for_shape(2, 2)
        assert (p.c, p.k, p.ell, p.t, p.delta) == (2, 14, 13, 12, 18)
        assert p.pattern_length == 364

    def test_four_by_three(self):
        assert OvParams.for_shape(4, 3).delta == 50

    def test_not_power_of_two(self):
        with pytest.raises(NotPowerOfTwo):
            OvParams.for_shape(3, 4)

    def test_dimension_too_small(self):
        with pytest.raises(InvariantViolation):
            OvParams.for_shape(4, 2)

    @pytest.mark.parametrize("N", [1, 2, 4, 8, 16])
    def test_ceiling_log(self, N):
        p = OvParams.for_shape(N, N.bit_length() + 1)
        assert 2 ** (p.c - 1) < N + 1 <= 2**p.c


class TestGraph:
    A = [(1, 0), (0, 1)]

    def test_sections(self):
        p = OvParams.for_shape(2, 2)
        dbg, sections = build_ov_graph(self.A, p)
        g = dbg.base
        assert set(sections) == set(g.vertices())
        by = {s: [v for v, x in sections.items() if x == s] for s in (FAN_IN, SELECTION, MERGE, SYNC)}
        # 2 + 4 tree vertices below the 3-vertex, 3 selection paths of 12
        assert len(by[FAN_IN]) == 6
        assert len(by[SELECTION]) == 36
        assert len(by[SYNC]) == p.k
        assert sorted(g.labels[v] for v in by[SYNC]) == [TWO] * (p.k - 1) + [THREE]
        assert all(g.labels[v] == TWO for v in by[MERGE])

    def test_validator_clean(self):
        dbg, _ = build_ov_graph(self.A, OvParams.for_shape(2, 2))
        assert validate_de_bruijn(dbg).ok

    def test_merge_section_is_in_tree(self):
        p = OvParams.for_shape(2, 2)
        dbg, sections = build_ov_graph(self.A, p)
        g = dbg.base
        merge = [v for v, s in sections.items() if s == MERGE]
        assert all(len(g.succ[v]) == 1 for v in merge)
        labels = [dbg.implicit[v] for v in merge]
        assert len(set(labels)) == len(labels)
        sync3 = next(v for v, s in sections.items() if s == SYNC and g.labels[v] == THREE)
        # every merge vertex drains into the 3-vertex without leaving the section
        for v in merge:
            while sections[v] == MERGE:
                (v,) = g.succ[v]
            assert v == sync3

    def test_selection_paths_spell_gadgets(self):
        p = OvParams.for_shape(2, 2)
        dbg, sections = build_ov_graph(self.A, p)
        g = dbg.base
        starts = [v for v, s in sections.items() if s == SELECTION and sections[next(iter(g.pred[v]))] == FAN_IN]
        spelled = set()
        for v in starts:
            walk = [v]
            while len(walk) < 4 * (p.d + 1):
                (nxt,) = g.succ[walk[-1]]
                walk.append(nxt)
            spelled.add(g.spell(walk))
        assert spelled == {a_gadget(self.A[0]), a_gadget(self.A[1]), f_A(0) * 2 + f_A(1)}

    def test_shape_mismatch(self):
        with pytest.raises(InvariantViolation):
            build_ov_graph([(1, 0)], OvParams.for_shape(2, 2))


class TestPattern:
    def test_length_and_threes(self):
        p = OvParams.for_shape(2, 2)
        pat = build_ov_pattern([(1, 0), (0, 1)], p)
        assert len(pat) == 364
        assert pat.count(THREE) == p.N * p.t

    def test_first_gadget(self):
        p = OvParams.for_shape(2, 2)
        pat = build_ov_pattern([(1, 0), (0, 0)], p)
        block = len(pat) // 2
        assert tuple(pat[block - 12 : block]) == bits("0000" "0110" "0000")
        assert pat[: p.ell + 1] == [TWO] * p.ell + [THREE]

    def test_shape_mismatch(self):
        with pytest.raises(InvariantViolation):
            build_ov_pattern([(1, 0, 1), (0, 0, 0)], OvParams.for_shape(2, 2))


class TestInstance:
    def test_deltas(self):
        b = build_seth_instance(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)]))
        assert b.delta == 18 and b.kind == "seth"

    def test_not_power_of_two(self):
        ov = OvInstance([(1, 0, 0)] * 3, [(0, 1, 0)] * 3)
        with pytest.raises(NotPowerOfTwo):
            build_seth_instance(ov)

    def test_ragged_input(self):
        with pytest.raises(InvariantViolation):
            build_seth_instance(OvInstance([(1, 0), (0, 1, 1)], [(1, 1), (1, 0)]))

    @pytest.mark.parametrize(
        "A,B,cost",
        [
            ([(1, 0), (0, 1)], [(1, 1), (1, 0)], 18),
            ([(1, 0), (0, 1)], [(1, 0), (0, 1)], 16),
            ([(1, 1), (1, 1)], [(1, 1), (1, 1)], 20),
        ],
    )
    def test_frozen_costs(self, A, B, cost):
        ov = OvInstance(A, B)
        b = build_seth_instance(ov)
        res = min_pattern_substitutions(b.graph, b.pattern)
        assert res.cost == cost
        assert replay(b.graph, b.pattern, res)
        assert ov_oracle(ov)[0] == (cost <= b.delta)


class TestProbes:
    def test_orthogonal_pair_present(self):
        b = build_seth_instance(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)]))
        report = check_ov_optimality_probes(b)
        assert report.ok and report.costs == (18, 18)

    def test_no_orthogonal_pair(self):
        b = build_seth_instance(OvInstance([(1, 1), (1, 1)], [(1, 1), (1, 1)]))
        report = check_ov_optimality_probes(b)
        assert report.ok and report.costs == (20, 20) and report.costs[0] > b.delta

    def test_nothing_pinned(self):
        b = build_seth_instance(OvInstance([(1, 1), (0, 1)], [(1, 0), (1, 0)]))
        report = check_ov_optimality_probes(b, forbidden=set())
        assert report.ok


@given(st.integers(0, 10**6), st.sampled_from([(2, 2), (2, 3), (4, 3), (4, 4)]), st.floats(0.3, 0.9))
@settings(max_examples=25, deadline=None)
def test_equivalence_random(seed, shape, density):
    N, d = shape
    ov = random_ov(N, d, random.Random(seed), density)
    b = build_seth_instance(ov)
    assert validate_de_bruijn(b.graph).ok
    cost = min_pattern_substitutions(b.graph, b.pattern, witness=False).cost
    assert ov_oracle(ov)[0] == (cost <= b.delta)
