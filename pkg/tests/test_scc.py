from functools import reduce
from math import gcd

import pytest

from branchtool import (
    GraphError,
    NotStronglyConnectedError,
    UnknownNodeError,
    block_triangular_order,
    parse_edge_list,
    scc_decompose,
    scc_period,
    upstream,
    walk_counts,
)
from branchtool.examples import simple_cycle

import oracles


def test_single_component(six):
    dec = scc_decompose(six)
    assert dec.components == ((0, 1, 2, 3, 4, 5),)
    assert dec.topo_order == (0,)
    assert dec.condensation_edges == frozenset()


def test_three_singletons(three):
    dec = scc_decompose(three)
    assert sorted(dec.components) == [(0,), (1,), (2,)]
    assert all(dec.components[dec.component_of[v]] == (v,) for v in range(3))
    source = dec.component_of[2]
    assert dec.condensation_edges == frozenset(
        {(source, dec.component_of[0]), (source, dec.component_of[1])}
    )
    # Node 2 feeds both sinks; ties in the order go to the smaller node index.
    assert [dec.components[c] for c in dec.topo_order] == [(2,), (0,), (1,)]


def test_two_component_chain(left):
    dec = scc_decompose(left)
    comps = {frozenset(c) for c in dec.components}
    assert comps == {frozenset({0, 1}), frozenset({2})}
    first = dec.component_of[0]
    assert dec.topo_order.index(first) < dec.topo_order.index(dec.component_of[2])
    assert dec.condensation_edges == frozenset({(first, dec.component_of[2])})


def test_topo_tie_break_by_node_index():
    g = parse_edge_list("3 1\n3 2\n")
    dec = scc_decompose(g)
    assert [dec.components[c] for c in dec.topo_order] == [(0,), (1,), (2,)]


def test_topo_order_is_valid_on_corpus():
    for g in oracles.corpus(seed=21, count=60):
        if g.n == 0:
            continue
        dec = scc_decompose(g)
        assert sorted(dec.topo_order) == list(range(len(dec.components)))
        pos = {c: k for k, c in enumerate(dec.topo_order)}
        for cs, cd in dec.condensation_edges:
            assert pos[cs] < pos[cd]
        assert sorted(v for comp in dec.components for v in comp) == list(range(g.n))


def test_upstream_examples(right, three):
    assert upstream(right, 0).nodes == (0,)
    assert upstream(right, 1).nodes == (0, 1, 2)
    assert upstream(right, 2).nodes == (0, 1, 2)
    assert upstream(three, 0).nodes == (0, 2)
    assert upstream(three, 1).nodes == (1, 2)
    assert upstream(three, 2).nodes == (2,)


def test_upstream_subgraph_keeps_labels(three):
    u = upstream(three, 0)
    assert u.subgraph.labels == ("1", "3")
    assert u.nodes[0] == 0 and u.subgraph.labels[0] == three.labels[0]


def test_upstream_chain_in_topo_order(three):
    dec = scc_decompose(three)
    u = upstream(three, 0)
    assert u.scc_chain == (dec.component_of[2], dec.component_of[0])


def test_upstream_out_of_range(three):
    with pytest.raises(UnknownNodeError):
        upstream(three, 5)


def test_upstream_matches_reachability_oracle():
    graphs = [oracles.FIB, oracles.THREE, oracles.LEFT, oracles.RIGHT,
              oracles.LINKED] + oracles.corpus(seed=22, count=40)
    for g in graphs:
        for i in range(g.n):
            assert set(upstream(g, i).nodes) == oracles.oracle_reachable_to(g, i)


def test_upstream_membership_is_walk_existence():
    # j lies upstream of i exactly when some walk j -> i of length <= n
    # exists; checked against exact matrix powers.
    from branchtool import adjacency_matrix

    for g in oracles.corpus(seed=27, count=30):
        if g.n == 0:
            continue
        a = adjacency_matrix(g)
        reach = [[False] * g.n for _ in range(g.n)]
        power = [[int(x == y) for y in range(g.n)] for x in range(g.n)]
        for _ in range(g.n):
            power = oracles.int_mat_mul(power, a)
            for j in range(g.n):
                for i in range(g.n):
                    if power[j][i] > 0:
                        reach[j][i] = True
        for i in range(g.n):
            members = set(upstream(g, i).nodes)
            for j in range(g.n):
                assert (j in members) == (reach[j][i] or j == i)


def test_upstream_is_scc_closed_on_corpus():
    for g in oracles.corpus(seed=23, count=40):
        dec = scc_decompose(g)
        for i in range(g.n):
            members = set(upstream(g, i).nodes)
            for comp in dec.components:
                overlap = members.intersection(comp)
                assert not overlap or overlap == set(comp)


def test_walk_counts_invariant_under_upstream_restriction():
    graphs = [oracles.FIB, oracles.SIX, oracles.THREE, oracles.LEFT,
              oracles.RIGHT, oracles.AB23] + oracles.corpus(seed=24, count=20)
    for g in graphs:
        for i in range(g.n):
            u = upstream(g, i)
            j = u.nodes.index(i)
            assert (
                walk_counts(g, i, 12).counts
                == walk_counts(u.subgraph, j, 12).counts
            )


def test_periods_on_fixtures(fib, six, three, pc23):
    assert scc_period(fib, (0, 1)).h == 1
    assert scc_period(six, range(6)).h == 3
    assert scc_period(three, [1]).h == 1
    assert scc_period(three, [2]).h == 0
    assert scc_period(pc23, (0, 1)).h == 2


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_period_of_simple_cycle(n):
    g = simple_cycle(n)
    assert scc_period(g, range(n)).h == n


def test_period_rejects_non_scc(three):
    with pytest.raises(NotStronglyConnectedError):
        scc_period(three, [0, 1])
    with pytest.raises(NotStronglyConnectedError):
        scc_period(three, [0, 2])


def test_period_rejects_bad_input(three):
    with pytest.raises(GraphError):
        scc_period(three, [])
    with pytest.raises(UnknownNodeError):
        scc_period(three, [9])


def test_period_matches_cycle_length_gcd_on_corpus():
    for g in oracles.corpus(seed=25, count=60):
        dec = scc_decompose(g)
        for comp in dec.components:
            lengths = oracles.oracle_simple_cycle_lengths(g, comp)
            h = scc_period(g, comp).h
            if lengths:
                assert h == reduce(gcd, lengths)
            else:
                assert h == 0


def test_block_triangular_order():
    graphs = [oracles.LEFT, oracles.RIGHT, oracles.THREE,
              oracles.LINKED] + oracles.corpus(seed=26, count=30)
    for g in graphs:
        for i in range(g.n):
            u = upstream(g, i)
            order = block_triangular_order(u)
            assert sorted(order) == list(range(u.subgraph.n))
            dec = scc_decompose(u.subgraph)
            pos = {v: k for k, v in enumerate(order)}
            for s, d, _ in u.subgraph.edges:
                if dec.component_of[s] != dec.component_of[d]:
                    assert pos[s] < pos[d]
            comp_positions = {
                c: [pos[v] for v in comp] for c, comp in enumerate(dec.components)
            }
            for spots in comp_positions.values():
                assert max(spots) - min(spots) == len(spots) - 1
