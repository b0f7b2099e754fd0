"""Limit constructor, block forms, and the oracle cross-check."""

import numpy as np
import pytest

from mstep import (
    GenSpec,
    block_form,
    construct_limit,
    example_tripartite,
    kappa_and_sets,
    make_component_chain,
    make_unusual_pair,
    ordered_components,
    random_constrained,
    verify_against_oracle,
)
from mstep.boolmat import BoolMatrix, zero_diagonal
from mstep.limits import LINES, SinksError, to_dot, report_json

import helpers


def edge_set(report):
    dense = report.edges.to_dense()
    return {(int(u), int(v)) for u, v in np.argwhere(np.triu(dense, k=1))}


def test_fixture_report():
    rep = construct_limit(example_tripartite())
    assert rep.label == "G2"
    assert rep.cliques == {1: (0,), 4: (1, 2), 5: (3,), 6: (5,), 7: (4,)}
    assert rep.edges == zero_diagonal(BoolMatrix.from_dense(helpers.FIXTURE_LIMIT))
    bf = block_form(rep)
    assert bf.template == "M2"
    assert bf.block_sizes == (1, None, None, 2, 1, 1, 1)


def test_three_cycle_report():
    rep = construct_limit(helpers.three_cycle())
    assert rep.label == "G3"
    assert set(rep.cliques) == {5, 6, 7}
    assert edge_set(rep) == set()
    assert rep.trace.branch == "strong:g3"


def test_four_cycle_report():
    rep = construct_limit(helpers.four_cycle())
    assert rep.label == "G2"
    assert edge_set(rep) == set()
    bf = block_form(rep)
    assert bf.template == "M2"
    assert bf.block_sizes == (None, None, None, 1, 1, 1, 1)


def test_complete_label():
    t = helpers.handcrafted_instances()[-1]  # strong tournament, 4 parts
    rep = construct_limit(t)
    assert rep.label == "Complete"
    assert edge_set(rep) == {(u, v) for u in range(4) for v in range(u + 1, 4)}
    bf = block_form(rep)
    assert bf.template == "J"
    assert bf.block_sizes == (4,)


def test_bipartite_example_edges():
    rep = construct_limit(helpers.x_plus_four_cycle())
    assert rep.label == "G2"
    assert rep.trace.branch == "g2:bipartite"
    assert 1 not in rep.cliques and 3 not in rep.cliques
    assert rep.cliques[2] == (0,)
    assert edge_set(rep) == {(0, 1), (0, 2)}


def test_strong_bipartite_kappa2_is_two_cliques():
    rep = construct_limit(helpers.k2_strong_core())
    assert rep.label == "G1" and rep.trace.branch == "strong:g1"
    assert 1 not in rep.cliques
    assert set(rep.cliques[2]) == {0, 1, 2} and set(rep.cliques[3]) == {3, 4, 5}
    assert edge_set(rep) == {(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)}


def test_g1_branches():
    rep = construct_limit(helpers.k2_with_source_bipartite())
    assert rep.trace.branch == "g1:bipartite"
    assert 1 not in rep.cliques
    rep = construct_limit(helpers.k2_with_third_part())
    assert rep.trace.branch == "g1:multipartite"
    assert rep.cliques[1] == (6,)
    assert rep.trace.t == 1


def test_side_slots_span_earlier_components():
    rep = construct_limit(helpers.k2_with_source_and_third_part())
    assert rep.trace.branch == "g1:multipartite"
    assert rep.cliques[1] == (7,)
    assert set(rep.cliques[2]) == {0, 1, 2, 6}
    rep = construct_limit(helpers.c4_with_head_and_side())
    assert rep.trace.branch == "g2:multipartite"
    assert 2 in rep.cliques and 3 not in rep.cliques
    assert verify_against_oracle(helpers.c4_with_head_and_side()).status == "equal"


def test_fixture_head_joins_everything():
    rep = construct_limit(example_tripartite())
    dense = rep.edges.to_dense()
    assert dense[0].sum() == 5  # the head vertex meets all others


def test_unusual_pair_cross_pattern():
    t = make_unusual_pair((1, 1, 1), (1, 1, 1), seed=0)
    rep = construct_limit(t)
    assert rep.trace.branch == "g3:unusual"
    assert set(rep.cliques) == {2, 3, 4, 5, 6, 7}
    prev = kappa_and_sets(t, range(3))
    last = kappa_and_sets(t, range(3, 6))
    # index classes by the partite set they occupy
    part_of = lambda u_set: t.part_index[u_set[0]]
    prev_by_part = {part_of(u): set(u) for u in prev.sets}
    last_by_part = {part_of(u): set(u) for u in last.sets}
    dense = rep.edges.to_dense()
    # class i of the earlier component joins classes i and i+1 of the last,
    # never i+2 (indices by shared partite set, cyclically)
    parts = sorted(prev_by_part)
    for i, p in enumerate(parts):
        hit = {q for q in parts if any(
            dense[u, v] for u in prev_by_part[p] for v in last_by_part[q]
        )}
        miss = set(parts) - hit
        assert len(miss) == 1
        assert p not in miss or len(parts) != 3  # own part is always joined


def test_unusual_with_head_slots():
    rep = construct_limit(helpers.unusual_with_head())
    assert rep.trace.branch == "g3:unusual"
    assert rep.cliques[1] == (6,)
    dense = rep.edges.to_dense()
    assert dense[6].sum() == 6


def test_prev_nontrivial_collapses_outside():
    for t in (
        make_component_chain(helpers.CHAIN_CASES["g3:prev-nontrivial"]),
        helpers.primitive_before_cycle3(),
    ):
        rep = construct_limit(t)
        assert rep.trace.branch == "g3:prev-nontrivial"
        st = ordered_components(t)
        outside = [v for c in st.components[:-1] for v in c]
        assert set(rep.cliques[1]) == set(outside)
        dense = rep.edges.to_dense()
        for v in outside:
            assert dense[v].sum() == t.n - 1


def test_single_run_misses_one_class():
    # one earlier vertex sharing the part of the second class: joined to
    # classes 2 and 3, never class 1
    t = make_component_chain(helpers.CHAIN_CASES["g3:trivial:single-run"])
    rep = construct_limit(t)
    assert rep.trace.branch == "g3:trivial:single-run"
    dense = rep.edges.to_dense()
    u5, u6, u7 = rep.cliques[5], rep.cliques[6], rep.cliques[7]
    run = rep.cliques[4]
    assert all(dense[u, v] for u in run for v in u6 + u7)
    assert not any(dense[u, v] for u in run for v in u5)


def test_case22_slot_pattern():
    t = make_component_chain(helpers.CHAIN_CASES["g3:trivial:case2-2"])
    rep = construct_limit(t)
    assert rep.trace.branch == "g3:trivial:case2-2"
    assert set(rep.cliques) == {2, 4, 5, 6, 7}
    dense = rep.edges.to_dense()
    k2, k4 = rep.cliques[2], rep.cliques[4]
    u5, u6, u7 = rep.cliques[5], rep.cliques[6], rep.cliques[7]
    assert all(dense[u, v] for u in k2 for v in u5 + u6)
    assert not any(dense[u, v] for u in k2 for v in u7)
    assert all(dense[u, v] for u in k4 for v in u6 + u7)
    assert not any(dense[u, v] for u in k4 for v in u5)
    assert verify_against_oracle(t).status == "equal"


def test_deep_case22_has_head():
    rep = construct_limit(make_component_chain(helpers.DEEP_CASE22))
    assert rep.trace.branch == "g3:trivial:case2-2"
    assert rep.trace.t2 is not None and rep.trace.t2 > rep.trace.t
    assert 1 in rep.cliques


def test_all_chain_branches_fire_and_verify():
    for branch, blocks in helpers.CHAIN_CASES.items():
        t = make_component_chain(blocks)
        rep = construct_limit(t)
        assert rep.trace.branch == branch
        assert verify_against_oracle(t).status == "equal"


def test_sinks_refusal_names_vertices():
    with pytest.raises(SinksError) as err:
        construct_limit(helpers.single_arc())
    assert err.value.sinks == (1,)
    with pytest.raises(SinksError) as err:
        construct_limit(helpers.double_sink())
    assert err.value.sinks == (0, 1)


def test_verdict_on_sinks():
    v = verify_against_oracle(helpers.single_arc())
    assert v.status == "sinks"
    assert v.constructor_refused
    assert v.cperiod <= 2


def test_fixture_verdict_equal():
    assert verify_against_oracle(example_tripartite()).status == "equal"


def test_last_component_induces_disjoint_cliques():
    shapes = [(3, 3), (2, 2, 2), (1, 2, 3), (2, 2, 2, 2)]
    for i in range(150):
        spec = GenSpec(shapes[i % 4], seed=1100 + i, constraint="sink_free")
        t = random_constrained(spec)
        rep = construct_limit(t)
        st = ordered_components(t)
        last = st.components[-1]
        data = kappa_and_sets(t, last)
        dense = rep.edges.to_dense()
        index_of = {}
        for idx, u_set in enumerate(data.sets):
            for v in u_set:
                index_of[v] = idx
        for u in last:
            for v in last:
                if u < v:
                    assert dense[u, v] == (index_of[u] == index_of[v])


def test_head_vertices_join_everything():
    # whenever some component leaves the partite sets of the last component,
    # everything up to it is universally adjacent
    count = 0
    for t in helpers.handcrafted_instances():
        rep = construct_limit(t)
        if rep.trace.t:
            count += 1
            dense = rep.edges.to_dense()
            for v in rep.cliques.get(1, ()):
                assert dense[v].sum() == t.n - 1
    assert count >= 2


def test_slot_joins_match_line_pattern_exactly():
    for t in helpers.handcrafted_instances():
        rep = construct_limit(t)
        dense = rep.edges.to_dense()
        slots = sorted(rep.cliques)
        for a in slots:
            for b in slots:
                if a >= b:
                    continue
                expect = (a, b) in LINES[rep.label]
                block = [
                    bool(dense[u, v]) for u in rep.cliques[a] for v in rep.cliques[b]
                ]
                assert all(block) == expect and any(block) == expect
        block_form(rep)  # template round-trip must hold too


def test_random_battery_constructor_equals_oracle():
    shapes = [(3, 3), (2, 4), (6, 6), (2, 2, 2), (1, 3, 2), (4, 4, 4),
              (2, 2, 2, 2), (1, 2, 3, 4), (1, 1, 1, 1, 2)]
    for i in range(400):
        spec = GenSpec(shapes[i % len(shapes)], seed=1200 + i, constraint="sink_free")
        t = random_constrained(spec)
        v = verify_against_oracle(t)
        assert v.status == "equal", (spec, v.diff)


def test_small_strong_instances_verify():
    shapes = [(3, 3), (2, 2, 2), (1, 2, 3), (2, 4), (1, 1, 2, 2)]
    for i in range(200):
        spec = GenSpec(shapes[i % len(shapes)], seed=1300 + i, constraint="strong")
        t = random_constrained(spec)
        assert verify_against_oracle(t).status == "equal"


def test_report_json_shape():
    rep = construct_limit(example_tripartite())
    data = report_json(rep, block_form(rep))
    assert data["label"] == "G2"
    assert data["cliques"]["K4"] == [1, 2]
    assert [0, 1] in data["edges"]
    assert data["template"] == "M2"
    assert data["block_sizes"] == [1, None, None, 2, 1, 1, 1]


def test_dot_export():
    rep = construct_limit(example_tripartite())
    dot = to_dot(rep)
    assert dot.startswith("graph limit {")
    assert "subgraph cluster_K4" in dot
    assert "v0 -- v1;" in dot
