"""Shared instance builders for the test suite."""

import numpy as np

from mstep import GenSpec, make_component_chain, make_unusual_pair, random_constrained, validate
from mstep.boolmat import BoolMatrix

# The six-vertex tripartite fixture in every format the suite needs.
FIXTURE_MATRIX_TEXT = "6\n011111\n000001\n000001\n000010\n011000\n000100\n"

FIXTURE_LIMIT = np.array(
    [
        [1, 1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0, 0],
        [1, 1, 1, 0, 0, 0],
        [1, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 1, 0],
        [1, 0, 0, 0, 0, 1],
    ],
    dtype=np.uint8,
)


def from_arcs(n, arcs, partition):
    dense = np.zeros((n, n), dtype=np.uint8)
    for u, v in arcs:
        dense[u, v] = 1
    return validate(BoolMatrix.from_dense(dense), partition)


def three_cycle():
    return from_arcs(3, [(0, 1), (1, 2), (2, 0)], [[0], [1], [2]])


def four_cycle():
    return from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 2], [1, 3]])


# Strong bipartite with kappa = 2: a 6-cycle 0-3-1-4-2-5 plus chords making
# a 4-cycle, so closed walks of lengths 4 and 6 coexist.
K2_CORE_ARCS = [(0, 3), (3, 1), (1, 4), (1, 5), (4, 2), (2, 5), (5, 0), (2, 3), (4, 0)]


def k2_strong_core():
    return from_arcs(6, K2_CORE_ARCS, [[0, 1, 2], [3, 4, 5]])


def k2_with_source_bipartite():
    # vertex 6 joins part one and beats all of part two: s = 2, still k = 2
    arcs = K2_CORE_ARCS + [(6, 3), (6, 4), (6, 5)]
    return from_arcs(7, arcs, [[0, 1, 2, 6], [3, 4, 5]])


def k2_with_third_part():
    # vertex 6 sits in a third part and beats everyone: s = 2, k = 3
    arcs = K2_CORE_ARCS + [(6, v) for v in range(6)]
    return from_arcs(7, arcs, [[0, 1, 2], [3, 4, 5], [6]])


def x_plus_four_cycle():
    # x=0 beats both of part two; 1,2 and 3,4 close a 4-cycle
    arcs = [(1, 3), (3, 2), (2, 4), (4, 1), (0, 3), (0, 4)]
    return from_arcs(5, arcs, [[0, 1, 2], [3, 4]])


def k2_with_source_and_third_part():
    # x=6 joins part one and beats part two; w=7 sits in a third part and
    # beats everyone: kappa(Q_s)=2 with both side slots occupied
    arcs = K2_CORE_ARCS + [(6, 3), (6, 4), (6, 5)] + [(7, v) for v in range(7)]
    return from_arcs(8, arcs, [[0, 1, 2, 6], [3, 4, 5], [7]])


def c4_with_head_and_side():
    # kappa(Q_s)=4 with K1 and K2 occupied
    return make_component_chain([("v", "C"), ("v", "A"), ("c4", ("A", "B"))])


def single_arc():
    return from_arcs(2, [(0, 1)], [[0], [1]])


def double_sink():
    # two sinks in one part: the condensation has two sink components
    return from_arcs(3, [(2, 0), (2, 1)], [[0, 1], [2]])


def primitive_before_cycle3():
    # strong kappa=1 tripartite block (cycles of length 3 and 4) feeding a
    # three-cycle on the same parts
    arcs = [
        (0, 2), (2, 1), (1, 3), (3, 0), (2, 3),  # a1=0,a2=1 in A; b=2 in B; c=3 in C
        (4, 5), (5, 6), (6, 4),  # the last component
    ]
    cross = [
        (u, v)
        for u in range(4)
        for v in range(4, 7)
        if ({0: "A", 1: "A", 2: "B", 3: "C"}[u] != {4: "A", 5: "B", 6: "C"}[v])
    ]
    return from_arcs(7, arcs + cross, [[0, 1, 4], [2, 5], [3, 6]])


def unusual_with_head():
    """An unusual pair with one extra source vertex in a fourth part."""
    base = make_unusual_pair((1, 1, 1), (1, 1, 1), seed=0)
    n = base.n
    dense = np.zeros((n + 1, n + 1), dtype=np.uint8)
    dense[:n, :n] = base.arcs.to_dense()
    dense[n, :n] = 1
    partition = [list(p) for p in base.partition] + [[n]]
    return validate(BoolMatrix.from_dense(dense), partition)


CHAIN_CASES = {
    "g3:trivial:t=s-1": [("v", "W"), ("c3", ("A", "B", "C"))],
    "g3:trivial:single-run": [("v", "B"), ("c3", ("A", "B", "C"))],
    "g3:trivial:case1": [("c3", ("A", "B", "C")), ("v", "B"), ("c3", ("A", "B", "C"))],
    "g3:trivial:case2-1": [("v", "C"), ("v", "B"), ("c3", ("A", "B", "C"))],
    "g3:trivial:case2-2": [("v", "A"), ("v", "B"), ("c3", ("A", "B", "C"))],
    "g3:prev-nontrivial": [("c3", ("B", "A", "C")), ("c3", ("A", "B", "C"))],
}

DEEP_CASE22 = [("v", "B"), ("v", "A"), ("v", "B"), ("c3", ("A", "B", "C"))]


def handcrafted_instances():
    """Deterministic instances covering every constructor branch."""
    from mstep import example_tripartite

    items = [
        example_tripartite(),
        three_cycle(),
        four_cycle(),
        k2_strong_core(),
        k2_with_source_bipartite(),
        k2_with_third_part(),
        k2_with_source_and_third_part(),
        c4_with_head_and_side(),
        x_plus_four_cycle(),
        primitive_before_cycle3(),
        unusual_with_head(),
        make_component_chain(DEEP_CASE22),
    ]
    items.extend(make_component_chain(blocks) for blocks in CHAIN_CASES.values())
    # strong complete tournament on four singleton parts: kappa = 1
    items.append(
        from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
                  [[0], [1], [2], [3]])
    )
    return items


def family_instances():
    """Seeded parameterized families around the rare branches."""
    items = []
    for seed in range(8):
        items.append(make_unusual_pair((1, 1, 1), (1, 1, 1), seed))
    for seed in range(4):
        items.append(make_unusual_pair((2, 1, 1), (1, 2, 1), seed))
        items.append(make_unusual_pair((1, 2, 2), (2, 1, 1), seed))
    for sizes in [(1, 1, 2), (2, 1, 1), (2, 2, 2), (1, 2, 1)]:
        for blocks in CHAIN_CASES.values():
            grown = list(blocks)
            grown[-1] = (grown[-1][0], grown[-1][1], sizes)
            items.append(make_component_chain(grown))
        items.append(make_component_chain(
            [("v", "B"), ("v", "A"), ("v", "B"), ("c3", ("A", "B", "C"), sizes)]
        ))
    for shape, count in [((3, 3), 12), ((2, 2, 2), 12), ((1, 1, 1, 2), 8),
                         ((1, 1, 1, 1, 1), 8)]:
        for seed in range(count):
            items.append(
                random_constrained(GenSpec(shape, seed=7000 + seed, constraint="strong"))
            )
    return items


ACCEPT_SHAPES = [
    (3, 3), (2, 4), (6, 6), (5, 7), (3, 4),
    (2, 2, 2), (1, 3, 2), (4, 4, 4), (3, 4, 5),
    (2, 2, 2, 2), (1, 2, 3, 4), (3, 3, 3, 3),
    (1, 1, 1, 1, 2), (2, 2, 2, 3, 3), (1, 1, 2, 3, 4),
]


def acceptance_instances(total):
    """Yield exactly ``total`` seeded sink-free instances, n <= 12 and
    k in 2..5, mixing targeted families into the random grid so every
    classification branch occurs."""
    produced = 0
    for t in handcrafted_instances() + family_instances():
        if produced == total:
            return
        yield t
        produced += 1
    i = 0
    while produced < total:
        shape = ACCEPT_SHAPES[i % len(ACCEPT_SHAPES)]
        yield random_constrained(GenSpec(shape, seed=900_000 + i, constraint="sink_free"))
        produced += 1
        i += 1
