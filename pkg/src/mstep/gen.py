"""Seeded, reproducible generators of multipartite tournaments.

All randomness flows through numpy's PCG64 generator; identical specs
produce identical tournaments bit for bit, so generated instances are safe
to freeze into golden files.  Changing the generator algorithm is a
breaking change to any recorded fixture.

Vertices are numbered consecutively part by part: sizes (2, 3) give parts
{0, 1} and {2, 3, 4}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boolmat import BoolMatrix
from .digraph import Tournament, ordered_components, sinks, validate
from .imprimitivity import kappa_and_sets

CONSTRAINTS = ("none", "sink_free", "strong", "last_kappa", "unusual_pair")


class GenerationError(RuntimeError):
    """Rejection sampling exhausted its tries; carries the counts so
    infeasible constraints surface clearly."""

    def __init__(self, spec, tries: int):
        super().__init__(
            f"no instance satisfying {spec.constraint!r} "
            f"(kappa={spec.kappa}) for sizes {spec.sizes} in {tries} tries"
        )
        self.spec = spec
        self.tries = tries


@dataclass(frozen=True)
class GenSpec:
    """Partition sizes, a 64-bit seed, and an optional constraint.

    ``constraint`` is one of "none", "sink_free", "strong", "last_kappa"
    (with ``kappa`` set), or "unusual_pair" (sizes then hold the two class
    size triples back to back).
    """

    sizes: tuple[int, ...]
    seed: int
    constraint: str = "none"
    kappa: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(x) for x in self.sizes))
        if len(self.sizes) < 2 or any(x < 1 for x in self.sizes):
            raise ValueError(f"need at least two positive sizes, got {self.sizes}")
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"unknown constraint {self.constraint!r}")
        if self.constraint == "last_kappa" and self.kappa not in (1, 2, 3, 4):
            raise ValueError("last_kappa needs kappa in 1..4")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _parts(sizes: Sequence[int]) -> list[list[int]]:
    parts = []
    base = 0
    for size in sizes:
        parts.append(list(range(base, base + size)))
        base += size
    return parts


def _random_arcs(rng: np.random.Generator, sizes: Sequence[int]) -> BoolMatrix:
    parts = _parts(sizes)
    n = sum(sizes)
    part_of = [0] * n
    for idx, part in enumerate(parts):
        for v in part:
            part_of[v] = idx
    pairs = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if part_of[u] != part_of[v]
    ]
    flips = rng.integers(0, 2, size=len(pairs))
    dense = np.zeros((n, n), dtype=np.uint8)
    for (u, v), flip in zip(pairs, flips):
        if flip:
            dense[u, v] = 1
        else:
            dense[v, u] = 1
    return BoolMatrix.from_dense(dense)


def random_tournament(spec: GenSpec) -> Tournament:
    """Uniform orientation of the complete multipartite graph: one fair
    coin per cross-part pair, pairs visited in lexicographic order."""
    rng = _rng(spec.seed)
    return validate(_random_arcs(rng, spec.sizes), _parts(spec.sizes))


def _satisfies(t: Tournament, spec: GenSpec) -> bool:
    if spec.constraint == "sink_free":
        return not sinks(t)
    if spec.constraint == "strong":
        return len(ordered_components(t).components) == 1
    if spec.constraint == "last_kappa":
        if sinks(t):
            return False
        last = ordered_components(t).components[-1]
        return kappa_and_sets(t, last).kappa == spec.kappa
    raise ValueError(f"constraint {spec.constraint!r} is not sampleable")


def random_constrained(spec: GenSpec, max_tries: int = 1000) -> Tournament:
    """Rejection-sample :func:`random_tournament` until the constraint
    holds; all tries draw from one stream seeded by the spec.

    Raises :class:`GenerationError` after ``max_tries`` failures, which is
    the expected outcome for infeasible asks (say kappa 3 with two partite
    sets).
    """
    if spec.constraint == "none":
        return random_tournament(spec)
    if spec.constraint == "unusual_pair":
        if len(spec.sizes) != 6:
            raise ValueError("unusual_pair needs six sizes: two class triples")
        return make_unusual_pair(spec.sizes[:3], spec.sizes[3:], spec.seed)
    rng = _rng(spec.seed)
    parts = _parts(spec.sizes)
    for _ in range(max_tries):
        t = validate(_random_arcs(rng, spec.sizes), parts)
        if _satisfies(t, spec):
            return t
    raise GenerationError(spec, max_tries)


def make_unusual_pair(
    first_sizes: Sequence[int], last_sizes: Sequence[int], seed: int = 0
) -> Tournament:
    """Two kappa-3 components in series whose classes share partite sets.

    Each component is a three-class cycle blow-up (class i points at class
    i+1 completely); the seed draws the cyclic shift pairing the classes of
    the first component with partite sets of the second.  Remaining
    cross-component pairs all point from the first component to the
    second, so the pair is always detected as unusual.
    """
    if len(first_sizes) != 3 or len(last_sizes) != 3:
        raise ValueError("need exactly three class sizes per component")
    rng = _rng(seed)
    shift = int(rng.integers(0, 3))
    n1 = sum(first_sizes)
    first = _parts(first_sizes)
    last = [[n1 + v for v in part] for part in _parts(last_sizes)]
    n = n1 + sum(last_sizes)

    dense = np.zeros((n, n), dtype=np.uint8)
    for classes in (first, last):
        for i in range(3):
            for u in classes[i]:
                for v in classes[(i + 1) % 3]:
                    dense[u, v] = 1
    partition = [first[i] + last[(i + shift) % 3] for i in range(3)]
    part_of = [0] * n
    for idx, part in enumerate(partition):
        for v in part:
            part_of[v] = idx
    for u in range(n1):
        for v in range(n1, n):
            if part_of[u] != part_of[v]:
                dense[u, v] = 1
    return validate(BoolMatrix.from_dense(dense), partition)


def make_component_chain(blocks: Sequence) -> Tournament:
    """Deterministic tournament from a series of strong blocks.

    Each block is ("v", part) for a single vertex, ("c3", parts[, sizes])
    for a three-class cycle blow-up with class i inside the named part, or
    ("c4", parts[, sizes]) for a four-class cycle whose classes alternate
    between the two named parts.  Part labels are arbitrary hashables;
    partition order follows first appearance.  Every cross-block pair in
    different parts points from the earlier block to the later one, so the
    blocks are exactly the ordered strong components.
    """
    part_members: dict = {}
    dense_entries: list[tuple[int, int]] = []
    block_vertices: list[list[int]] = []
    next_id = 0

    def add_vertex(label) -> int:
        nonlocal next_id
        v = next_id
        next_id += 1
        part_members.setdefault(label, []).append(v)
        return v

    for block in blocks:
        kind = block[0]
        if kind == "v":
            block_vertices.append([add_vertex(block[1])])
            continue
        if kind == "c3":
            labels = block[1]
            sizes = block[2] if len(block) > 2 else (1, 1, 1)
            if len(labels) != 3 or len(sizes) != 3:
                raise ValueError("c3 blocks need three parts and three sizes")
            classes = [[add_vertex(labels[i]) for _ in range(sizes[i])] for i in range(3)]
        elif kind == "c4":
            labels = block[1]
            sizes = block[2] if len(block) > 2 else (1, 1, 1, 1)
            if len(labels) != 2 or len(sizes) != 4:
                raise ValueError("c4 blocks need two parts and four sizes")
            classes = [
                [add_vertex(labels[i % 2]) for _ in range(sizes[i])] for i in range(4)
            ]
        else:
            raise ValueError(f"unknown block kind {kind!r}")
        for i, cls in enumerate(classes):
            for u in cls:
                for v in classes[(i + 1) % len(classes)]:
                    dense_entries.append((u, v))
        block_vertices.append([v for cls in classes for v in cls])

    n = next_id
    dense = np.zeros((n, n), dtype=np.uint8)
    for u, v in dense_entries:
        dense[u, v] = 1
    part_of = {}
    for label, members in part_members.items():
        for v in members:
            part_of[v] = label
    for bi in range(len(block_vertices)):
        for bj in range(bi + 1, len(block_vertices)):
            for u in block_vertices[bi]:
                for v in block_vertices[bj]:
                    if part_of[u] != part_of[v]:
                        dense[u, v] = 1
    partition = [sorted(members) for members in part_members.values()]
    return validate(BoolMatrix.from_dense(dense), partition)


def example_tripartite() -> Tournament:
    """The six-vertex tripartite workhorse used across the docs and tests.

    Parts {0}, {1, 2, 3}, {4, 5}; vertex 0 beats everyone, and the rest
    form a strong component whose four imprimitivity classes are {1, 2},
    {5}, {3}, {4}.  Its competition-graph sequence is constant from the
    first step.
    """
    dense = np.zeros((6, 6), dtype=np.uint8)
    for v in range(1, 6):
        dense[0, v] = 1
    for u, v in [(1, 5), (2, 5), (3, 4), (4, 1), (4, 2), (5, 3)]:
        dense[u, v] = 1
    return validate(BoolMatrix.from_dense(dense), [[0], [1, 2, 3], [4, 5]])
