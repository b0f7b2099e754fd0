"""Index of imprimitivity and its vertex classes for strong components.

For a nontrivial strongly connected digraph, ``kappa`` is the gcd of the
lengths of its closed directed walks.  The vertex set splits into kappa
cyclically ordered classes U_1..U_kappa with every arc running from U_i to
U_{i+1} (indices mod kappa).  Inside a multipartite tournament each class
lies within a single partite set, which lets :func:`align_to_partition`
relabel the partite sets into the canonical position the limit constructor
expects:

    kappa = 2 or 3:  V_i meets the component exactly in U_i;
    kappa = 4:       V_i meets the component in U_i together with U_{i+2}.

Two consecutive components both with kappa = 3 form an *unusual* pair when
some cyclic shift matches their classes partite-set-wise; that is the one
configuration where the earlier component stays split in the limit.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .digraph import Tournament


class AlignmentError(RuntimeError):
    """Internal inconsistency: the classes cannot be aligned to the
    partition.  Indicates a bug upstream, not bad user input."""


@dataclass(frozen=True)
class ImprimitivityData:
    """kappa plus the cyclically ordered classes; the class containing the
    smallest vertex id comes first."""

    kappa: int
    sets: tuple[tuple[int, ...], ...]

    def vertices(self) -> frozenset[int]:
        return frozenset(v for u in self.sets for v in u)


def kappa_and_sets(t: Tournament, component: Iterable[int]) -> ImprimitivityData:
    """Compute kappa and the imprimitivity classes of a strong component.

    BFS from the smallest vertex id assigns levels; kappa is the gcd of
    level(u) + 1 - level(v) over the internal arcs (u, v), and class j
    collects the vertices with level congruent to j - 1 mod kappa.  The
    root has level 0, so it always lands in U_1.
    """
    comp = sorted(set(int(v) for v in component))
    if len(comp) < 2:
        raise ValueError("component must be nontrivial (at least 2 vertices)")
    inside = set(comp)
    dense = t.arcs.to_dense()
    adj = {
        v: [int(w) for w in np.flatnonzero(dense[v]) if int(w) in inside]
        for v in comp
    }
    root = comp[0]

    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in level:
                level[w] = level[u] + 1
                queue.append(w)
    if len(level) != len(comp):
        raise ValueError("component is not strongly connected")
    reach_back = {root}
    queue = deque([root])
    radj = {v: [] for v in comp}
    for u in comp:
        for w in adj[u]:
            radj[w].append(u)
    while queue:
        u = queue.popleft()
        for w in radj[u]:
            if w not in reach_back:
                reach_back.add(w)
                queue.append(w)
    if len(reach_back) != len(comp):
        raise ValueError("component is not strongly connected")

    g = 0
    for u in comp:
        for w in adj[u]:
            g = math.gcd(g, level[u] + 1 - level[w])
    if g <= 0:
        raise ValueError("component has no closed walk; not strongly connected")

    groups: list[list[int]] = [[] for _ in range(g)]
    for v in comp:
        groups[level[v] % g].append(v)
    return ImprimitivityData(g, tuple(tuple(sorted(grp)) for grp in groups))


@dataclass(frozen=True)
class Alignment:
    """Canonical alignment of the last component's classes with the parts.

    ``tournament`` carries the reordered partition; ``part_order`` maps the
    new partite position to the original index, so reports stay traceable
    to the input labels.
    """

    data: ImprimitivityData
    tournament: Tournament
    part_order: tuple[int, ...]


def _part_of_class(t: Tournament, u_set: tuple[int, ...]) -> int:
    parts = {t.part_index[v] for v in u_set}
    if len(parts) != 1:
        raise AlignmentError(f"class {u_set} straddles partite sets {sorted(parts)}")
    return parts.pop()


def align_to_partition(data: ImprimitivityData, t: Tournament) -> Alignment:
    """Reorder the partite sets so the classes land in canonical position.

    The class rotation stays as computed (smallest vertex id in U_1); only
    the partition order moves.  kappa = 1 is a no-op.  Failure to align is
    an internal error: inside a valid tournament every class sits in one
    partite set and the required pairings always exist.
    """
    if data.kappa == 1:
        return Alignment(data, t, tuple(range(t.k)))
    owner = [_part_of_class(t, u) for u in data.sets]
    if data.kappa in (2, 3):
        lead = owner
        if len(set(lead)) != data.kappa:
            raise AlignmentError(f"classes share partite sets: {owner}")
    elif data.kappa == 4:
        if owner[0] != owner[2] or owner[1] != owner[3] or owner[0] == owner[1]:
            raise AlignmentError(
                f"kappa=4 classes must pair up across two partite sets: {owner}"
            )
        lead = [owner[0], owner[1]]
    else:
        raise AlignmentError(f"cannot align kappa={data.kappa}")
    order = lead + [i for i in range(t.k) if i not in lead]
    new_partition = tuple(t.partition[i] for i in order)
    part_index = [0] * t.n
    for pos, part in enumerate(new_partition):
        for v in part:
            part_index[v] = pos
    aligned = Tournament(t.n, t.arcs, new_partition, tuple(part_index))

    comp = data.vertices()
    if data.kappa in (2, 3):
        for i, u_set in enumerate(data.sets):
            if set(aligned.partition[i]) & comp != set(u_set):
                raise AlignmentError(f"partite set {i + 1} is not class {i + 1}")
    else:
        for i in range(2):
            merged = set(data.sets[i]) | set(data.sets[i + 2])
            if set(aligned.partition[i]) & comp != merged:
                raise AlignmentError(
                    f"partite set {i + 1} is not the union of classes {i + 1} "
                    f"and {i + 3}"
                )
    return Alignment(data, aligned, tuple(order))


def partite_related(t: Tournament, x: Iterable[int], y: Iterable[int]) -> bool:
    """True when both vertex sets lie inside the same partite set of ``t``.

    Each input must be contained in a single partite set.
    """
    xs, ys = list(x), list(y)
    px = {t.part_index[v] for v in xs}
    py = {t.part_index[v] for v in ys}
    if len(px) != 1:
        raise ValueError(f"set {sorted(xs)} straddles partite sets")
    if len(py) != 1:
        raise ValueError(f"set {sorted(ys)} straddles partite sets")
    return px == py


def is_unusual(
    t: Tournament, q_prev: Iterable[int], q_last: Iterable[int]
) -> bool:
    """Detect the unusual configuration of two consecutive components.

    True exactly when both components have kappa = 3 and some shift
    j in {0, 1, 2} makes U_i of the earlier component partite-related to
    U_{i+j} of the later one for every i.  Trivial components and other
    kappa values are never unusual.  All three shifts are checked, so the
    answer does not depend on how either class list happens to be rotated.
    """
    prev_list, last_list = sorted(set(q_prev)), sorted(set(q_last))
    if len(prev_list) < 2 or len(last_list) < 2:
        return False
    prev = kappa_and_sets(t, prev_list)
    last = kappa_and_sets(t, last_list)
    if prev.kappa != 3 or last.kappa != 3:
        return False
    p_owner = [_part_of_class(t, u) for u in prev.sets]
    l_owner = [_part_of_class(t, u) for u in last.sets]
    return any(
        all(p_owner[i] == l_owner[(i + j) % 3] for i in range(3)) for j in range(3)
    )
