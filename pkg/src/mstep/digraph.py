"""Multipartite tournaments: validation, partition inference, sinks, and
strong components in topological order.

A tournament couples a loop-free arc matrix with a partition of the
vertices into k >= 2 independent sets such that every pair of vertices in
different parts carries exactly one arc.  The strong components come back
ordered so that all cross-component arcs run from lower to higher index;
the last component is the one every walk eventually falls into.

Also houses the edge-list text format (header "n k", one line per partite
set, one "u v" line per arc) and its JSON mirror.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .boolmat import BoolMatrix, ParseError


class ValidationError(ValueError):
    """A tournament invariant failed; ``kind`` names the violation and
    ``pair`` the offending vertices (or part data for partition problems)."""

    def __init__(self, kind: str, pair, message: str):
        super().__init__(message)
        self.kind = kind
        self.pair = pair


@dataclass(frozen=True)
class Tournament:
    """A validated multipartite tournament; build via :func:`validate`."""

    n: int
    arcs: BoolMatrix
    partition: tuple[tuple[int, ...], ...]
    part_index: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.partition)


@dataclass(frozen=True)
class ComponentStructure:
    """Strong components Q_1..Q_s in topological order.

    ``condensation[i]`` holds the successor component indices of component
    i.  ``multiple_sinks`` flags a condensation with more than one sink,
    which can only happen when the tournament itself has sinks; the order
    returned is then one valid choice among several.
    """

    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]
    condensation: tuple[tuple[int, ...], ...]
    multiple_sinks: bool


def validate(arcs: BoolMatrix, partition: Sequence[Iterable[int]]) -> Tournament:
    """Check the tournament invariants and return the validated instance.

    Raises :class:`ValidationError` with kind "bad-partition", "loop",
    "same-part-arc", "missing-cross-arc" or "double-cross-arc"; the last
    four name the offending vertex pair.
    """
    n = arcs.n
    parts = tuple(tuple(sorted(set(int(v) for v in p))) for p in partition)
    if len(parts) < 2:
        raise ValidationError("bad-partition", parts, "need at least 2 partite sets")
    seen: set[int] = set()
    for p in parts:
        if not p:
            raise ValidationError("bad-partition", p, "empty partite set")
        for v in p:
            if not 0 <= v < n:
                raise ValidationError("bad-partition", p, f"vertex {v} out of range")
            if v in seen:
                raise ValidationError("bad-partition", p, f"vertex {v} appears twice")
            seen.add(v)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise ValidationError("bad-partition", missing, f"vertices {missing} uncovered")

    part_index = [0] * n
    for idx, p in enumerate(parts):
        for v in p:
            part_index[v] = idx

    d = arcs.to_dense().astype(bool)
    diag = np.flatnonzero(np.diagonal(d))
    if diag.size:
        v = int(diag[0])
        raise ValidationError("loop", (v, v), f"loop at vertex {v}")

    pi = np.asarray(part_index)
    same = pi[:, None] == pi[None, :]
    np.fill_diagonal(same, False)
    either = d | d.T
    bad = same & either
    if bad.any():
        u, v = (int(x) for x in np.argwhere(bad)[0])
        raise ValidationError(
            "same-part-arc", (u, v), f"arc between {u} and {v} inside one partite set"
        )
    cross = ~same
    np.fill_diagonal(cross, False)
    missing_arc = cross & ~either
    if missing_arc.any():
        u, v = (int(x) for x in np.argwhere(missing_arc)[0])
        raise ValidationError(
            "missing-cross-arc", (u, v), f"no arc between cross-part pair {u}, {v}"
        )
    double = cross & d & d.T
    if double.any():
        u, v = (int(x) for x in np.argwhere(double)[0])
        raise ValidationError(
            "double-cross-arc", (u, v), f"arcs both ways between {u} and {v}"
        )
    return Tournament(n, arcs, parts, tuple(part_index))


def infer_partition(arcs: BoolMatrix) -> tuple[tuple[int, ...], ...]:
    """Recover the partite sets of a loop-free arc matrix.

    The parts are the connected components of the complement of the
    underlying undirected graph; if the underlying graph is not complete
    multipartite some component contains an adjacent pair, which is
    reported.  Orientation conflicts are left for :func:`validate`.
    """
    n = arcs.n
    d = arcs.to_dense().astype(bool)
    diag = np.flatnonzero(np.diagonal(d))
    if diag.size:
        v = int(diag[0])
        raise ValidationError("loop", (v, v), f"loop at vertex {v}")
    adj = d | d.T
    comp_adj = ~adj
    np.fill_diagonal(comp_adj, False)

    label = [-1] * n
    parts: list[list[int]] = []
    for root in range(n):
        if label[root] != -1:
            continue
        idx = len(parts)
        members = [root]
        label[root] = idx
        queue = [root]
        while queue:
            u = queue.pop()
            for w in np.flatnonzero(comp_adj[u]):
                w = int(w)
                if label[w] == -1:
                    label[w] = idx
                    members.append(w)
                    queue.append(w)
        parts.append(sorted(members))

    for members in parts:
        if len(members) < 2:
            continue
        block = adj[np.ix_(members, members)]
        if block.any():
            i, j = np.argwhere(block)[0]
            u, v = members[int(i)], members[int(j)]
            raise ValidationError(
                "not-multipartite",
                (u, v),
                f"underlying graph is not complete multipartite: "
                f"{u} and {v} are adjacent but fall into the same inferred part",
            )
    return tuple(tuple(p) for p in parts)


def tournament_from_arcs(arcs: BoolMatrix) -> Tournament:
    """Validate an arc matrix against its inferred partition."""
    return validate(arcs, infer_partition(arcs))


def sinks(t: Tournament) -> tuple[int, ...]:
    """Vertices with no outgoing arcs."""
    dense = t.arcs.to_dense()
    return tuple(int(v) for v in np.flatnonzero(~dense.any(axis=1)))


def _tarjan(adj: list[list[int]], n: int) -> list[list[int]]:
    """Iterative Tarjan; returns the strong components in discovery order."""
    indices = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    out: list[list[int]] = []
    for root in range(n):
        if indices[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                indices[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if indices[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], indices[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == indices[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def ordered_components(t: Tournament) -> ComponentStructure:
    """Strong components topologically ordered, deterministically.

    Among valid topological orders, ties are broken by the smallest vertex
    id contained in a component, so repeated runs and golden files agree.
    """
    dense = t.arcs.to_dense()
    adj = [[int(w) for w in np.flatnonzero(dense[v])] for v in range(t.n)]
    comps = _tarjan(adj, t.n)
    comp_of = [0] * t.n
    for idx, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = idx
    nc = len(comps)
    succ: list[set[int]] = [set() for _ in range(nc)]
    for v in range(t.n):
        cv = comp_of[v]
        for w in adj[v]:
            cw = comp_of[w]
            if cv != cw:
                succ[cv].add(cw)

    indeg = [0] * nc
    for cs in succ:
        for c in cs:
            indeg[c] += 1
    heap = [(min(comp), idx) for idx, comp in enumerate(comps) if indeg[idx] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        _, idx = heapq.heappop(heap)
        order.append(idx)
        for c in succ[idx]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, (min(comps[c]), c))

    new_pos = {old: new for new, old in enumerate(order)}
    components = tuple(tuple(sorted(comps[old])) for old in order)
    component_of = tuple(new_pos[comp_of[v]] for v in range(t.n))
    condensation = tuple(
        tuple(sorted(new_pos[c] for c in succ[old])) for old in order
    )
    sink_count = sum(1 for cs in condensation if not cs)
    return ComponentStructure(components, component_of, condensation, sink_count > 1)


# --- interchange formats ---------------------------------------------------


def parse_edge_list(text: str) -> Tournament:
    """Parse the edge-list format: "n k", k partite-set lines, arc lines."""
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(1, f"expected 'n k', got {lines[0]!r}")
    try:
        n, k = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(1, f"expected integers, got {lines[0]!r}") from None
    if len(lines) < 1 + k:
        raise ParseError(len(lines) + 1, f"expected {k} partite-set lines")
    partition = []
    for i in range(k):
        try:
            partition.append([int(x) for x in lines[1 + i].split()])
        except ValueError:
            raise ParseError(2 + i, f"bad partite set {lines[1 + i]!r}") from None
    dense = np.zeros((n, n), dtype=np.uint8)
    for lineno in range(1 + k, len(lines)):
        raw = lines[lineno].strip()
        if not raw:
            continue
        pieces = raw.split()
        if len(pieces) != 2:
            raise ParseError(lineno + 1, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(pieces[0]), int(pieces[1])
        except ValueError:
            raise ParseError(lineno + 1, f"expected integers, got {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno + 1, f"arc {u} {v} out of range")
        dense[u, v] = 1
    return validate(BoolMatrix.from_dense(dense), partition)


def format_edge_list(t: Tournament) -> str:
    lines = [f"{t.n} {t.k}"]
    for part in t.partition:
        lines.append(" ".join(str(v) for v in part))
    dense = t.arcs.to_dense()
    for u in range(t.n):
        for v in np.flatnonzero(dense[u]):
            lines.append(f"{u} {int(v)}")
    return "\n".join(lines) + "\n"


def tournament_to_json_dict(t: Tournament) -> dict:
    dense = t.arcs.to_dense()
    arcs = [[u, int(v)] for u in range(t.n) for v in np.flatnonzero(dense[u])]
    return {"n": t.n, "partition": [list(p) for p in t.partition], "arcs": arcs}


def tournament_from_json_dict(data: dict) -> Tournament:
    try:
        n = int(data["n"])
        partition = data["partition"]
        arcs = data["arcs"]
    except (KeyError, TypeError) as exc:
        raise ParseError(1, f"missing or malformed field: {exc}") from None
    dense = np.zeros((n, n), dtype=np.uint8)
    for u, v in arcs:
        dense[int(u), int(v)] = 1
    return validate(BoolMatrix.from_dense(dense), partition)


def parse_json(text: str) -> Tournament:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from None
    return tournament_from_json_dict(data)
