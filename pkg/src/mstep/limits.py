"""Structural construction of competition-graph limits, and the oracle
cross-check.

For a sink-free multipartite tournament the competition-graph sequence
converges, and the limit is one of four shapes picked by the index of
imprimitivity kappa of the last strong component Q_s: the complete graph
(kappa 1), G1 (kappa 2), G2 (kappa 4), or G3 (kappa 3).  Each shape is a
fixed arrangement of up to seven cliques K(1)..K(7), some possibly absent,
with complete joins exactly between the slot pairs listed in ``LINES``:

    G1:  1-2 1-3
    G2:  1-{2..7}  2-4 2-5  3-6 3-7
    G3:  1-{2..7}  2-3 2-4 3-4  2-5 2-6  3-5 3-7  4-6 4-7

The constructor fills the slots from the component structure alone, in
O(n^2) after the strong-component pass.  :func:`verify_against_oracle`
compares the result against the bit-matrix iteration from
:mod:`mstep.boolmat`, which is ground truth by definition.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .boolmat import BoolMatrix, competition_profile, zero_diagonal
from .digraph import ComponentStructure, Tournament, ordered_components, sinks
from .imprimitivity import (
    Alignment,
    AlignmentError,
    align_to_partition,
    is_unusual,
    kappa_and_sets,
)

LINES = {
    "Complete": frozenset(),
    "G1": frozenset({(1, 2), (1, 3)}),
    "G2": frozenset(
        {(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 4), (2, 5), (3, 6), (3, 7)}
    ),
    "G3": frozenset(
        {(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7),
         (2, 3), (2, 4), (3, 4), (2, 5), (2, 6), (3, 5), (3, 7), (4, 6), (4, 7)}
    ),
}

SLOT_COUNT = {"Complete": 1, "G1": 3, "G2": 7, "G3": 7}

TEMPLATE = {"Complete": "J", "G1": "M1", "G2": "M2", "G3": "M3"}


class SinksError(ValueError):
    """Limit construction refused: the tournament has sinks, so the
    competition-graph sequence need not converge.  The oracle still reports
    the eventual period of such inputs."""

    def __init__(self, sink_vertices):
        super().__init__(f"tournament has sinks: {list(sink_vertices)}")
        self.sinks = tuple(sink_vertices)


class ConsistencyError(RuntimeError):
    """Internal cross-check failed; indicates a constructor bug."""


@dataclass(frozen=True)
class LimitTrace:
    """Which classification branch fired, with the run boundaries t, t1, t2
    (1-based component indices, 0 meaning absent) where they apply."""

    branch: str
    s: int
    kappa: int
    t: int | None = None
    t1: int | None = None
    t2: int | None = None
    unusual: bool | None = None
    part_order: tuple[int, ...] | None = None
    rotation: int = 0


@dataclass(frozen=True)
class LimitReport:
    """Exact limit of the competition-graph sequence.

    ``cliques`` maps present slot numbers to vertex tuples; the slots are
    pairwise disjoint and cover all vertices.  ``edges`` is the symmetric
    loop-free adjacency matrix spanned by the slot cliques plus the
    complete joins of the label's line pattern.  ``cindex``/``cperiod``
    are filled in when the oracle has been consulted.
    """

    label: str
    cliques: dict[int, tuple[int, ...]]
    edges: BoolMatrix
    cindex: int | None
    cperiod: int | None
    trace: LimitTrace


@dataclass(frozen=True)
class BlockForm:
    """Vertex order displaying (edges + I) as the slot template blockwise.

    ``block_sizes`` is aligned with the template's slots; None marks an
    absent block.
    """

    permutation: tuple[int, ...]
    template: str
    block_sizes: tuple[int | None, ...]


@dataclass(frozen=True)
class Verdict:
    """Outcome of the constructor-versus-oracle comparison."""

    status: str  # "equal" | "mismatch" | "sinks"
    cindex: int
    cperiod: int
    diff: tuple[tuple[int, int], ...] = ()
    constructor_refused: bool | None = None
    note: str = ""


def _edges_from_slots(n: int, label: str, cliques: dict) -> BoolMatrix:
    dense = np.zeros((n, n), dtype=np.uint8)
    for verts in cliques.values():
        ix = np.asarray(verts)
        dense[np.ix_(ix, ix)] = 1
    for a, b in LINES[label]:
        if a in cliques and b in cliques:
            ia = np.asarray(cliques[a])
            ib = np.asarray(cliques[b])
            dense[np.ix_(ia, ib)] = 1
            dense[np.ix_(ib, ia)] = 1
    np.fill_diagonal(dense, 0)
    return BoolMatrix.from_dense(dense)


def _finish(label: str, n: int, cliques: dict, trace: LimitTrace) -> LimitReport:
    present = {slot: tuple(v) for slot, v in cliques.items() if len(v) > 0}
    covered: set[int] = set()
    for verts in present.values():
        if covered & set(verts):
            raise ConsistencyError(f"overlapping slots in {label} report")
        covered |= set(verts)
    if len(covered) != n:
        raise ConsistencyError(f"slots cover {len(covered)} of {n} vertices")
    return LimitReport(label, present, _edges_from_slots(n, label, present), None, None, trace)


def _class_part(t: Tournament, verts) -> int:
    parts = {t.part_index[v] for v in verts}
    if len(parts) != 1:
        raise AlignmentError(f"class {tuple(verts)} straddles partite sets")
    return parts.pop()


def construct_limit(t: Tournament) -> LimitReport:
    """Build the exact limit of the competition-graph sequence of ``t``.

    Dispatch is on kappa of the last strong component: 1 gives the complete
    graph; a single strong component gives disjoint cliques on its classes;
    otherwise kappa 2/4 route through the bipartite-type assembly and
    kappa 3 through its own case analysis.  Tournaments with sinks are
    refused with :class:`SinksError` naming the sink vertices.
    """
    sink_vertices = sinks(t)
    if sink_vertices:
        raise SinksError(sink_vertices)
    structure = ordered_components(t)
    s = len(structure.components)
    qs = structure.components[-1]
    data = kappa_and_sets(t, qs)
    if data.kappa == 1:
        trace = LimitTrace("complete", s=s, kappa=1)
        return _finish("Complete", t.n, {1: tuple(range(t.n))}, trace)
    if s == 1:
        u = data.sets
        if data.kappa == 2:
            label, cliques = "G1", {2: u[0], 3: u[1]}
        elif data.kappa == 3:
            label, cliques = "G3", {5: u[0], 6: u[1], 7: u[2]}
        else:
            label, cliques = "G2", {4: u[0], 5: u[2], 6: u[1], 7: u[3]}
        trace = LimitTrace(f"strong:{label.lower()}", s=1, kappa=data.kappa)
        return _finish(label, t.n, cliques, trace)
    alignment = align_to_partition(data, t)
    if data.kappa in (2, 4):
        return assemble_bipartite_type(t, structure, alignment)
    return assemble_kappa3(t, structure, alignment)


def assemble_bipartite_type(
    t: Tournament, structure: ComponentStructure, alignment: Alignment
) -> LimitReport:
    """Fill the G1/G2 slots for kappa(Q_s) in {2, 4} with s >= 2.

    After alignment Q_s lives inside partite sets V_1 and V_2.  With k >= 3
    there is a last component index t whose component leaves V_1 union V_2;
    everything up to t joins everything (slot K1).  The remaining vertices
    split by partite set into A_1 and A_2, which become K2/K3 (kappa 2) or
    K2/K3 minus Q_s plus the four classes in slots K4..K7 (kappa 4).
    """
    tt = alignment.tournament
    data = alignment.data
    comps = structure.components
    s = len(comps)
    pos = tt.part_index
    qs_set = set(comps[-1])

    t_idx = 0
    if tt.k > 2:
        for i in range(s - 1, 0, -1):
            if any(pos[v] >= 2 for v in comps[i - 1]):
                t_idx = i
                break
        if t_idx == 0:
            raise ConsistencyError("k >= 3 but no component leaves V1/V2")
    head = tuple(sorted(v for comp in comps[:t_idx] for v in comp))
    tail = [v for comp in comps[t_idx:] for v in comp]
    a1 = tuple(sorted(v for v in tail if pos[v] == 0))
    a2 = tuple(sorted(v for v in tail if pos[v] == 1))

    if data.kappa == 2:
        label = "G1"
        cliques = {1: head, 2: a1, 3: a2}
    else:
        u = data.sets
        label = "G2"
        cliques = {
            1: head,
            2: tuple(v for v in a1 if v not in qs_set),
            3: tuple(v for v in a2 if v not in qs_set),
            4: u[0],
            5: u[2],
            6: u[1],
            7: u[3],
        }
    flavor = "bipartite" if tt.k == 2 else "multipartite"
    trace = LimitTrace(
        f"{label.lower()}:{flavor}",
        s=s,
        kappa=data.kappa,
        t=t_idx,
        part_order=alignment.part_order,
    )
    return _finish(label, tt.n, cliques, trace)


def assemble_kappa3(
    t: Tournament, structure: ComponentStructure, alignment: Alignment
) -> LimitReport:
    """Fill the G3 slots for kappa(Q_s) = 3 with s >= 2.

    Everything outside Q_s forms one clique; the case analysis decides
    which classes of Q_s each earlier run of components joins.  The unusual
    pair keeps the three classes of Q_{s-1} in separate slots (K2, K3, K4
    carry U_1, U_3, U_2).  A nontrivial, not-unusual Q_{s-1} collapses all
    outside vertices into K1.  With trivial Q_{s-1} the outside splits into
    at most three runs: components leaving V1/V2/V3 (K1, join everything),
    a run confined to the partite set of the vertex right before Q_s (K4,
    misses one class), and possibly a run confined to another partite set
    (K2, misses a different class); the boundaries are the 1-based indices
    t, t1, t2 reported in the trace.
    """
    tt = alignment.tournament
    data = alignment.data
    comps = structure.components
    s = len(comps)
    qprev = comps[-2]
    qs = comps[-1]
    u = list(data.sets)
    n = tt.n

    def union(lo: int, hi: int) -> tuple[int, ...]:
        return tuple(sorted(v for i in range(lo, hi + 1) for v in comps[i - 1]))

    if is_unusual(tt, qprev, qs):
        prev = kappa_and_sets(tt, qprev)
        owner = [_class_part(tt, c) for c in prev.sets]
        shift = next(
            c for c in range(3) if all(owner[(i + c) % 3] == i for i in range(3))
        )
        pu = [prev.sets[(i + shift) % 3] for i in range(3)]
        cliques = {
            1: union(1, s - 2),
            2: pu[0],
            3: pu[2],
            4: pu[1],
            5: u[0],
            6: u[1],
            7: u[2],
        }
        trace = LimitTrace(
            "g3:unusual", s=s, kappa=3, unusual=True, part_order=alignment.part_order
        )
        return _finish("G3", n, cliques, trace)

    if len(qprev) >= 2:
        cliques = {1: union(1, s - 1), 5: u[0], 6: u[1], 7: u[2]}
        trace = LimitTrace(
            "g3:prev-nontrivial",
            s=s,
            kappa=3,
            unusual=False,
            part_order=alignment.part_order,
        )
        return _finish("G3", n, cliques, trace)

    # Q_{s-1} is a single vertex.
    pos = list(tt.part_index)
    t_idx = 0
    for i in range(s - 1, 0, -1):
        if any(pos[v] >= 3 for v in comps[i - 1]):
            t_idx = i
            break
    common = dict(s=s, kappa=3, unusual=False, part_order=alignment.part_order)

    if t_idx == s - 1:
        cliques = {1: union(1, s - 1), 5: u[0], 6: u[1], 7: u[2]}
        trace = LimitTrace("g3:trivial:t=s-1", t=t_idx, **common)
        return _finish("G3", n, cliques, trace)

    # Rotate partite positions 0..2 so the vertex before Q_s sits in V_2
    # (position 1); the class list rotates in lockstep.
    vs1 = qprev[0]
    rotation = (1 - pos[vs1]) % 3
    if rotation:
        pos = [(p + rotation) % 3 if p < 3 else p for p in pos]
        u = [u[(p - rotation) % 3] for p in range(3)]
    common["rotation"] = rotation

    mid_parts = {pos[v] for i in range(t_idx + 1, s) for v in comps[i - 1]}
    if len(mid_parts) == 1:
        if mid_parts != {1}:
            raise ConsistencyError("single-part run missed the normalized position")
        cliques = {
            1: union(1, t_idx),
            4: union(t_idx + 1, s - 1),
            5: u[0],
            6: u[1],
            7: u[2],
        }
        trace = LimitTrace("g3:trivial:single-run", t=t_idx, **common)
        return _finish("G3", n, cliques, trace)

    t1 = next(
        i for i in range(s - 1, t_idx, -1) if any(pos[v] != 1 for v in comps[i - 1])
    )
    q_t1 = comps[t1 - 1]
    if len(q_t1) >= 2 or pos[q_t1[0]] == 2:
        branch = "g3:trivial:case1" if len(q_t1) >= 2 else "g3:trivial:case2-1"
        cliques = {
            1: union(1, t1),
            4: union(t1 + 1, s - 1),
            5: u[0],
            6: u[1],
            7: u[2],
        }
        trace = LimitTrace(branch, t=t_idx, t1=t1, **common)
        return _finish("G3", n, cliques, trace)

    if pos[q_t1[0]] != 0:
        raise ConsistencyError("trivial boundary component in an impossible part")
    start = t1
    while start - 1 > t_idx and all(pos[v] == 0 for v in comps[start - 2]):
        start -= 1
    t2 = start - 1
    cliques = {
        1: union(1, t2),
        2: union(t2 + 1, t1),
        4: union(t1 + 1, s - 1),
        5: u[0],
        6: u[1],
        7: u[2],
    }
    trace = LimitTrace("g3:trivial:case2-2", t=t_idx, t1=t1, t2=t2, **common)
    return _finish("G3", n, cliques, trace)


def block_form(report: LimitReport) -> BlockForm:
    """Slot-by-slot vertex order plus a verified template match.

    Permuting rows and columns of (edges + I) by the returned order must
    reproduce the label's template with absent blocks skipped; anything
    else raises :class:`ConsistencyError`.
    """
    label = report.label
    count = SLOT_COUNT[label]
    perm: list[int] = []
    sizes: list[int | None] = []
    present: list[tuple[int, int]] = []
    for slot in range(1, count + 1):
        verts = report.cliques.get(slot, ())
        if verts:
            sizes.append(len(verts))
            present.append((slot, len(verts)))
            perm.extend(verts)
        else:
            sizes.append(None)
    n = report.edges.n
    got = report.edges.to_dense().astype(np.uint8)
    np.fill_diagonal(got, 1)
    got = got[np.ix_(perm, perm)]
    expected = np.zeros((n, n), dtype=np.uint8)
    off_a = 0
    for slot_a, size_a in present:
        off_b = 0
        for slot_b, size_b in present:
            key = (min(slot_a, slot_b), max(slot_a, slot_b))
            if slot_a == slot_b or key in LINES[label]:
                expected[off_a : off_a + size_a, off_b : off_b + size_b] = 1
            off_b += size_b
        off_a += size_a
    if not np.array_equal(got, expected):
        raise ConsistencyError(f"(edges + I) does not match template {TEMPLATE[label]}")
    return BlockForm(tuple(perm), TEMPLATE[label], tuple(sizes))


def with_profile(report: LimitReport, cindex: int, cperiod: int) -> LimitReport:
    return dataclasses.replace(report, cindex=cindex, cperiod=cperiod)


def verify_against_oracle(t: Tournament) -> Verdict:
    """Compare the structural limit against the bit-matrix iteration.

    Sink-free: the oracle must report period 1 and its zero-diagonal limit
    must equal the constructed edge set, bit for bit; any difference comes
    back as a sorted symmetric-difference edge list.  With sinks: the
    oracle profile is reported and the verdict records whether the
    constructor refused as it must.
    """
    prof = competition_profile(t.arcs)
    sink_vertices = sinks(t)
    if sink_vertices:
        try:
            construct_limit(t)
            refused = False
        except SinksError:
            refused = True
        return Verdict(
            "sinks", prof.cindex, prof.cperiod, constructor_refused=refused
        )
    report = construct_limit(t)
    if prof.cperiod != 1:
        return Verdict(
            "mismatch",
            prof.cindex,
            prof.cperiod,
            note="oracle period is not 1 on a sink-free tournament",
        )
    want = zero_diagonal(prof.limit)
    if want == report.edges:
        return Verdict("equal", prof.cindex, prof.cperiod)
    delta = want.to_dense() != report.edges.to_dense()
    diff = tuple(
        (int(u), int(v)) for u, v in np.argwhere(np.triu(delta, k=1))
    )
    return Verdict("mismatch", prof.cindex, prof.cperiod, diff=diff)


def report_json(report: LimitReport, block: BlockForm | None = None) -> dict:
    """JSON-ready dict for a report (schema: docs/report.schema.json)."""
    dense = report.edges.to_dense()
    edges = [[int(u), int(v)] for u, v in np.argwhere(np.triu(dense, k=1))]
    out = {
        "label": report.label,
        "cliques": {f"K{slot}": list(report.cliques[slot]) for slot in sorted(report.cliques)},
        "edges": edges,
        "cindex": report.cindex,
        "cperiod": report.cperiod,
    }
    if block is not None:
        out["permutation"] = list(block.permutation)
        out["template"] = block.template
        out["block_sizes"] = [s if s is None else int(s) for s in block.block_sizes]
    return out


def to_dot(report: LimitReport) -> str:
    """Graphviz rendering of the limit with slots as clusters."""
    lines = ["graph limit {", "  node [shape=circle];"]
    for slot in sorted(report.cliques):
        lines.append(f"  subgraph cluster_K{slot} {{")
        lines.append(f'    label = "K({slot})";')
        for v in report.cliques[slot]:
            lines.append(f"    v{v};")
        lines.append("  }")
    dense = report.edges.to_dense()
    for u, v in np.argwhere(np.triu(dense, k=1)):
        lines.append(f"  v{int(u)} -- v{int(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
