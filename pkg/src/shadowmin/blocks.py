"""Block structure of the polygon adjacency multigraph.

Polygons are nodes; every double point contributes one edge joining the
two polygons whose corners meet there.  The solvable shapes are the
cactus ones: every biconnected component is a bridge or a simple cycle,
and each cycle is an annular ring of beads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .embed import (_face_of_map, outer_face_index, union_bounded_faces)
from .model import (DecoratedShadow, ShadowError, ShadowIndex, faces,
                    validate_shadow)


class ShadowKind(str, Enum):
    TREE_LIKE = "tree-like"
    TREE_NECKLACE = "tree-necklace"
    GENERAL = "general"


@dataclass(frozen=True)
class Ring:
    """A cycle in the block graph: joints[i] is the vertex shared by
    beads[i] and beads[(i+1) % len]."""

    beads: tuple[int, ...]
    joints: tuple[int, ...]


@dataclass(frozen=True)
class BlockReport:
    kind: ShadowKind
    edges: tuple[tuple[int, int], ...]
    rings: tuple[Ring, ...]
    note: str = ""


def block_edges(shadow: DecoratedShadow,
                index: ShadowIndex) -> tuple[tuple[int, int], ...]:
    out = []
    for v in range(shadow.n_vertices):
        (p1, _), (p2, _) = index.vertex_corners[v]
        out.append((p1, p2))
    return tuple(out)


def _biconnected_components(n_nodes: int, edges) -> list[list[int]]:
    """Edge ids grouped by biconnected component (iterative lowpoint DFS,
    multigraph-safe).  Self-loop edges must be filtered out beforehand."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for eid, (a, b) in enumerate(edges):
        adj[a].append((b, eid))
        adj[b].append((a, eid))
    disc = [-1] * n_nodes
    low = [0] * n_nodes
    comps: list[list[int]] = []
    estack: list[int] = []
    timer = 0
    for root in range(n_nodes):
        if disc[root] >= 0:
            continue
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            node, in_eid, it = stack.pop()
            if it == 0:
                disc[node] = low[node] = timer
                timer += 1
            advanced = False
            while it < len(adj[node]):
                nxt, eid = adj[node][it]
                it += 1
                if eid == in_eid:
                    continue
                if disc[nxt] < 0:
                    estack.append(eid)
                    stack.append((node, in_eid, it))
                    stack.append((nxt, eid, 0))
                    advanced = True
                    break
                if disc[nxt] < disc[node]:
                    estack.append(eid)
                    if disc[nxt] < low[node]:
                        low[node] = disc[nxt]
            if advanced:
                continue
            if in_eid >= 0:
                parent = stack[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
                if low[node] >= disc[parent]:
                    comp = []
                    while True:
                        eid = estack.pop()
                        comp.append(eid)
                        if eid == in_eid:
                            break
                    comps.append(comp)
    return comps


def _walk_ring(edges, comp: list[int]) -> Ring:
    """Order a simple-cycle component into bead and joint sequences."""
    inc: dict[int, list[int]] = {}
    for eid in comp:
        a, b = edges[eid]
        inc.setdefault(a, []).append(eid)
        inc.setdefault(b, []).append(eid)
    start = min(inc)
    beads = [start]
    joints = []
    eid = min(inc[start])
    cur = start
    while True:
        joints.append(eid)
        a, b = edges[eid]
        cur = b if a == cur else a
        if cur == start:
            break
        beads.append(cur)
        e1, e2 = inc[cur]
        eid = e2 if e1 == eid else e1
    return Ring(beads=tuple(beads), joints=tuple(joints))


def _ring_is_annular(shadow: DecoratedShadow, index: ShadowIndex,
                     ring: Ring, face_list, face_of, outer) -> str:
    """Empty string when annular, else a reason."""
    m = len(ring.beads)
    for i, v in enumerate(ring.joints):
        a = ring.beads[i]
        b = ring.beads[(i + 1) % m]
        if a == b:
            return f"joint vertex {v} attaches bead {a} to itself"
        for pid, ci in index.vertex_corners[v]:
            if shadow.polygons[pid].corners[ci].nested:
                return (f"corner of polygon {pid} at joint vertex {v} "
                        f"is nested")
    covered = union_bounded_faces(shadow, ring.beads, face_list, face_of,
                                  outer)
    retained = [f for f in range(len(face_list)) if f not in covered]
    if not retained:
        return "ring beads cover every face"
    pos = {f: i for i, f in enumerate(retained)}
    parent = list(range(len(retained)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(shadow.n_arcs):
        fl = face_of[(a, True)]
        fr = face_of[(a, False)]
        if fl in pos and fr in pos:
            ra, rb = find(pos[fl]), find(pos[fr])
            if ra != rb:
                parent[ra] = rb
    ncomp = sum(1 for i in range(len(retained)) if find(i) == i)
    if ncomp != 2:
        return (f"complement of the ring region has {ncomp} "
                f"component(s), not 2")
    return ""


def cycle_blocks(shadow: DecoratedShadow,
                 index: ShadowIndex) -> tuple[Ring, ...] | None:
    """Simple-cycle blocks without the annularity pass; None when some
    block is neither a bridge nor a simple cycle (self-loops included)."""
    edges = block_edges(shadow, index)
    if any(a == b for a, b in edges):
        return None
    rings = []
    for comp in _biconnected_components(len(shadow.polygons), edges):
        if len(comp) == 1:
            continue
        nodes = set()
        deg: dict[int, int] = {}
        for eid in comp:
            nodes.update(edges[eid])
            for p in edges[eid]:
                deg[p] = deg.get(p, 0) + 1
        if len(comp) != len(nodes) or any(d != 2 for d in deg.values()):
            return None
        rings.append(_walk_ring(edges, comp))
    rings.sort(key=lambda r: r.beads)
    return tuple(rings)


def classify(shadow: DecoratedShadow,
             index: ShadowIndex | None = None) -> BlockReport:
    """Decide which solver family applies to this shadow."""
    if index is None:
        index = validate_shadow(shadow)
    edges = block_edges(shadow, index)
    for v, (a, b) in enumerate(edges):
        if a == b:
            return BlockReport(
                kind=ShadowKind.GENERAL, edges=edges, rings=(),
                note=f"vertex {v} glues polygon {a} to itself")

    comps = _biconnected_components(len(shadow.polygons), edges)
    cycles: list[list[int]] = []
    for comp in comps:
        if len(comp) == 1:
            continue
        nodes = set()
        for eid in comp:
            nodes.update(edges[eid])
        deg: dict[int, int] = {}
        for eid in comp:
            for p in edges[eid]:
                deg[p] = deg.get(p, 0) + 1
        if len(comp) != len(nodes) or any(d != 2 for d in deg.values()):
            return BlockReport(
                kind=ShadowKind.GENERAL, edges=edges, rings=(),
                note=(f"block on polygons {sorted(nodes)} is neither a "
                      f"bridge nor a simple cycle"))
        cycles.append(comp)

    if not cycles:
        return BlockReport(kind=ShadowKind.TREE_LIKE, edges=edges, rings=())

    face_list = faces(shadow)
    face_of = _face_of_map(face_list)
    outer = outer_face_index(shadow, face_list)
    rings = []
    for comp in cycles:
        ring = _walk_ring(edges, comp)
        why = _ring_is_annular(shadow, index, ring, face_list, face_of,
                               outer)
        if why:
            return BlockReport(
                kind=ShadowKind.GENERAL, edges=edges, rings=(),
                note=f"cycle through polygons {ring.beads} is not "
                     f"annular: {why}")
        rings.append(ring)
    rings.sort(key=lambda r: r.beads)
    return BlockReport(kind=ShadowKind.TREE_NECKLACE, edges=edges,
                       rings=tuple(rings))
