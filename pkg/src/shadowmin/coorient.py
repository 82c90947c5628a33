"""Coorientations, their conflict counts, and certificate checking.

A coorientation assigns each arc a conormal direction, outward or inward
relative to the bounded domain of its polygon.  A transition at a double
point conflicts when the conormal switches sides of the directed curve,
which forces an inflection between the two passages.  Minimizing total
conflicts over admissible coorientations is the whole game.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .blocks import cycle_blocks
from .embed import Embedding, derive_embedding
from .model import (DecoratedShadow, ShadowError, ShadowIndex, Side,
                    validate_shadow)


class Coor(str, Enum):
    OUTWARD = "out"
    INWARD = "in"


Coorientation = tuple  # tuple[Coor, ...], one entry per arc


@dataclass(frozen=True)
class ConflictReport:
    total: int
    per_transition: tuple[tuple[bool, bool], ...]
    per_vertex_parity: tuple[int, ...]


def curve_side_bits(shadow: DecoratedShadow, coor,
                    embedding: Embedding) -> list[int]:
    """1 when the conormal of the arc points to the left of the directed
    curve.  Inward keeps the domain side, outward flips it."""
    bits = []
    for a in range(shadow.n_arcs):
        left = embedding.domain_side[a] is Side.LEFT
        if coor[a] is Coor.OUTWARD:
            left = not left
        bits.append(1 if left else 0)
    return bits


def conflicts(shadow: DecoratedShadow, coor,
              index: ShadowIndex | None = None,
              embedding: Embedding | None = None) -> ConflictReport:
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    if len(coor) != shadow.n_arcs:
        raise ShadowError("E_SCHEMA", "coorientation length != arc count")
    bits = curve_side_bits(shadow, coor, embedding)
    per = []
    parity = []
    total = 0
    for v in shadow.vertices:
        (i0, o0), (i1, o1) = v.transitions
        c0 = bits[i0] != bits[o0]
        c1 = bits[i1] != bits[o1]
        per.append((c0, c1))
        parity.append((c0 ^ c1) & 1)
        total += c0 + c1
    return ConflictReport(total=total, per_transition=tuple(per),
                          per_vertex_parity=tuple(parity))


def polygon_admissible(shadow: DecoratedShadow, pid: int, coor) -> bool:
    p = shadow.polygons[pid]
    if any(coor[a] is Coor.OUTWARD for a in p.sides):
        return True
    k = len(p.sides)
    nested = sum(1 for c in p.corners if c.nested)
    return k >= 3 and nested <= k - 3


def admissibility_failures(shadow: DecoratedShadow, coor) -> tuple[int, ...]:
    return tuple(p.id for p in shadow.polygons
                 if not polygon_admissible(shadow, p.id, coor))


def is_admissible(shadow: DecoratedShadow, coor) -> bool:
    return not admissibility_failures(shadow, coor)


def holonomy(shadow: DecoratedShadow, coor, cycle,
             index: ShadowIndex | None = None,
             embedding: Embedding | None = None) -> int:
    """Sign picked up around a block-graph cycle, given as the vertex ids
    of its joints.  E_NOT_CYCLE when those vertices do not form one."""
    if index is None:
        index = validate_shadow(shadow)
    joints = tuple(cycle)
    if len(joints) < 2 or len(set(joints)) != len(joints):
        raise ShadowError("E_NOT_CYCLE",
                          "a cycle needs at least two distinct joints")
    deg: dict[int, int] = {}
    nodes: set[int] = set()
    adj: dict[int, list[int]] = {}
    for v in joints:
        if not (0 <= v < shadow.n_vertices):
            raise ShadowError("E_NOT_CYCLE", f"no vertex {v}")
        (a, _), (b, _) = index.vertex_corners[v]
        if a == b:
            raise ShadowError("E_NOT_CYCLE",
                              f"vertex {v} glues a polygon to itself")
        nodes.update((a, b))
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if len(joints) != len(nodes) or any(d != 2 for d in deg.values()):
        raise ShadowError("E_NOT_CYCLE",
                          "joints do not form a simple block cycle")
    seen = {next(iter(nodes))}
    frontier = [next(iter(nodes))]
    while frontier:
        for w in adj[frontier.pop()]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    if seen != nodes:
        raise ShadowError("E_NOT_CYCLE", "joint edges are not connected")
    rep = conflicts(shadow, coor, index, embedding)
    s = sum(rep.per_vertex_parity[v] for v in joints)
    return -1 if s & 1 else 1


@dataclass(frozen=True)
class CertificateResult:
    ok: bool
    reason: str
    conflicts: int
    note: str = ""


def verify_certificate(shadow: DecoratedShadow, coor,
                       budget: int | None = None,
                       index: ShadowIndex | None = None,
                       mode: str = "necklace") -> CertificateResult:
    """Linear-time witness check: admissibility, ring holonomy where the
    block structure exposes rings, and the conflict budget.  mode "local"
    drops the holonomy check, certifying only the relaxed bound."""
    if mode not in ("local", "necklace"):
        raise ShadowError("E_SCHEMA", f"unknown verification mode {mode!r}")
    if index is None:
        index = validate_shadow(shadow)
    embedding = derive_embedding(shadow, index)
    bad = admissibility_failures(shadow, coor)
    rep = conflicts(shadow, coor, index, embedding)
    if bad:
        return CertificateResult(
            ok=False, reason="INADMISSIBLE", conflicts=rep.total,
            note=f"polygons {list(bad)} have no outward side and too few "
                 f"free corners")
    rings = cycle_blocks(shadow, index) if mode == "necklace" else ()
    note = ""
    if rings is None:
        note = ("block structure is not a cactus; holonomy constraints "
                "were not checked")
    else:
        for ring in rings:
            s = sum(rep.per_vertex_parity[v] for v in ring.joints)
            if s & 1:
                return CertificateResult(
                    ok=False, reason="HOLONOMY", conflicts=rep.total,
                    note=f"ring through polygons {ring.beads} has "
                         f"holonomy -1")
    if budget is not None and rep.total > budget:
        return CertificateResult(ok=False, reason="OVER_BUDGET",
                                 conflicts=rep.total, note=note)
    return CertificateResult(ok=True, reason="", conflicts=rep.total,
                             note=note)
