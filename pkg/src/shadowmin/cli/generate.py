"""Builders for decorated shadows.

Four named small curves, two surgery operations (loop splice and a
crossing join of two curves), and parametric families built on top of
them.  Every builder returns a validated shadow; constructions that
cannot know their nesting bits up front derive them with the parity
engine before returning.
"""

from __future__ import annotations

import random
from typing import List, Tuple

from ..embed import outer_face_index, with_derived_nesting
from ..model import (Corner, DecoratedShadow, End, Polygon, Side,
                     ShadowError, Vertex, faces, validate_shadow)

H, T = End.HEAD, End.TAIL


def circle() -> DecoratedShadow:
    """Embedded circle: one closed arc, no crossings."""
    return DecoratedShadow(
        owner=(0,),
        vertices=(),
        polygons=(Polygon(0, (0,), ()),),
        traversal=(0,),
        outer_arc=0, outer_side=Side.LEFT)


def figure_eight() -> DecoratedShadow:
    """Two lobes side by side, one positive crossing."""
    return DecoratedShadow(
        owner=(0, 1),
        vertices=(Vertex(0, ((0, H), (1, H), (1, T), (0, T)),
                         ((0, 1), (1, 0)), 1),),
        polygons=(Polygon(0, (0,), (Corner(0, 1),)),
                  Polygon(1, (1,), (Corner(0, 0),))),
        traversal=(0, 1),
        outer_arc=0, outer_side=Side.RIGHT)


def curl() -> DecoratedShadow:
    """Small loop hanging inside a larger one, one negative crossing."""
    return DecoratedShadow(
        owner=(0, 1),
        vertices=(Vertex(0, ((0, H), (0, T), (1, T), (1, H)),
                         ((0, 1), (1, 0)), -1),),
        polygons=(Polygon(0, (0,), (Corner(0, 1, nested=True),)),
                  Polygon(1, (1,), (Corner(0, 0),))),
        traversal=(0, 1),
        outer_arc=0, outer_side=Side.RIGHT)


def trefoil() -> DecoratedShadow:
    """Standard three petal rose, the smallest cyclic block arrangement."""
    return DecoratedShadow(
        owner=(0, 1, 2, 0, 1, 2),
        vertices=(
            Vertex(0, ((0, T), (3, T), (5, H), (2, H)), ((2, 3), (5, 0)), -1),
            Vertex(1, ((4, T), (1, T), (3, H), (0, H)), ((0, 1), (3, 4)), -1),
            Vertex(2, ((2, T), (5, T), (1, H), (4, H)), ((1, 2), (4, 5)), 1),
        ),
        polygons=(
            Polygon(0, (0, 3), (Corner(1, 1), Corner(0, 2))),
            Polygon(1, (4, 1), (Corner(2, 2), Corner(1, 0))),
            Polygon(2, (2, 5), (Corner(0, 0), Corner(2, 1))),
        ),
        traversal=(0, 1, 2, 3, 4, 5),
        outer_arc=0, outer_side=Side.RIGHT)


def _recomputed_signs(vertices: List[Vertex],
                      traversal: Tuple[int, ...]) -> List[Vertex]:
    """Set every vertex sign from its rotation and the traversal order.

    Surgery can rebase a sub-curve's traversal, which swaps the passage
    order at some crossings, so stored signs are recomputed wholesale.
    """
    at = {arc: i for i, arc in enumerate(traversal)}
    out = []
    for v in vertices:
        k = 0 if at[v.transitions[0][0]] < at[v.transitions[1][0]] else 1
        o1 = v.transitions[k][1]
        o2 = v.transitions[1 - k][1]
        pos = {e: i for i, e in enumerate(v.rotation)}
        sign = 1 if pos[(o2, T)] == (pos[(o1, T)] + 1) % 4 else -1
        out.append(Vertex(v.id, v.rotation, v.transitions, sign))
    return out


def _split_polygon_side(p: Polygon, arc: int, second: int, fwd: bool,
                        corner: Corner) -> Polygon:
    """Split side `arc` of `p` into (arc, second) with `corner` in between.

    `fwd` is the walk direction of `p` through `arc`; walking backward the
    head piece comes first.
    """
    si = p.sides.index(arc)
    pieces = (arc, second) if fwd else (second, arc)
    sides = p.sides[:si] + pieces + p.sides[si + 1:]
    corners = p.corners[:si] + (corner,) + p.corners[si:]
    return Polygon(p.id, sides, corners)


def splice_curl(shadow: DecoratedShadow, arc: int,
                side: Side) -> DecoratedShadow:
    """Split `arc` at a new crossing and hang a small loop off `side` of
    the travel direction.  Adds one vertex, one polygon and a leaf edge
    to the incidence structure."""
    index = validate_shadow(shadow)
    m = shadow.n_arcs
    n = shadow.n_vertices
    if not 0 <= arc < m:
        raise ShadowError("E_SCHEMA", f"no arc {arc}")
    w = n
    npid = len(shadow.polygons)
    pid = shadow.owner[arc]

    if n == 0:
        # the closed arc keeps its identity, only the loop is new
        loop = 1
        if side == Side.LEFT:
            rot = ((arc, H), (arc, T), (loop, T), (loop, H))
        else:
            rot = ((arc, H), (loop, H), (loop, T), (arc, T))
        vertices = [Vertex(w, rot, ((arc, loop), (loop, arc)), 1)]
        host_poly = Polygon(pid, (arc,), (Corner(w, npid),))
        polys = [host_poly, Polygon(npid, (loop,), (Corner(w, pid),))]
        owner = (pid, npid)
        traversal = (arc, loop)
    else:
        e2 = m
        loop = m + 1
        if side == Side.LEFT:
            rot = ((arc, H), (e2, T), (loop, T), (loop, H))
        else:
            rot = ((arc, H), (loop, H), (loop, T), (e2, T))
        vertices = []
        for v in shadow.vertices:
            rr = tuple((e2, e[1]) if e == (arc, H) else e for e in v.rotation)
            tt = tuple((e2 if a == arc else a, b) for a, b in v.transitions)
            vertices.append(Vertex(v.id, rr, tt, v.sign))
        vertices.append(Vertex(w, rot, ((arc, loop), (loop, e2)), 1))
        polys = []
        for p in shadow.polygons:
            if p.id == pid:
                fwd = index.walk_dirs[pid][p.sides.index(arc)]
                polys.append(_split_polygon_side(p, arc, e2, fwd,
                                                 Corner(w, npid)))
            else:
                polys.append(p)
        polys.append(Polygon(npid, (loop,), (Corner(w, pid),)))
        owner = shadow.owner + (pid, npid)
        at = shadow.traversal.index(arc)
        traversal = (shadow.traversal[:at + 1] + (loop, e2)
                     + shadow.traversal[at + 1:])

    vertices = _recomputed_signs(vertices, traversal)
    out = DecoratedShadow(owner=tuple(owner), vertices=tuple(vertices),
                          polygons=tuple(polys), traversal=traversal,
                          outer_arc=shadow.outer_arc,
                          outer_side=shadow.outer_side)
    return with_derived_nesting(out)


def connect(host: DecoratedShadow, harc: int, guest: DecoratedShadow,
            garc: int, side: Side) -> DecoratedShadow:
    """Join two curves through one new crossing.

    Both curves are cut, on `harc` and `garc`, and resewn across a
    crossing, so the new vertex bridges the two owning polygons.  `garc`
    must bound the guest's outer face, otherwise the strands cannot
    reach it.  `side` picks the handedness of the joining band: when it
    is the flip of the side of `garc` facing the guest's outer face, the
    guest sits cleanly in the face on `side` of `harc`; with the other
    handedness the band wraps around the guest once, which is still a
    valid curve but nests the guest's outermost polygon.
    """
    hidx = validate_shadow(host)
    gidx = validate_shadow(guest)
    if not 0 <= harc < host.n_arcs:
        raise ShadowError("E_SCHEMA", f"host has no arc {harc}")
    if not 0 <= garc < guest.n_arcs:
        raise ShadowError("E_SCHEMA", f"guest has no arc {garc}")
    gfaces = faces(guest)
    gouter = outer_face_index(guest, gfaces)
    if not any(a == garc for a, _ in gfaces[gouter]):
        raise ShadowError("E_SCHEMA",
                          "guest arc must bound the guest's outer face")

    mh, mg = host.n_arcs, guest.n_arcs
    nh, ng = host.n_vertices, guest.n_vertices
    nph = len(host.polygons)
    host_closed = nh == 0
    guest_closed = ng == 0

    nid = mh + mg
    h1 = harc
    if host_closed:
        h2 = h1
    else:
        h2 = nid
        nid += 1
    g1 = mh + garc
    if guest_closed:
        g2 = g1
    else:
        g2 = nid
        nid += 1
    w = nh + ng

    if side == Side.LEFT:
        rot = ((h1, H), (h2, T), (g2, T), (g1, H))
    else:
        rot = ((h1, H), (g1, H), (g2, T), (h2, T))
    new_vertex = Vertex(w, rot, ((h1, g2), (g1, h2)), 1)

    vertices: List[Vertex] = []
    for v in host.vertices:
        rr = tuple((h2, e[1]) if e == (h1, H) else e for e in v.rotation)
        tt = tuple((h2 if a == h1 else a, b) for a, b in v.transitions)
        vertices.append(Vertex(v.id, rr, tt, v.sign))
    for v in guest.vertices:
        rr = []
        for a, e in v.rotation:
            a += mh
            if (a, e) == (g1, H):
                a = g2
            rr.append((a, e))
        tt = []
        for a, b in v.transitions:
            a += mh
            b += mh
            if a == g1:
                a = g2
            tt.append((a, b))
        vertices.append(Vertex(v.id + nh, tuple(rr), tuple(tt), v.sign))
    vertices.append(new_vertex)

    hpid = host.owner[harc]
    gpid = nph + guest.owner[garc]
    owner = list(host.owner) + [nph + p for p in guest.owner]
    if not host_closed:
        owner.append(hpid)
    if not guest_closed:
        owner.append(gpid)

    polys: List[Polygon] = []
    for p in host.polygons:
        if p.id == hpid and not host_closed:
            fwd = hidx.walk_dirs[hpid][p.sides.index(harc)]
            polys.append(_split_polygon_side(p, h1, h2, fwd,
                                             Corner(w, gpid)))
        elif p.id == hpid:
            polys.append(Polygon(p.id, p.sides,
                                 p.corners + (Corner(w, gpid),)))
        else:
            polys.append(p)
    for p in guest.polygons:
        sides = tuple(s + mh for s in p.sides)
        corners = tuple(Corner(c.vertex + nh, c.neighbor + nph, c.nested)
                        for c in p.corners)
        q = Polygon(p.id + nph, sides, corners)
        if p.id + nph == gpid and not guest_closed:
            fwd = gidx.walk_dirs[p.id][p.sides.index(garc)]
            q = _split_polygon_side(q, g1, g2, fwd, Corner(w, hpid))
        elif p.id + nph == gpid:
            q = Polygon(q.id, q.sides, q.corners + (Corner(w, hpid),))
        polys.append(q)

    th = list(host.traversal)
    tg = [a + mh for a in guest.traversal]
    p_at = th.index(h1)
    if guest_closed:
        guest_part = [g1]
    else:
        q_at = tg.index(g1)
        guest_part = [g2] + tg[q_at + 1:] + tg[:q_at] + [g1]
    traversal = th[:p_at + 1] + guest_part
    if not host_closed:
        traversal += [h2]
    traversal += th[p_at + 1:]

    vertices = _recomputed_signs(vertices, tuple(traversal))
    out = DecoratedShadow(owner=tuple(owner), vertices=tuple(vertices),
                          polygons=tuple(polys),
                          traversal=tuple(traversal),
                          outer_arc=host.outer_arc,
                          outer_side=host.outer_side)
    return with_derived_nesting(out)


def necklace(m: int) -> DecoratedShadow:
    """Rose with m petals arranged in a single cycle of 2-gon lenses.

    Only odd m give a single closed curve, so even or tiny m are
    rejected.  necklace(3) is the trefoil shadow.
    """
    if m < 3 or m % 2 == 0:
        raise ShadowError("E_SCHEMA",
                          "petal count must be odd and at least 3")
    oid = {}
    iid = {}
    seq = []
    j = 1
    for _ in range(m):
        oid[j] = len(seq)
        seq.append(("o", j))
        iid[(j + 1) % m] = len(seq)
        seq.append(("i", (j + 1) % m))
        j = (j + 2) % m

    vertices = []
    for v in range(m):
        nxt = (v + 1) % m
        rot = ((oid[nxt], T), (iid[nxt], T), (iid[v], H), (oid[v], H))
        trans = ((oid[v], iid[nxt]), (iid[v], oid[nxt]))
        vertices.append(Vertex(v, rot, trans, 1))

    polys = []
    owner = [0] * (2 * m)
    for v in range(m):
        owner[oid[v]] = v
        owner[iid[v]] = v
        polys.append(Polygon(v, (oid[v], iid[v]),
                             (Corner(v, (v + 1) % m),
                              Corner((v - 1) % m, (v - 1) % m))))

    traversal = tuple(range(2 * m))
    vertices = _recomputed_signs(vertices, traversal)
    out = DecoratedShadow(owner=tuple(owner), vertices=tuple(vertices),
                          polygons=tuple(polys), traversal=traversal,
                          outer_arc=oid[1], outer_side=Side.RIGHT)
    validate_shadow(out)
    return out


def curl_chain(t: int) -> DecoratedShadow:
    """Chain of t loops, each spliced onto the previous one.

    Closed form of t successive left splices starting from the circle,
    built in one pass so large chains stay cheap.
    """
    if t < 1:
        raise ShadowError("E_SCHEMA", "chain length must be positive")
    if t == 1:
        return curl()

    # arcs: 0 the big loop, i and 2t-i the two halves of loop i, t the last
    vertices = []
    rot0 = ((0, H), (0, T), (1, T), (2 * t - 1, H))
    vertices.append(Vertex(0, rot0, ((0, 1), (2 * t - 1, 0)), 1))
    for i in range(1, t):
        b, c = i, 2 * t - i
        if i + 1 < t:
            nt, nh = i + 1, 2 * t - i - 1
        else:
            nt = nh = t
        rot = ((b, H), (c, T), (nt, T), (nh, H))
        vertices.append(Vertex(i, rot, ((b, nt), (nh, c)), 1))

    owner = [0] * (2 * t)
    polys = [Polygon(0, (0,), (Corner(0, 1),))]
    for i in range(1, t):
        b, c = i, 2 * t - i
        owner[b] = owner[c] = i
        polys.append(Polygon(i, (b, c),
                             (Corner(i, i + 1), Corner(i - 1, i - 1))))
    owner[t] = t
    polys.append(Polygon(t, (t,), (Corner(t - 1, t - 1),)))

    traversal = tuple(range(2 * t))
    vertices = _recomputed_signs(vertices, traversal)
    out = DecoratedShadow(owner=tuple(owner), vertices=tuple(vertices),
                          polygons=tuple(polys), traversal=traversal,
                          outer_arc=0, outer_side=Side.RIGHT)
    return with_derived_nesting(out)


def tree_like_random(n: int, seed: int) -> DecoratedShadow:
    """Random tree-like shadow with n crossings, grown by n loop splices."""
    rng = random.Random(seed)
    s = circle()
    for _ in range(n):
        arc = rng.randrange(s.n_arcs)
        side = Side.LEFT if rng.random() < 0.5 else Side.RIGHT
        s = splice_curl(s, arc, side)
    return s


BUILDERS = {
    "circle": circle,
    "figure-eight": figure_eight,
    "curl": curl,
    "trefoil": trefoil,
}
