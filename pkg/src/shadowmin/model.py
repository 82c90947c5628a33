"""Decorated shadow model: an immersed closed curve's shadow together with
its building-polygon decomposition, crossing decorations, and outer mark.

Arcs, vertices, and polygons carry dense integer ids.  A shadow is valid
when its traversal is the Euler circuit induced by the transitions, the
rotation system is planar (face count = vertex count + 2), and the polygon
boundary walks consume every arc end exactly once.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class ShadowError(ValueError):
    """Contract failure; `code` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    def flip(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class End(str, Enum):
    HEAD = "head"
    TAIL = "tail"


ArcEnd = tuple[int, End]


@dataclass(frozen=True, slots=True)
class Vertex:
    """Double point: 4 arc ends in ccw rotation order, the two passages as
    (incoming, outgoing) transition pairs, and the crossing sign."""

    id: int
    rotation: tuple[ArcEnd, ArcEnd, ArcEnd, ArcEnd]
    transitions: tuple[tuple[int, int], tuple[int, int]]
    sign: int


@dataclass(frozen=True, slots=True)
class Corner:
    vertex: int
    neighbor: int
    nested: bool = False


@dataclass(frozen=True, slots=True)
class Polygon:
    id: int
    sides: tuple[int, ...]
    corners: tuple[Corner, ...]  # corners[i] follows sides[i] on the walk


@dataclass(frozen=True)  # no slots: the face cache weak-references these
class DecoratedShadow:
    owner: tuple[int, ...]  # arc id -> polygon id
    vertices: tuple[Vertex, ...]
    polygons: tuple[Polygon, ...]
    traversal: tuple[int, ...]
    outer_arc: int
    outer_side: Side

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arcs(self) -> int:
        return len(self.owner)


Dart = tuple[int, bool]  # (arc, True=tail->head)

# face circuits are pure in the (immutable) shadow, and several passes
# per solve need them; keyed by identity since value-hashing a shadow
# walks the whole structure
_FACES_CACHE: dict[int, tuple] = {}


def _faces_cache_get(shadow):
    got = _FACES_CACHE.get(id(shadow))
    if got is not None and got[0]() is shadow:
        return got[1]
    return None


def _faces_cache_put(shadow, result):
    key = id(shadow)

    def _evict(_ref, _key=key):
        _FACES_CACHE.pop(_key, None)

    _FACES_CACHE[key] = (weakref.ref(shadow, _evict), result)


@dataclass(frozen=True)
class ShadowIndex:
    """Derived lookups produced by validate_shadow.

    walk_dirs[p][i] is True when polygon p's boundary walk traverses
    sides[i] along its traversal orientation.  corner_ends[p][i] is the
    (arrival end, departure end) pair the corner after sides[i] consumes.
    first_pass[v] is the index (0 or 1) in vertices[v].transitions of the
    passage the stored traversal reaches first.
    """

    head_at: tuple[int, ...]
    tail_at: tuple[int, ...]
    succ: tuple[int, ...]
    walk_dirs: tuple[tuple[bool, ...], ...]
    corner_ends: tuple[tuple[tuple[ArcEnd, ArcEnd], ...], ...]
    vertex_corners: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    first_pass: tuple[int, ...]


def _err(code: str, msg: str) -> ShadowError:
    return ShadowError(code, msg)


def _arrival_end(arc: int, forward: bool) -> ArcEnd:
    return (arc, End.HEAD if forward else End.TAIL)


def _departure_end(arc: int, forward: bool) -> ArcEnd:
    return (arc, End.TAIL if forward else End.HEAD)


def faces(shadow: DecoratedShadow) -> tuple[tuple[Dart, ...], ...]:
    """Face circuits of the rotation system; each face is the cyclic dart
    sequence with the face on the left of forward darts."""
    got = _faces_cache_get(shadow)
    if got is not None:
        return got
    m = shadow.n_arcs
    if shadow.n_vertices == 0:
        out2 = (((0, True),), ((0, False),))
        _faces_cache_put(shadow, out2)
        return out2

    end_pos: dict[ArcEnd, tuple[int, int]] = {}
    for v in shadow.vertices:
        for p, e in enumerate(v.rotation):
            end_pos[e] = (v.id, p)

    def next_dart(d: Dart) -> Dart:
        arc, fwd = d
        arrive = (arc, End.HEAD if fwd else End.TAIL)
        vid, p = end_pos[arrive]
        leave = shadow.vertices[vid].rotation[(p - 1) % 4]
        la, le = leave
        return (la, le is End.TAIL)

    seen: set[Dart] = set()
    out: list[tuple[Dart, ...]] = []
    for arc in range(m):
        for fwd in (True, False):
            d0 = (arc, fwd)
            if d0 in seen:
                continue
            circ: list[Dart] = []
            d = d0
            while True:
                circ.append(d)
                seen.add(d)
                d = next_dart(d)
                if d == d0:
                    break
            out.append(tuple(circ))
    result = tuple(out)
    _faces_cache_put(shadow, result)
    return result


def _expected_sign(vertex: Vertex, first: int, pos=None) -> int:
    """Crossing sign from rotation order: +1 iff the second passage's
    outgoing tail is the immediate ccw successor of the first's."""
    if pos is None:
        pos = {e: p for p, e in enumerate(vertex.rotation)}
    out1 = vertex.transitions[first][1]
    out2 = vertex.transitions[1 - first][1]
    p1 = pos[(out1, End.TAIL)]
    p2 = pos[(out2, End.TAIL)]
    return 1 if p2 == (p1 + 1) % 4 else -1


def validate_shadow(shadow: DecoratedShadow) -> ShadowIndex:
    m = shadow.n_arcs
    n = shadow.n_vertices
    npoly = len(shadow.polygons)

    # -- schema shape -------------------------------------------------
    if m == 0 or npoly == 0:
        raise _err("E_SCHEMA", "shadow needs at least one arc and polygon")
    if n == 0:
        if m != 1 or npoly != 1:
            raise _err("E_SCHEMA", "vertex-free shadow must be the circle")
    elif m != 2 * n:
        raise _err("E_SCHEMA", f"expected {2*n} arcs for {n} vertices, got {m}")
    for i, v in enumerate(shadow.vertices):
        if v.id != i:
            raise _err("E_SCHEMA", f"vertex ids not dense at {i}")
    for i, p in enumerate(shadow.polygons):
        if p.id != i:
            raise _err("E_SCHEMA", f"polygon ids not dense at {i}")
    if not (0 <= shadow.outer_arc < m):
        raise _err("E_SCHEMA", "outer mark references unknown arc")
    if not isinstance(shadow.outer_side, Side):
        raise _err("E_SCHEMA", "outer mark side must be a Side")
    for a, p in enumerate(shadow.owner):
        if not (0 <= p < npoly):
            raise _err("E_SCHEMA", f"arc {a} owned by unknown polygon {p}")

    # -- rotations and transitions ------------------------------------
    head_at = [-1] * m
    tail_at = [-1] * m
    for v in shadow.vertices:
        if len(v.rotation) != 4:
            raise _err("E_SCHEMA", f"vertex {v.id} rotation must list 4 ends")
        heads = tails = 0
        for arc, end in v.rotation:
            if not (0 <= arc < m) or not isinstance(end, End):
                raise _err("E_SCHEMA", f"vertex {v.id} rotation malformed")
            if end is End.HEAD:
                heads += 1
                if head_at[arc] != -1:
                    raise _err("E_SCHEMA", f"arc {arc} head used twice")
                head_at[arc] = v.id
            else:
                tails += 1
                if tail_at[arc] != -1:
                    raise _err("E_SCHEMA", f"arc {arc} tail used twice")
                tail_at[arc] = v.id
        if heads != 2 or tails != 2:
            raise _err("E_SCHEMA", f"vertex {v.id} needs 2 heads and 2 tails")
        rot_ends = set(v.rotation)
        if len(rot_ends) != 4:
            raise _err("E_SCHEMA", f"vertex {v.id} rotation repeats an end")
        if v.sign not in (1, -1):
            raise _err("E_SCHEMA", f"vertex {v.id} sign must be +1 or -1")

        if len(v.transitions) != 2:
            raise _err("E_SCHEMA", f"vertex {v.id} needs 2 transitions")
        trans_ends: set[ArcEnd] = set()
        pos = {e: p for p, e in enumerate(v.rotation)}
        for ain, aout in v.transitions:
            if (ain, End.HEAD) not in rot_ends or (aout, End.TAIL) not in rot_ends:
                raise _err("E_SCHEMA",
                           f"vertex {v.id} transition ({ain},{aout}) not in rotation")
            trans_ends.add((ain, End.HEAD))
            trans_ends.add((aout, End.TAIL))
            # transversality: a passage leaves opposite where it entered
            if (pos[(ain, End.HEAD)] - pos[(aout, End.TAIL)]) % 4 != 2:
                raise _err("E_PLANAR",
                           f"vertex {v.id} passage ({ain},{aout}) is not transversal")
        if trans_ends != rot_ends:
            raise _err("E_SCHEMA", f"vertex {v.id} transitions do not cover rotation")

    if n > 0 and (min(head_at) < 0 or min(tail_at) < 0):
        raise _err("E_SCHEMA", "some arc end is not attached to any vertex")

    # -- traversal is the induced Euler circuit -----------------------
    if sorted(shadow.traversal) != list(range(m)):
        raise _err("E_EULER", "traversal must visit every arc exactly once")
    succ = [-1] * m
    for v in shadow.vertices:
        for ain, aout in v.transitions:
            if succ[ain] != -1:
                raise _err("E_EULER", f"arc {ain} has two outgoing passages")
            succ[ain] = aout
    if n == 0:
        succ[0] = 0
    for i, arc in enumerate(shadow.traversal):
        nxt = shadow.traversal[(i + 1) % m]
        if succ[arc] != nxt:
            raise _err("E_EULER",
                       f"traversal breaks at arc {arc}: expected {succ[arc]}, got {nxt}")

    # passage order along the stored traversal
    first_pass = [-1] * n
    if n > 0:
        t_index = {}
        for v in shadow.vertices:
            for k, (ain, _aout) in enumerate(v.transitions):
                t_index[ain] = (v.id, k)
        seen_v = [False] * n
        for arc in shadow.traversal:
            vid, k = t_index[arc]
            if not seen_v[vid]:
                seen_v[vid] = True
                first_pass[vid] = k
        for v in shadow.vertices:
            if v.sign != _expected_sign(v, first_pass[v.id]):
                raise _err("E_SCHEMA",
                           f"vertex {v.id} sign disagrees with rotation order")

    # -- planarity ----------------------------------------------------
    if len(faces(shadow)) != n + 2:
        raise _err("E_PLANAR", "rotation system is not genus zero")

    # -- polygon decomposition ----------------------------------------
    owner_check = [-1] * m
    for p in shadow.polygons:
        if len(p.sides) == 0:
            raise _err("E_DECOMP", f"polygon {p.id} has no sides")
        if len(p.corners) != len(p.sides):
            if not (n == 0 and len(p.corners) == 0):
                raise _err("E_DECOMP",
                           f"polygon {p.id} corner count must match side count")
        for s in p.sides:
            if not (0 <= s < m):
                raise _err("E_SCHEMA", f"polygon {p.id} references unknown arc {s}")
            if owner_check[s] != -1:
                raise _err("E_DECOMP", f"arc {s} appears in two polygons")
            owner_check[s] = p.id
        for c in p.corners:
            if not (0 <= c.vertex < n):
                raise _err("E_SCHEMA", f"polygon {p.id} corner at unknown vertex")
            if not (0 <= c.neighbor < npoly):
                raise _err("E_SCHEMA", f"polygon {p.id} corner names unknown neighbor")
            if c.nested and c.neighbor == p.id:
                raise _err("E_SCHEMA", f"polygon {p.id} cannot nest itself")
    if owner_check != list(shadow.owner):
        raise _err("E_DECOMP", "arc ownership disagrees with polygon sides")

    walk_dirs: list[tuple[bool, ...]] = []
    corner_ends: list[tuple[tuple[ArcEnd, ArcEnd], ...]] = []
    consumed: dict[ArcEnd, tuple[int, int]] = {}
    corners_at: dict[int, list[tuple[int, int]]] = {}
    for p in shadow.polygons:
        k = len(p.sides)
        if n == 0:
            walk_dirs.append((True,))
            corner_ends.append(())
            continue
        dirs: list[Optional[bool]] = []
        for i, s in enumerate(p.sides):
            u = p.corners[i - 1].vertex  # departure vertex
            w = p.corners[i].vertex if k > 1 else p.corners[0].vertex
            if k == 1:
                u = w = p.corners[0].vertex
            if tail_at[s] == u and head_at[s] == w:
                dirs.append(True)
            elif head_at[s] == u and tail_at[s] == w:
                # loop sides fall into the first branch (u == w)
                dirs.append(False)
            else:
                raise _err("E_DECOMP",
                           f"polygon {p.id} walk does not close at side {s}")
        ends: list[tuple[ArcEnd, ArcEnd]] = []
        for i in range(k):
            s_in, s_out = p.sides[i], p.sides[(i + 1) % k]
            pair = (_arrival_end(s_in, dirs[i]), _departure_end(s_out, dirs[(i + 1) % k]))
            ends.append(pair)
            for e in pair:
                if e in consumed:
                    raise _err("E_DECOMP", f"arc end {e} consumed by two corners")
                consumed[e] = (p.id, i)
            corners_at.setdefault(p.corners[i].vertex, []).append((p.id, i))
        walk_dirs.append(tuple(dirs))
        corner_ends.append(tuple(ends))

    vertex_corners: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for v in shadow.vertices:
        here = corners_at.get(v.id, [])
        if len(here) != 2:
            raise _err("E_DECOMP", f"vertex {v.id} must host exactly 2 corners")
        got = set()
        pos = {e: i for i, e in enumerate(v.rotation)}
        for pid, ci in here:
            e1, e2 = corner_ends[pid][ci]
            got.add(e1)
            got.add(e2)
            if e1 not in pos or e2 not in pos or \
                    (pos[e1] - pos[e2]) % 4 not in (1, 3):
                raise _err("E_DECOMP",
                           f"corner of polygon {pid} at vertex {v.id} does "
                           f"not occupy one sector")
        if got != set(v.rotation):
            raise _err("E_DECOMP",
                       f"corners at vertex {v.id} do not partition its arc ends")
        a, b = here
        pa, ca = a
        pb, cb = b
        if shadow.polygons[pa].corners[ca].neighbor != pb or \
           shadow.polygons[pb].corners[cb].neighbor != pa:
            raise _err("E_DECOMP", f"corner neighbors at vertex {v.id} are wrong")
        vertex_corners.append((a, b))

    # nesting must be antisymmetric between touching polygons
    nested_pairs = set()
    for p in shadow.polygons:
        for c in p.corners:
            if c.nested:
                nested_pairs.add((p.id, c.neighbor))
    for a, b in nested_pairs:
        if (b, a) in nested_pairs:
            raise _err("E_SCHEMA", f"polygons {a} and {b} nested in each other")

    return ShadowIndex(
        head_at=tuple(head_at),
        tail_at=tuple(tail_at),
        succ=tuple(succ),
        walk_dirs=tuple(walk_dirs),
        corner_ends=tuple(corner_ends),
        vertex_corners=tuple(vertex_corners),
        first_pass=tuple(first_pass),
    )


def _canonical_polygon(sides: tuple[int, ...], corners: tuple[Corner, ...]):
    """Pick the rotation/direction-normalized representation of one
    boundary walk: the cyclic start is the minimal arc id, and of the two
    walk senses the lexicographically smaller (sides, corner vertices)
    wins."""
    k = len(sides)
    if k == 0 or not corners:
        return sides, corners

    def rotate(sd, cr, start):
        sd2 = tuple(sd[(start + i) % k] for i in range(k))
        cr2 = tuple(cr[(start + i) % k] for i in range(k))
        return sd2, cr2

    def rev(sd, cr):
        sd2 = tuple(reversed(sd))
        cr2 = tuple(cr[(k - 2 - i) % k] for i in range(k))
        return sd2, cr2

    best = None
    for sd, cr in (rotate(sides, corners, sides.index(min(sides))),
                   rotate(*rev(sides, corners),
                          tuple(reversed(sides)).index(min(sides)))):
        key = (sd, tuple(c.vertex for c in cr))
        if best is None or key < best[0]:
            best = (key, sd, cr)
    return best[1], best[2]


def canonicalize(shadow: DecoratedShadow) -> DecoratedShadow:
    """Relabel to the canonical form: traversal starts at the outer-marked
    arc, ids follow first occurrence, cyclic starts are fixed, and crossing
    signs are recomputed in the rebased frame."""
    validate_shadow(shadow)
    m = shadow.n_arcs
    n = shadow.n_vertices

    start = shadow.traversal.index(shadow.outer_arc)
    order = [shadow.traversal[(start + i) % m] for i in range(m)]
    arc_new = {old: i for i, old in enumerate(order)}

    head_of = {}
    for v in shadow.vertices:
        for arc, end in v.rotation:
            if end is End.HEAD:
                head_of[arc] = v.id
    vert_new: dict[int, int] = {}
    for old in order:
        if n == 0:
            break
        vid = head_of[old]
        if vid not in vert_new:
            vert_new[vid] = len(vert_new)

    poly_new: dict[int, int] = {}
    for old in order:
        pid = shadow.owner[old]
        if pid not in poly_new:
            poly_new[pid] = len(poly_new)

    new_vertices: list[Vertex] = [None] * n  # type: ignore[list-item]
    for v in shadow.vertices:
        rot = tuple((arc_new[a], e) for a, e in v.rotation)
        pivot = rot.index(min(rot, key=lambda ae: (ae[0], ae[1] is End.TAIL)))
        rot = tuple(rot[(pivot + i) % 4] for i in range(4))
        # first-traversed passage first; a new arc id is its traversal slot
        trans = sorted(((arc_new[a], arc_new[b]) for a, b in v.transitions),
                       key=lambda ab: ab[0])
        nv = Vertex(id=vert_new[v.id], rotation=rot,  # sign filled below
                    transitions=(trans[0], trans[1]), sign=1)
        new_vertices[vert_new[v.id]] = nv

    # recompute signs against the rebased passage order
    if n > 0:
        fixed: list[Vertex] = []
        for nv in new_vertices:
            fixed.append(replace(nv, sign=_expected_sign(nv, 0)))
        new_vertices = fixed

    new_polys: list[Polygon] = [None] * len(shadow.polygons)  # type: ignore[list-item]
    for p in shadow.polygons:
        sides = tuple(arc_new[s] for s in p.sides)
        corners = tuple(
            Corner(vertex=vert_new[c.vertex], neighbor=poly_new[c.neighbor],
                   nested=c.nested)
            for c in p.corners)
        sides, corners = _canonical_polygon(sides, corners)
        new_polys[poly_new[p.id]] = Polygon(id=poly_new[p.id], sides=sides,
                                            corners=corners)

    new_owner = [0] * m
    for a, p in enumerate(shadow.owner):
        new_owner[arc_new[a]] = poly_new[p]

    return DecoratedShadow(
        owner=tuple(new_owner),
        vertices=tuple(new_vertices),
        polygons=tuple(new_polys),
        traversal=tuple(range(m)),
        outer_arc=0,
        outer_side=shadow.outer_side,
    )
