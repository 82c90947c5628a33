"""Planar embedding data derived from the rotation system.

The bounded domain of a polygon is the set of faces an arc-crossing path
from the outer face enters an odd number of times, counting only crossings
of that polygon's own sides.  Everything here is computed offline on the
dual spanning tree, so it stays linear in the shadow size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (Corner, Dart, DecoratedShadow, End, Polygon, ShadowError,
                    ShadowIndex, Side, Vertex, faces, validate_shadow)


@dataclass(frozen=True)
class Embedding:
    domain_side: tuple[Side, ...]
    nested: tuple[tuple[bool, ...], ...]
    face_list: tuple[tuple[Dart, ...], ...]
    outer_face: int

    @property
    def n_faces(self) -> int:
        return len(self.face_list)


def _face_of_map(face_list) -> dict[Dart, int]:
    face_of: dict[Dart, int] = {}
    for i, f in enumerate(face_list):
        for d in f:
            face_of[d] = i
    return face_of


def outer_face_index(shadow: DecoratedShadow, face_list) -> int:
    mark: Dart = (shadow.outer_arc, shadow.outer_side is Side.LEFT)
    for i, f in enumerate(face_list):
        if mark in f:
            return i
    raise ShadowError("E_PLANAR", "outer mark dart not on any face")


def _dual_tree(shadow: DecoratedShadow, face_list, face_of, root: int):
    """BFS spanning tree of the dual graph: parent face and crossed arc."""
    nf = len(face_list)
    parent = [-1] * nf
    cross = [-1] * nf
    order = [root]
    seen = [False] * nf
    seen[root] = True
    qi = 0
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nf)]
    for a in range(shadow.n_arcs):
        fl = face_of[(a, True)]
        fr = face_of[(a, False)]
        if fl != fr:
            adj[fl].append((fr, a))
            adj[fr].append((fl, a))
    while qi < len(order):
        f = order[qi]
        qi += 1
        for g, a in adj[f]:
            if not seen[g]:
                seen[g] = True
                parent[g] = f
                cross[g] = a
                order.append(g)
    if not all(seen):
        raise ShadowError("E_PLANAR", "dual graph is disconnected")
    return parent, cross, order


def _answer_parity_queries(shadow, face_list, face_of, outer,
                           queries: list[tuple[int, int]]) -> list[int]:
    """queries are (polygon, face); result is the crossing parity of the
    dual-tree path from the outer face, counting that polygon's sides."""
    parent, cross, order = _dual_tree(shadow, face_list, face_of, outer)
    by_face: dict[int, list[int]] = {}
    for qi, (_pid, f) in enumerate(queries):
        by_face.setdefault(f, []).append(qi)
    out = [0] * len(queries)
    npoly = len(shadow.polygons)
    cnt = [0] * npoly
    # children lists for an explicit enter/leave walk
    kids: dict[int, list[int]] = {}
    for f in order[1:]:
        kids.setdefault(parent[f], []).append(f)
    stack: list[tuple[int, bool]] = [(outer, False)]
    while stack:
        f, leaving = stack.pop()
        if leaving:
            if cross[f] >= 0:
                cnt[shadow.owner[cross[f]]] ^= 1
            continue
        if cross[f] >= 0:
            cnt[shadow.owner[cross[f]]] ^= 1
        for qi in by_face.get(f, ()):
            out[qi] = cnt[queries[qi][0]]
        stack.append((f, True))
        for g in kids.get(f, ()):
            stack.append((g, False))
    return out


def bounded_face_sets(shadow: DecoratedShadow, polygon_ids,
                      face_list=None, face_of=None, outer=None):
    """Per requested polygon, the set of faces inside its boundary walk."""
    if face_list is None:
        face_list = faces(shadow)
        face_of = _face_of_map(face_list)
        outer = outer_face_index(shadow, face_list)
    want = {pid: i for i, pid in enumerate(polygon_ids)}
    parent, cross, order = _dual_tree(shadow, face_list, face_of, outer)
    nf = len(face_list)
    par = [[0] * nf for _ in want]
    for f in order[1:]:
        p = shadow.owner[cross[f]]
        for pid, row in want.items():
            bit = 1 if p == pid else 0
            par[row][f] = par[row][parent[f]] ^ bit
    return {pid: frozenset(f for f in range(nf) if par[row][f])
            for pid, row in want.items()}


def union_bounded_faces(shadow: DecoratedShadow, polygon_ids,
                        face_list, face_of, outer) -> frozenset[int]:
    """Faces lying inside at least one of the given polygons, in one pass."""
    row = {pid: i for i, pid in enumerate(set(polygon_ids))}
    parent, cross, order = _dual_tree(shadow, face_list, face_of, outer)
    nf = len(face_list)
    par = [0] * len(row)
    odd = 0
    inside = [False] * nf
    kids: dict[int, list[int]] = {}
    for f in order[1:]:
        kids.setdefault(parent[f], []).append(f)
    stack: list[tuple[int, bool]] = [(outer, False)]
    while stack:
        f, leaving = stack.pop()
        r = row.get(shadow.owner[cross[f]], -1) if cross[f] >= 0 else -1
        if r >= 0:
            par[r] ^= 1
            odd += 1 if par[r] else -1
        if leaving:
            continue
        inside[f] = odd > 0
        stack.append((f, True))
        for g in kids.get(f, ()):
            stack.append((g, False))
    return frozenset(f for f in range(nf) if inside[f])


def derive_embedding(shadow: DecoratedShadow,
                     index: ShadowIndex | None = None,
                     expected_domain_side=None) -> Embedding:
    """Compute domain sides and nesting bits; E_EMBED when they contradict
    the stored decorations (or the supplied explicit embedding)."""
    if index is None:
        index = validate_shadow(shadow)
    face_list = faces(shadow)
    face_of = _face_of_map(face_list)
    outer = outer_face_index(shadow, face_list)

    queries: list[tuple[int, int]] = []
    for a in range(shadow.n_arcs):
        queries.append((shadow.owner[a], face_of[(a, True)]))
    corner_q0 = len(queries)
    for p in shadow.polygons:
        for c in p.corners:
            q_first_side = shadow.polygons[c.neighbor].sides[0]
            queries.append((p.id, face_of[(q_first_side, True)]))
    par = _answer_parity_queries(shadow, face_list, face_of, outer, queries)

    domain_side = tuple(Side.LEFT if par[a] else Side.RIGHT
                        for a in range(shadow.n_arcs))
    if expected_domain_side is not None:
        for a in range(shadow.n_arcs):
            if expected_domain_side[a] != domain_side[a]:
                raise ShadowError(
                    "E_EMBED",
                    f"supplied domain side of arc {a} is "
                    f"{expected_domain_side[a].value}, derived "
                    f"{domain_side[a].value}")

    nested: list[tuple[bool, ...]] = []
    qi = corner_q0
    for p in shadow.polygons:
        row = []
        for c in p.corners:
            got = bool(par[qi])
            qi += 1
            if got != c.nested:
                raise ShadowError(
                    "E_EMBED",
                    f"corner of polygon {p.id} at vertex {c.vertex}: stored "
                    f"nested={c.nested}, derived {got}")
            row.append(got)
        nested.append(tuple(row))

    return Embedding(domain_side=domain_side, nested=tuple(nested),
                     face_list=face_list, outer_face=outer)


# -- Gauss code import -------------------------------------------------

_SIGN_TOKENS = {"+1": 1, "+": 1, "1": 1, "-1": -1, "-": -1}


def _parse_code(text: str):
    word: list[str] | None = None
    signs: list[int] = []
    outer_arc = 0
    outer_side = Side.LEFT
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        toks = rest.split()
        key = key.strip().lower()
        if key == "word":
            word = toks
        elif key == "signs":
            for t in toks:
                if t not in _SIGN_TOKENS:
                    raise ShadowError("E_SCHEMA", f"bad sign token {t!r}")
                signs.append(_SIGN_TOKENS[t])
        elif key == "outer":
            if len(toks) != 2:
                raise ShadowError("E_SCHEMA", "outer line needs arc and side")
            outer_arc = int(toks[0])
            try:
                outer_side = Side(toks[1].lower())
            except ValueError:
                raise ShadowError("E_SCHEMA", f"bad side {toks[1]!r}") from None
        else:
            raise ShadowError("E_SCHEMA", f"unknown line {key!r} in code")
    if word is None:
        raise ShadowError("E_SCHEMA", "code needs a word line")
    return word, signs, outer_arc, outer_side


def from_gauss_code(text: str) -> DecoratedShadow:
    """Build the tree-like shadow of a non-interleaved double-occurrence
    word.  Rotations realize the stated crossing signs; the polygon
    decomposition is the chord-diagram cell structure; nesting and the
    embedding come out of derive_embedding."""
    word, signs, outer_arc, outer_side = _parse_code(text)
    if not word:
        if signs:
            raise ShadowError("E_SCHEMA", "empty word cannot carry signs")
        if outer_arc != 0:
            raise ShadowError("E_SCHEMA", "outer mark arc out of range")
        circle = DecoratedShadow(
            owner=(0,), vertices=(),
            polygons=(Polygon(id=0, sides=(0,), corners=()),),
            traversal=(0,), outer_arc=0, outer_side=outer_side)
        validate_shadow(circle)
        return circle
    L = len(word)
    labels: list[str] = []
    for w in word:
        if w not in labels:
            labels.append(w)
    n = len(labels)
    if L != 2 * n or any(word.count(w) != 2 for w in labels):
        raise ShadowError("E_SCHEMA", "each label must occur exactly twice")
    if len(signs) != n:
        raise ShadowError("E_SCHEMA", "signs line must cover every label once")
    if not (0 <= outer_arc < L):
        raise ShadowError("E_SCHEMA", "outer mark arc out of range")

    # non-interleaved check: second occurrences must close like brackets
    stack: list[str] = []
    for w in word:
        if stack and stack[-1] == w:
            stack.pop()
        elif w in stack:
            raise ShadowError("E_INTERLACED",
                              f"chord {w!r} interleaves an open chord")
        else:
            stack.append(w)
    if stack:
        raise ShadowError("E_INTERLACED", "unbalanced word")

    vid = {w: i for i, w in enumerate(labels)}
    first_pos: dict[str, int] = {}
    second_pos: dict[str, int] = {}
    for i, w in enumerate(word):
        (second_pos if w in first_pos else first_pos)[w] = i

    H, T = End.HEAD, End.TAIL
    vertices: list[Vertex] = []
    for w in labels:
        p, q = first_pos[w], second_pos[w]
        # passage at letter x is reached after arc x-1; letter 0 comes last
        if p == 0:
            p, q = q, p
        in1, out1 = (p - 1) % L, p
        in2, out2 = (q - 1) % L, q
        s = signs[vid[w]]
        if s == 1:
            rot = ((in1, H), (in2, H), (out1, T), (out2, T))
        else:
            rot = ((in1, H), (out2, T), (out1, T), (in2, H))
        vertices.append(Vertex(id=vid[w], rotation=rot,
                               transitions=((in1, out1), (in2, out2)),
                               sign=s))

    # chord-diagram cells, keyed by the open-chord chain of each segment
    state: list[tuple[str, ...]] = []
    cur: list[str] = []
    for i, w in enumerate(word):
        if cur and cur[-1] == w:
            cur.pop()
        else:
            cur.append(w)
        state.append(tuple(cur))  # state of arc i = segment (i, i+1)

    cells: dict[tuple[str, ...], list[int]] = {}
    for a in range(L):
        cells.setdefault(state[a], []).append(a)
    pid_of_state = {st: i for i, st in enumerate(sorted(cells, key=lambda s: cells[s][0]))}

    owner = [0] * L
    polys: list[Polygon] = [None] * len(cells)  # type: ignore[list-item]
    for st, arcs in cells.items():
        pid = pid_of_state[st]
        for a in arcs:
            owner[a] = pid
        corners = []
        for i, a in enumerate(arcs):
            c_label = word[(a + 1) % L]  # chord event ending this side
            if st and st[-1] == c_label:
                nb_state = st[:-1]
            else:
                nb_state = st + (c_label,)
            corners.append(Corner(vertex=vid[c_label],
                                  neighbor=pid_of_state[nb_state]))
        polys[pid] = Polygon(id=pid, sides=tuple(arcs), corners=tuple(corners))

    shadow = DecoratedShadow(owner=tuple(owner), vertices=tuple(vertices),
                             polygons=tuple(polys), traversal=tuple(range(L)),
                             outer_arc=outer_arc, outer_side=outer_side)
    return with_derived_nesting(shadow)


def with_derived_nesting(shadow: DecoratedShadow) -> DecoratedShadow:
    """Replace every corner's nested bit with the derived one.  Meant for
    constructions that build the combinatorics first and let the parity
    engine settle the nesting."""
    index = validate_shadow(shadow)
    try:
        derive_embedding(shadow, index)
        return shadow
    except ShadowError as e:
        if e.code != "E_EMBED":
            raise
    face_list = faces(shadow)
    face_of = _face_of_map(face_list)
    outer = outer_face_index(shadow, face_list)
    queries = []
    for p in shadow.polygons:
        for c in p.corners:
            q_first_side = shadow.polygons[c.neighbor].sides[0]
            queries.append((p.id, face_of[(q_first_side, True)]))
    par = _answer_parity_queries(shadow, face_list, face_of, outer, queries)
    qi = 0
    fixed: list[Polygon] = []
    for p in shadow.polygons:
        cs = []
        for c in p.corners:
            cs.append(Corner(vertex=c.vertex, neighbor=c.neighbor,
                             nested=bool(par[qi])))
            qi += 1
        fixed.append(Polygon(id=p.id, sides=p.sides, corners=tuple(cs)))
    shadow = DecoratedShadow(owner=shadow.owner, vertices=shadow.vertices,
                             polygons=tuple(fixed),
                             traversal=shadow.traversal,
                             outer_arc=shadow.outer_arc,
                             outer_side=shadow.outer_side)
    validate_shadow(shadow)
    derive_embedding(shadow)
    return shadow
