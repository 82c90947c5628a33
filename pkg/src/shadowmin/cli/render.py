"""Deterministic SVG rendering of tree-like and tree-necklace shadows.

Every building polygon is drawn as a circle; polygons meeting at a
crossing get tangent circles (internally tangent when the neighbor is
nested), and each necklace ring becomes a chain of equal circles around
a guide annulus.  The immersed curve follows the circles and crosses
between them near each tangency point, so the emitted coordinates form
an independent geometric oracle: point-in-disk tests reproduce the
domain sides and nesting bits, and the polyline's turning recovers the
rotation number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..blocks import ShadowKind, classify
from ..coorient import Coor, conflicts
from ..embed import Embedding, derive_embedding, _face_of_map
from ..model import (DecoratedShadow, ShadowError, ShadowIndex, Side,
                     validate_shadow)

TAU = 2.0 * math.pi

Point = tuple[float, float]


@dataclass(frozen=True)
class Layout:
    """Geometry backing an SVG render.

    circles[pid] is (cx, cy, r, ccw) with ccw the geometric direction of
    the polygon's boundary walk.  arc_paths[a] runs tail to head in the
    arc's own orientation; polyline concatenates them in traversal order
    and is closed.  annuli lists (cx, cy, inner, outer) guide rings.
    """

    circles: dict[int, tuple[float, float, float, bool]]
    vertex_points: dict[int, Point]
    arc_paths: dict[int, tuple[Point, ...]]
    polyline: tuple[Point, ...]
    annuli: tuple[tuple[float, float, float, float], ...]


def _ang(p: Point, q: Point) -> float:
    return math.atan2(q[1] - p[1], q[0] - p[0])


def _on(c: Point, r: float, a: float) -> Point:
    return (c[0] + r * math.cos(a), c[1] + r * math.sin(a))


def _fwd_span(a: float, b: float, ccw: bool) -> float:
    """Angular distance from a to b in the walk direction, in (0, 2*pi]."""
    d = (b - a) if ccw else (a - b)
    d %= TAU
    return d if d > 1e-12 else TAU


class _LayoutBuilder:
    def __init__(self, shadow: DecoratedShadow, index: ShadowIndex,
                 emb: Embedding, ring_of: dict):
        self.s = shadow
        self.idx = index
        self.emb = emb
        self._ring_of = ring_of
        self.face_of = _face_of_map(emb.face_list)
        self.circles: dict[int, tuple[float, float, float, bool]] = {}
        self.corner_angle: dict[tuple[int, int], float] = {}
        self.vertex_points: dict[int, Point] = {}
        self.annuli: list[tuple[float, float, float, float]] = []
        # corner lookup: vertex -> [(pid, corner index)]
        self.at_vertex: dict[int, list[tuple[int, int]]] = {}
        for p in shadow.polygons:
            for i, c in enumerate(p.corners):
                self.at_vertex.setdefault(c.vertex, []).append((p.id, i))

    # -- structure helpers ------------------------------------------------

    def _ccw(self, pid: int) -> bool:
        p = self.s.polygons[pid]
        a = p.sides[0]
        fwd = self.idx.walk_dirs[pid][0]
        return fwd == (self.emb.domain_side[a] is Side.LEFT)

    def _nondomain_face(self, arc: int) -> int:
        left_inside = self.emb.domain_side[arc] is Side.LEFT
        return self.face_of[(arc, not left_inside)]

    # -- tree polygon placement -------------------------------------------

    def place_polygon(self, pid: int, center: Point, r: float,
                      entry: Optional[tuple[int, float]]) -> None:
        """entry is (corner index, fixed angle) when attached to a parent."""
        ccw = self._ccw(pid)
        self.circles[pid] = (center[0], center[1], r, ccw)
        p = self.s.polygons[pid]
        k = len(p.corners)
        if k == 0:
            return
        d = 1.0 if ccw else -1.0
        if entry is None:
            base_i, base_a = 0, 0.6
        else:
            base_i, base_a = entry
        for j in range(k):
            i = (base_i + j) % k
            self.corner_angle[(pid, i)] = (base_a + d * TAU * j / k) % TAU
        self._attach_children(pid, skip=None if entry is None else base_i)

    def _attach_children(self, pid: int, skip: Optional[int]) -> None:
        p = self.s.polygons[pid]
        cx, cy, r, _ = self.circles[pid]
        k = len(p.corners)
        budget = r * min(0.30, 0.62 * math.sin(math.pi / max(k, 2)))
        for i, c in enumerate(p.corners):
            if i == skip or c.neighbor in self.circles \
                    or self._in_placed_ring(c.neighbor):
                continue
            x = _on((cx, cy), r, self.corner_angle[(pid, i)])
            self.vertex_points.setdefault(c.vertex, x)
            u = self.corner_angle[(pid, i)]
            self._place_unit(c.neighbor, c.vertex, x, u, budget, c.nested)

    def _in_placed_ring(self, pid: int) -> bool:
        return pid in self._ring_of and \
            any(b in self.circles for b in self._ring_of[pid].beads)

    # -- unit dispatch ------------------------------------------------------

    def _place_unit(self, pid: int, vertex: int, x: Point, u_out: float,
                    budget: float, nested: bool) -> None:
        """Place the unit owning pid so its circle meets x, tangent to the
        parent circle: outside it normally, inside when nested."""
        ring = self._ring_of.get(pid)
        if ring is None:
            rc = budget
            off = rc if not nested else -rc
            center = _on(x, off, u_out)
            entry_i = self._corner_index(pid, vertex)
            entry_a = _ang(center, x)
            self.place_polygon(pid, center, rc, (entry_i, entry_a))
        else:
            self._place_ring(ring, pid, vertex, x, u_out, budget, nested)

    def _corner_index(self, pid: int, vertex: int) -> int:
        for q, i in self.at_vertex[vertex]:
            if q == pid:
                return i
        raise ShadowError("E_LAYOUT",
                          f"polygon {pid} has no corner at vertex {vertex}")

    # -- necklace rings ------------------------------------------------------

    def _place_ring(self, ring, att_pid: int, att_vertex: Optional[int],
                    x: Optional[Point], u_out: Optional[float],
                    budget: float, nested: bool) -> None:
        beads = ring.beads
        m = len(beads)
        sinp = math.sin(math.pi / m)
        if x is None:
            rho = budget / (1.0 + sinp)
            rb = rho * sinp
            c_ring = (0.0, 0.0)
            att_angle = math.pi / 2
        else:
            rho = 0.95 * budget / (1.0 + sinp)
            rb = rho * sinp
            off = rb if not nested else -rb
            bead_c = _on(x, off, u_out)
            v = off / abs(off)
            c_ring = _on(bead_c, rho, u_out if v > 0 else u_out + math.pi)
            att_angle = _ang(c_ring, bead_c)

        att_k = beads.index(att_pid)
        for ring_dir in (1.0, -1.0):
            if self._try_ring(ring, c_ring, rho, rb, att_k, att_angle,
                              ring_dir, att_vertex, x):
                self.annuli.append((c_ring[0], c_ring[1],
                                    rho - rb, rho + rb))
                for pid in beads:
                    self._attach_children(pid, skip=None)
                return
        raise ShadowError("E_LAYOUT",
                          "ring orientation cannot realize the bead spans")

    def _try_ring(self, ring, c_ring: Point, rho: float, rb: float,
                  att_k: int, att_angle: float, ring_dir: float,
                  att_vertex: Optional[int], x: Optional[Point]) -> bool:
        """Tentatively place all beads; back out on span mismatch."""
        beads = ring.beads
        m = len(beads)
        centers = [_on(c_ring, rho,
                       att_angle + ring_dir * TAU * ((k - att_k) % m) / m)
                   for k in range(m)]
        added_c: list[int] = []
        added_ca: list[tuple[int, int]] = []
        added_v: list[int] = []

        def undo() -> None:
            for pid in added_c:
                del self.circles[pid]
            for key in added_ca:
                del self.corner_angle[key]
            for vid in added_v:
                del self.vertex_points[vid]

        # joint tangency points; joints[i] sits between beads[i], beads[i+1]
        joint_pt: dict[int, Point] = {}
        for i in range(m):
            a, b = centers[i], centers[(i + 1) % m]
            pt = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            vid = ring.joints[i]
            joint_pt[vid] = pt
            if vid not in self.vertex_points:
                self.vertex_points[vid] = pt
                added_v.append(vid)

        hole_face, out_face = self._ring_faces(ring, att_vertex)
        if hole_face is None:
            undo()
            return False

        for k, pid in enumerate(beads):
            if not self._lay_bead(ring, k, pid, centers[k], rb, c_ring,
                                  joint_pt, hole_face, att_vertex, x,
                                  added_c, added_ca):
                undo()
                return False
        return True

    def _ring_faces(self, ring, att_vertex: Optional[int]):
        """(hole face, outside face) of the annulus, from the embedding."""
        beads = set(ring.beads)
        cand: set[int] = set()
        for pid in beads:
            for a in self.s.polygons[pid].sides:
                cand.add(self._nondomain_face(a))
        if len(cand) != 2:
            return None, None
        if att_vertex is None:
            out = self.emb.outer_face
            if out not in cand:
                return None, None
        else:
            att_pid = next(p for p, _ in self.at_vertex[att_vertex]
                           if p in beads)
            i = self._corner_index(att_pid, att_vertex)
            out = self._nondomain_face(self.s.polygons[att_pid].sides[i])
        cand.discard(out)
        if len(cand) != 1:
            return None, None
        return cand.pop(), out

    def _lay_bead(self, ring, k: int, pid: int, center: Point, rb: float,
                  c_ring: Point, joint_pt: dict[int, Point], hole_face: int,
                  att_vertex: Optional[int], x: Optional[Point],
                  added_c: list, added_ca: list) -> bool:
        p = self.s.polygons[pid]
        ccw = self._ccw(pid)
        self.circles[pid] = (center[0], center[1], rb, ccw)
        added_c.append(pid)
        kc = len(p.corners)
        prev_vid = ring.joints[(k - 1) % len(ring.beads)]
        next_vid = ring.joints[k]
        ja = [i for i, c in enumerate(p.corners)
              if c.vertex in (prev_vid, next_vid)
              and c.neighbor in ring.beads]
        if len(ja) != 2:
            return False
        iA, iB = ja
        angs: dict[int, float] = {
            iA: _ang(center, joint_pt[p.corners[iA].vertex]),
            iB: _ang(center, joint_pt[p.corners[iB].vertex]),
        }

        def span_corners(lo: int, hi: int) -> list[int]:
            out = []
            i = (lo + 1) % kc
            while i != hi:
                out.append(i)
                i = (i + 1) % kc
            return out

        for lo, hi in ((iA, iB), (iB, iA)):
            mids = span_corners(lo, hi)
            a0, a1 = angs[lo], angs[hi]
            span = _fwd_span(a0, a1, ccw)
            d = 1.0 if ccw else -1.0
            # the walk from lo to hi must cross the correct region: the
            # span holds sides facing the hole iff its sweep passes the
            # point of the bead circle nearest the ring center
            toward_hole = _ang(center, c_ring)
            t = _fwd_span(a0, toward_hole, ccw)
            geom_hole = t < span
            first_side = p.sides[(lo + 1) % kc]
            comb_hole = self._nondomain_face(first_side) == hole_face
            if geom_hole != comb_hole:
                return False
            pinned = None
            if att_vertex is not None:
                for pos, ci in enumerate(mids):
                    if p.corners[ci].vertex == att_vertex and x is not None:
                        pinned = (pos, _ang(center, x))
            if pinned is None:
                for pos, ci in enumerate(mids):
                    angs[ci] = (a0 + d * span * (pos + 1)
                                / (len(mids) + 1)) % TAU
            else:
                pe, ae = pinned
                t_e = _fwd_span(a0, ae, ccw)
                for pos, ci in enumerate(mids):
                    if pos < pe:
                        angs[ci] = (a0 + d * t_e * (pos + 1) / (pe + 1)) % TAU
                    elif pos == pe:
                        angs[ci] = ae % TAU
                    else:
                        rest = span - t_e
                        angs[ci] = (ae + d * rest * (pos - pe)
                                    / (len(mids) - pe)) % TAU
        for i in range(kc):
            self.corner_angle[(pid, i)] = angs[i]
            added_ca.append((pid, i))
        return True

    # -- curve extraction ---------------------------------------------------

    def build_paths(self) -> dict[int, tuple[Point, ...]]:
        arc_paths: dict[int, tuple[Point, ...]] = {}
        for p in self.s.polygons:
            cx, cy, r, ccw = self.circles[p.id]
            d = 1.0 if ccw else -1.0
            k = len(p.corners)
            if k == 0:
                pts = [_on((cx, cy), r, d * TAU * j / 64) for j in range(64)]
                pts.append(pts[0])
                if not self.idx.walk_dirs[p.id][0]:
                    pts.reverse()
                arc_paths[p.sides[0]] = tuple(pts)
                continue
            gaps = []
            for i in range(k):
                a_prev = self.corner_angle[(p.id, (i - 1) % k)]
                a_here = self.corner_angle[(p.id, i)]
                gaps.append(_fwd_span(a_prev, a_here, ccw))
            delta = min(0.20, 0.30 * min(gaps))
            for i, arc in enumerate(p.sides):
                a_prev = self.corner_angle[(p.id, (i - 1) % k)]
                a_here = self.corner_angle[(p.id, i)]
                span = _fwd_span(a_prev, a_here, ccw) - 2 * delta
                start = a_prev + d * delta
                steps = max(4, int(math.ceil(abs(span) / 0.10)))
                pts = [_on((cx, cy), r, start + d * span * j / steps)
                       for j in range(steps + 1)]
                if not self.idx.walk_dirs[p.id][i]:
                    pts.reverse()
                arc_paths[arc] = tuple(pts)
        return arc_paths


def layout_shadow(shadow: DecoratedShadow,
                  index: Optional[ShadowIndex] = None) -> Layout:
    """Coordinates for a tree-like or tree-necklace shadow; E_LAYOUT when
    the block structure is general or rings share a bead."""
    if index is None:
        index = validate_shadow(shadow)
    emb = derive_embedding(shadow, index)
    rep = classify(shadow, index)
    if rep.kind is ShadowKind.GENERAL:
        raise ShadowError("E_LAYOUT",
                          f"no disk layout for general shadows: {rep.note}")
    ring_of: dict[int, object] = {}
    for ring in rep.rings:
        for pid in ring.beads:
            if pid in ring_of:
                raise ShadowError("E_LAYOUT",
                                  "rings sharing a bead have no annulus "
                                  "layout")
            ring_of[pid] = ring

    b = _LayoutBuilder(shadow, index, emb, ring_of)
    root_pid = shadow.owner[shadow.outer_arc]
    if root_pid in ring_of:
        b._place_ring(ring_of[root_pid], root_pid, None, None, None,
                      1.0, False)
    else:
        b.place_polygon(root_pid, (0.0, 0.0), 1.0, None)

    missing = [p.id for p in shadow.polygons if p.id not in b.circles]
    if missing:
        raise ShadowError("E_LAYOUT",
                          f"layout left polygons unplaced: {missing}")
    arc_paths = b.build_paths()
    poly: list[Point] = []
    for arc in shadow.traversal:
        poly.extend(arc_paths[arc])
    poly.append(poly[0])
    return Layout(circles=b.circles, vertex_points=b.vertex_points,
                  arc_paths=arc_paths, polyline=tuple(poly),
                  annuli=tuple(b.annuli))


def polyline_turning(poly) -> float:
    """Whole turns of the tangent along a closed polyline."""
    segs = []
    for i in range(len(poly) - 1):
        dx = poly[i + 1][0] - poly[i][0]
        dy = poly[i + 1][1] - poly[i][1]
        if dx * dx + dy * dy > 1e-18:
            segs.append(math.atan2(dy, dx))
    tot = 0.0
    for i in range(len(segs)):
        d = segs[(i + 1) % len(segs)] - segs[i]
        while d > math.pi:
            d -= TAU
        while d < -math.pi:
            d += TAU
        tot += d
    return tot / TAU


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def render_svg(shadow: DecoratedShadow, coor=None,
               index: Optional[ShadowIndex] = None
               ) -> tuple[str, Layout]:
    """SVG 1.1 document plus the layout it was drawn from.

    With a coorientation, conormal arrows decorate every arc and a star
    marks each conflicting transition.
    """
    if index is None:
        index = validate_shadow(shadow)
    lay = layout_shadow(shadow, index)
    emb = derive_embedding(shadow, index)

    xs = [p[0] for p in lay.polyline]
    ys = [p[1] for p in lay.polyline]
    for cx, cy, r, _ in lay.circles.values():
        xs.extend((cx - r, cx + r))
        ys.extend((cy - r, cy + r))
    pad = 0.25
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    scale = 480.0 / max(w, h)

    def to_px(p: Point) -> tuple[float, float]:
        return ((p[0] - x0) * scale, (h - (p[1] - y0)) * scale)

    def sx(p: Point) -> str:
        px, py = to_px(p)
        return f"{_fmt(px)},{_fmt(py)}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(w * scale)}" height="{_fmt(h * scale)}" '
        f'viewBox="0 0 {_fmt(w * scale)} {_fmt(h * scale)}">',
    ]
    for cx, cy, rin, rout in lay.annuli:
        for r in (rin, rout):
            parts.append(
                f'<circle cx="{_fmt((cx - x0) * scale)}" '
                f'cy="{_fmt((h - (cy - y0)) * scale)}" r="{_fmt(r * scale)}" '
                f'fill="none" stroke="#bbbbbb" stroke-width="1"/>')
    for pid in sorted(lay.circles):
        cx, cy, r, _ = lay.circles[pid]
        parts.append(
            f'<circle cx="{_fmt((cx - x0) * scale)}" '
            f'cy="{_fmt((h - (cy - y0)) * scale)}" r="{_fmt(r * scale)}" '
            f'fill="none" stroke="#dddddd" stroke-width="0.7" '
            f'stroke-dasharray="3 3"/>')
    path = "M " + " L ".join(sx(p) for p in lay.polyline) + " Z"
    parts.append(f'<path d="{path}" fill="none" stroke="#000000" '
                 f'stroke-width="1.6"/>')

    if coor is not None:
        rep = conflicts(shadow, coor, index, emb)
        for a in range(shadow.n_arcs):
            pts = lay.arc_paths[a]
            mid = pts[len(pts) // 2]
            nxt = pts[min(len(pts) - 1, len(pts) // 2 + 1)]
            dx, dy = nxt[0] - mid[0], nxt[1] - mid[1]
            ln = math.hypot(dx, dy) or 1.0
            # left normal of the travel direction
            nx_, ny_ = -dy / ln, dx / ln
            into_left = (emb.domain_side[a] is Side.LEFT) \
                == (coor[a] is Coor.INWARD)
            s = 1.0 if into_left else -1.0
            tip = (mid[0] + s * nx_ * 0.14, mid[1] + s * ny_ * 0.14)
            mx, my = to_px(mid)
            tx, ty = to_px(tip)
            parts.append(f'<line x1="{_fmt(mx)}" y1="{_fmt(my)}" '
                         f'x2="{_fmt(tx)}" y2="{_fmt(ty)}" '
                         f'stroke="#cc3333" stroke-width="1.2"/>')
        for v in shadow.vertices:
            pt = lay.vertex_points[v.id]
            for t in range(2):
                if rep.per_transition[v.id][t]:
                    off = 0.06 if t else -0.06
                    px, py = to_px((pt[0] + off, pt[1] + off))
                    parts.append(
                        f'<text x="{_fmt(px)}" y="{_fmt(py)}" '
                        f'font-size="14" fill="#cc3333" '
                        f'text-anchor="middle">*</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n", lay
