"""JSON interchange: shadow files, coorientation certificates, turning
profiles, and solution reports.

The shadow document is version 1 and hand-writable; optional embedding
data is cross-checked against the derived one on load, never trusted.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from ..coorient import Coor
from ..embed import derive_embedding
from ..gauss import TurningProfile, validate_profile
from ..model import (Corner, DecoratedShadow, End, Polygon, ShadowError,
                     Side, Vertex, validate_shadow)
from ..solve import Solution

SCHEMA_VERSION = 1


def shadow_to_dict(shadow: DecoratedShadow,
                   include_embedding: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "version": SCHEMA_VERSION,
        "arcs": [{"id": a, "polygon": shadow.owner[a]}
                 for a in range(shadow.n_arcs)],
        "vertices": [
            {"id": v.id,
             "rotation": [[a, e.value] for a, e in v.rotation],
             "transitions": [list(t) for t in v.transitions],
             "sign": v.sign}
            for v in shadow.vertices],
        "polygons": [
            {"id": p.id,
             "sides": list(p.sides),
             "corners": [
                 {"vertex": c.vertex, "neighbor": c.neighbor,
                  **({"nested": True} if c.nested else {})}
                 for c in p.corners]}
            for p in shadow.polygons],
        "traversal": list(shadow.traversal),
        "outer": {"arc": shadow.outer_arc, "side": shadow.outer_side.value},
    }
    if include_embedding:
        emb = derive_embedding(shadow)
        doc["embedding"] = {
            "domain_side": {str(a): emb.domain_side[a].value
                            for a in range(shadow.n_arcs)}}
    return doc


def _need(doc: dict, key: str):
    if key not in doc:
        raise ShadowError("E_SCHEMA", f"shadow file misses {key!r}")
    return doc[key]


def shadow_from_dict(doc: dict[str, Any]) -> DecoratedShadow:
    """Parse and fully validate a version-1 shadow document."""
    if not isinstance(doc, dict):
        raise ShadowError("E_SCHEMA", "shadow file must be a JSON object")
    if _need(doc, "version") != SCHEMA_VERSION:
        raise ShadowError("E_SCHEMA",
                          f"unsupported version {doc.get('version')!r}")
    arcs = _need(doc, "arcs")
    owner = [-1] * len(arcs)
    try:
        for rec in arcs:
            owner[rec["id"]] = rec["polygon"]
    except (KeyError, IndexError, TypeError) as e:
        raise ShadowError("E_SCHEMA", f"bad arcs table: {e}") from None

    def side_of(tok: Any) -> Side:
        try:
            return Side(tok)
        except ValueError:
            raise ShadowError("E_SCHEMA", f"bad side {tok!r}") from None

    try:
        vertices = tuple(
            Vertex(id=rec["id"],
                   rotation=tuple((a, End(e)) for a, e in rec["rotation"]),
                   transitions=tuple((i, o) for i, o in rec["transitions"]),
                   sign=rec["sign"])
            for rec in _need(doc, "vertices"))
        polygons = tuple(
            Polygon(id=rec["id"], sides=tuple(rec["sides"]),
                    corners=tuple(
                        Corner(vertex=c["vertex"], neighbor=c["neighbor"],
                               nested=bool(c.get("nested", False)))
                        for c in rec["corners"]))
            for rec in _need(doc, "polygons"))
        outer = _need(doc, "outer")
        shadow = DecoratedShadow(
            owner=tuple(owner), vertices=vertices, polygons=polygons,
            traversal=tuple(_need(doc, "traversal")),
            outer_arc=outer["arc"], outer_side=side_of(outer["side"]))
    except ShadowError:
        raise
    except (KeyError, ValueError, TypeError) as e:
        raise ShadowError("E_SCHEMA", f"malformed shadow file: {e}") from None

    index = validate_shadow(shadow)
    emb_doc = doc.get("embedding")
    if emb_doc is not None:
        stated = emb_doc.get("domain_side", {})
        expected = []
        for a in range(shadow.n_arcs):
            tok = stated.get(str(a))
            if tok is None:
                raise ShadowError("E_SCHEMA",
                                  f"embedding misses domain side of arc {a}")
            expected.append(side_of(tok))
        derive_embedding(shadow, index, expected_domain_side=tuple(expected))
    return shadow


def dumps_shadow(shadow: DecoratedShadow,
                 include_embedding: bool = False) -> str:
    return json.dumps(shadow_to_dict(shadow, include_embedding),
                      indent=1) + "\n"


def load_shadow(path: str) -> DecoratedShadow:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ShadowError("E_SCHEMA", f"not JSON: {e}") from None
    return shadow_from_dict(doc)


def save_shadow(path: str, shadow: DecoratedShadow,
                include_embedding: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_shadow(shadow, include_embedding))


# -- coorientation certificates ----------------------------------------

def coor_to_dict(coor, budget: Optional[int] = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"coorientation": [c.value for c in coor]}
    if budget is not None:
        doc["budget"] = budget
    return doc


def coor_from_dict(doc: dict[str, Any],
                   n_arcs: Optional[int] = None
                   ) -> tuple[tuple, Optional[int]]:
    if not isinstance(doc, dict) or "coorientation" not in doc:
        raise ShadowError("E_SCHEMA",
                          "certificate needs a coorientation list")
    try:
        coor = tuple(Coor(tok) for tok in doc["coorientation"])
    except ValueError as e:
        raise ShadowError("E_SCHEMA", f"bad coorientation token: {e}") \
            from None
    if n_arcs is not None and len(coor) != n_arcs:
        raise ShadowError("E_SCHEMA",
                          f"certificate covers {len(coor)} arcs, "
                          f"shadow has {n_arcs}")
    budget = doc.get("budget")
    if budget is not None and not isinstance(budget, int):
        raise ShadowError("E_SCHEMA", "budget must be an integer")
    return coor, budget


def load_certificate(path: str,
                     n_arcs: Optional[int] = None
                     ) -> tuple[tuple, Optional[int]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ShadowError("E_SCHEMA", f"not JSON: {e}") from None
    return coor_from_dict(doc, n_arcs)


# -- turning profiles ----------------------------------------------------

def profile_from_dict(doc: dict[str, Any]) -> TurningProfile:
    if not isinstance(doc, dict) or "breakpoints" not in doc \
            or "rot" not in doc:
        raise ShadowError("E_SCHEMA",
                          "profile needs breakpoints and rot fields")
    try:
        profile = TurningProfile(
            breakpoints=tuple(float(b) for b in doc["breakpoints"]),
            rot=int(doc["rot"]))
    except (TypeError, ValueError) as e:
        raise ShadowError("E_SCHEMA", f"malformed profile: {e}") from None
    validate_profile(profile)
    return profile


def load_profile(path: str) -> TurningProfile:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ShadowError("E_SCHEMA", f"not JSON: {e}") from None
    return profile_from_dict(doc)


# -- solution reports ----------------------------------------------------

def solution_to_dict(sol: Solution) -> dict[str, Any]:
    """Machine-readable report.  Timing is deliberately left out so the
    bytes depend only on the instance."""
    doc: dict[str, Any] = {
        "value": sol.value,
        "status": sol.status,
        "method": sol.method,
        "witness": None if sol.witness is None
        else [c.value for c in sol.witness],
    }
    if sol.conflict_report is not None:
        rep = sol.conflict_report
        doc["conflicts"] = rep.total
        doc["conflict_locations"] = [
            [v, t] for v, pair in enumerate(rep.per_transition)
            for t, hit in enumerate(pair) if hit]
    if sol.stats is not None:
        doc["stats"] = {"nodes": sol.stats.nodes,
                        "states": sol.stats.states}
    if sol.note:
        doc["note"] = sol.note
    return doc
