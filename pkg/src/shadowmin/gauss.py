"""Unit-tangent invariants: rotation number from crossing data, turning
profiles, minimum circular covering depth, and parallel-tangent bounds.

A turning profile models the tangent-angle history of a generic curve:
a cyclic chain of strictly monotone angle intervals on the universal
cover, reversing direction at every interior breakpoint (a fold).  The
covering depth is the least number of times the monotone intervals pass
over a regular direction of the circle, counted with winding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .model import (DecoratedShadow, ShadowError, ShadowIndex, Side,
                    _expected_sign, validate_shadow)

TAU = 2.0 * math.pi

# fold images closer than this are treated as one critical angle
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class TurningProfile:
    """Tangent-angle breakpoints on the universal cover plus the declared
    whole turns.

    breakpoints[0] is the seam; interior entries are folds, so consecutive
    gaps alternate in sign and the interval count is odd.  The last entry
    must equal breakpoints[0] + 2*pi*rot.
    """

    breakpoints: tuple[float, ...]
    rot: int


@dataclass(frozen=True)
class PtBounds:
    """Provable bounds on the parallel-tangent count of a shadow class:
    every realization meets `lower` tangents in a regular direction and
    the count always has parity `parity`."""

    lower: int
    parity: int
    rot: int
    note: Optional[str] = None


@dataclass(frozen=True)
class ObstructionReport:
    implied: bool
    reason: str
    bounds: PtBounds
    depth: Optional[int] = None
    witness: Optional[float] = None


def validate_profile(profile: TurningProfile) -> None:
    """Check the turning-profile contract.

    Raises E_SCHEMA for structural violations (interval count, fold
    alternation, closure) and E_DEGENERATE when breakpoints coincide
    within tolerance, leaving a zero-length interval.
    """
    bps = profile.breakpoints
    if len(bps) < 2:
        raise ShadowError("E_SCHEMA", "profile needs at least one interval")
    m = len(bps) - 1
    if m % 2 == 0:
        raise ShadowError(
            "E_SCHEMA",
            f"{m} intervals give an odd fold count on the closed curve")
    deltas = [bps[i + 1] - bps[i] for i in range(m)]
    for i, d in enumerate(deltas):
        if abs(d) <= ANGLE_TOL:
            raise ShadowError(
                "E_DEGENERATE",
                f"breakpoints {i} and {i + 1} coincide within tolerance")
    for i in range(1, m):
        if (deltas[i] > 0) == (deltas[i - 1] > 0):
            raise ShadowError(
                "E_SCHEMA",
                f"breakpoint {i} is not a fold: direction does not reverse")
    closure = bps[-1] - bps[0] - TAU * profile.rot
    if abs(closure) > 1e-6:
        raise ShadowError(
            "E_SCHEMA",
            f"total displacement misses 2*pi*{profile.rot} by {closure:g}")


def _first_passes(shadow: DecoratedShadow, start: int) -> list[int]:
    """Transition index reached first at each vertex when the Euler
    circuit is read starting from arc `start`."""
    t_index: dict[int, tuple[int, int]] = {}
    for v in shadow.vertices:
        for k, (ain, _aout) in enumerate(v.transitions):
            t_index[ain] = (v.id, k)
    first = [-1] * shadow.n_vertices
    if not shadow.vertices:
        return first
    pos = shadow.traversal.index(start)
    L = len(shadow.traversal)
    for i in range(L):
        arc = shadow.traversal[(pos + i) % L]
        vid, k = t_index[arc]
        if first[vid] < 0:
            first[vid] = k
    return first


def rotation_number(shadow: DecoratedShadow,
                    index: Optional[ShadowIndex] = None) -> int:
    """Whitney rotation number of any curve tracing the shadow.

    Crossing signs are re-read relative to a base point on the marked
    outer arc (+1 when the branch met second crosses the branch met
    first from left to right), summed, and corrected by the outer-loop
    turn: +1 when the unbounded face lies to the right of the marked
    arc, -1 when to the left.  The result does not depend on which
    outer arc carries the mark; the sign pairing is validated against a
    polyline turning oracle.
    """
    if index is None:
        index = validate_shadow(shadow)
    if not (0 <= shadow.outer_arc < shadow.n_arcs) \
            or shadow.outer_arc not in shadow.traversal:
        raise ShadowError("E_NO_OUTER", "outer mark is not on any arc")
    first = _first_passes(shadow, shadow.outer_arc)
    # swapped passage order realizes the left-to-right convention
    total = sum(_expected_sign(v, 1 - first[v.id]) for v in shadow.vertices)
    eps = 1 if shadow.outer_side is Side.RIGHT else -1
    return total + eps


def _winding_count(bps: tuple[float, ...], u: float) -> int:
    tot = 0
    for i in range(len(bps) - 1):
        lo, hi = sorted((bps[i], bps[i + 1]))
        tot += math.floor((hi - u) / TAU) - math.floor((lo - u) / TAU)
    return tot


def covering_depth(profile: TurningProfile,
                   projective: bool = False) -> tuple[int, float]:
    """Minimum winding multiplicity over regular directions, with a
    witness angle in a minimizing open sector.

    The critical set is the breakpoint images mod 2*pi; the sweep
    evaluates one midpoint per open sector between merged critical
    angles.  With `projective` the angles are doubled first, so the
    sweep runs over line directions; the witness stays in the doubled
    coordinate.
    """
    validate_profile(profile)
    bps = profile.breakpoints
    if projective:
        bps = tuple(2.0 * b for b in bps)

    images = sorted(b % TAU for b in bps)
    merged: list[float] = []
    for a in images:
        if not merged or a - merged[-1] > ANGLE_TOL:
            merged.append(a)
    if len(merged) > 1 and (merged[0] + TAU) - merged[-1] <= ANGLE_TOL:
        merged.pop()
    if not merged:
        raise ShadowError("E_DEGENERATE", "no critical angles to sweep")

    best: Optional[tuple[int, float]] = None
    k = len(merged)
    for i in range(k):
        lo = merged[i]
        hi = merged[(i + 1) % k] + (TAU if i == k - 1 else 0.0)
        if k == 1:
            hi = lo + TAU
        if hi - lo <= 2 * ANGLE_TOL:
            continue
        u = (lo + hi) / 2.0 % TAU
        c = _winding_count(bps, u)
        if best is None or c < best[0]:
            best = (c, u)
    if best is None:
        raise ShadowError("E_DEGENERATE",
                          "critical angles leave no regular sector")
    return best


def pt_bounds(shadow: DecoratedShadow,
              index: Optional[ShadowIndex] = None) -> PtBounds:
    """Lower bound and parity of the parallel-tangent count: any
    realization's tangent map has degree rot, so every regular direction
    is hit at least |rot| times and with that parity."""
    rot = rotation_number(shadow, index)
    note = None
    if rot == 0:
        note = ("rotation number 0: parity forces an even count, "
                "but 0 itself is not excluded by the bound")
    return PtBounds(lower=abs(rot), parity=abs(rot) % 2, rot=rot, note=note)


def gauss_obstruction(
        shadow: DecoratedShadow,
        profile_evidence: Optional[TurningProfile] = None,
        index: Optional[ShadowIndex] = None) -> ObstructionReport:
    """Inflection obstruction from tangent-map evidence.

    When a caller-asserted forced profile winds deeper than |rot|, an
    inflection-free realization is impossible, so the minimum is
    positive.  Without such evidence the report is inconclusive; this
    never claims the true parallel-tangent count was computed.
    """
    bounds = pt_bounds(shadow, index)
    if profile_evidence is None:
        return ObstructionReport(
            implied=False,
            reason="no profile evidence; degree bounds attached",
            bounds=bounds)
    if profile_evidence.rot != bounds.rot:
        return ObstructionReport(
            implied=False,
            reason=(f"profile declares {profile_evidence.rot} turns but the "
                    f"shadow has rotation number {bounds.rot}"),
            bounds=bounds)
    depth, witness = covering_depth(profile_evidence)
    if depth > abs(bounds.rot):
        return ObstructionReport(
            implied=True,
            reason=(f"supplied profile has covering depth {depth} > "
                    f"|rot| = {abs(bounds.rot)}: every realization with "
                    "this profile carries an inflection"),
            bounds=bounds, depth=depth, witness=witness)
    return ObstructionReport(
        implied=False,
        reason=f"covering depth {depth} does not exceed |rot|",
        bounds=bounds, depth=depth, witness=witness)
