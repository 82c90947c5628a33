"""Batch measurement harness.

An experiment file lists generator descriptions; each one is built,
classified and solved, and the results land in one CSV row per entry.
Rows keep the order of the file no matter how the work is scheduled,
so a fixed file and fixed seeds give a reproducible table.
"""

from __future__ import annotations

import csv
import io
import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from ..blocks import classify
from ..model import DecoratedShadow, ShadowError, Side, validate_shadow
from ..solve import mu, mu_loc
from .generate import (circle, curl, curl_chain, figure_eight, necklace,
                       splice_curl, tree_like_random, trefoil)

CSV_COLUMNS = ("seed", "n", "sides", "kind", "mu_loc", "mu_necklace",
               "gap", "wall_ms")

KINDS = ("TreeLikeRandom", "CurlChain", "Necklace", "FigureEight",
         "Curl", "Trefoil")


@dataclass(frozen=True)
class GeneratorSpec:
    """One deterministic instance description.

    kind picks the family, seed pins every random choice, and the size
    fields mean: n crossings for TreeLikeRandom, m loops for CurlChain,
    m beads for Necklace.  attach decorates a necklace with small loops,
    either an explicit list of (arc, side) pairs applied in order or a
    count of seeded random ones.
    """
    kind: str
    seed: int = 0
    n: int = 0
    m: int = 0
    attach: tuple = field(default=())


def parse_generator(d: dict) -> GeneratorSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ShadowError("E_SPEC", "generator entry needs a kind")
    kind = d["kind"]
    if kind not in KINDS:
        raise ShadowError("E_SPEC", f"unknown generator kind {kind!r}")
    seed = d.get("seed", 0)
    if not isinstance(seed, int) or not -2**63 <= seed < 2**64:
        raise ShadowError("E_SPEC", "seed must be a 64-bit integer")
    n = d.get("n", 0)
    m = d.get("m", 0)
    if kind == "TreeLikeRandom" and (not isinstance(n, int) or n < 0):
        raise ShadowError("E_SPEC", "TreeLikeRandom needs n >= 0")
    if kind == "CurlChain" and (not isinstance(m, int) or m < 1):
        raise ShadowError("E_SPEC", "CurlChain needs m >= 1")
    if kind == "Necklace" and (not isinstance(m, int) or m < 3 or m % 2 == 0):
        raise ShadowError("E_SPEC", "Necklace needs odd m >= 3")
    attach = d.get("attach", ())
    if isinstance(attach, int):
        if attach < 0:
            raise ShadowError("E_SPEC", "attach count must be >= 0")
        attach = (attach,)
    elif isinstance(attach, (list, tuple)):
        out = []
        for item in attach:
            try:
                arc, side = item
                out.append((int(arc), Side(side)))
            except (TypeError, ValueError) as exc:
                raise ShadowError(
                    "E_SPEC", f"bad attach entry {item!r}") from exc
        attach = tuple(out)
    else:
        raise ShadowError("E_SPEC", "attach must be a count or a list")
    extra = set(d) - {"kind", "seed", "n", "m", "attach"}
    if extra:
        raise ShadowError("E_SPEC", f"unknown fields {sorted(extra)}")
    return GeneratorSpec(kind=kind, seed=seed, n=n, m=m, attach=attach)


def build_generator(spec: GeneratorSpec) -> DecoratedShadow:
    """Instantiate; same spec always returns an identical shadow."""
    if spec.kind == "FigureEight":
        return figure_eight()
    if spec.kind == "Curl":
        return curl()
    if spec.kind == "Trefoil":
        return trefoil()
    if spec.kind == "CurlChain":
        return curl_chain(spec.m)
    if spec.kind == "TreeLikeRandom":
        if spec.n == 0:
            return circle()
        return tree_like_random(spec.n, spec.seed)
    s = necklace(spec.m)
    if len(spec.attach) == 1 and isinstance(spec.attach[0], int):
        rng = random.Random(spec.seed)
        for _ in range(spec.attach[0]):
            arc = rng.randrange(s.n_arcs)
            side = Side.LEFT if rng.random() < 0.5 else Side.RIGHT
            s = splice_curl(s, arc, side)
    else:
        for arc, side in spec.attach:
            s = splice_curl(s, arc, side)
    return s


def load_experiment(path: str) -> tuple[GeneratorSpec, ...]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ShadowError("E_SPEC", f"cannot read experiment file: {exc}")
    if not isinstance(doc, dict) or doc.get("version") != 1:
        raise ShadowError("E_SPEC", "experiment file must have version 1")
    entries = doc.get("instances", [])
    if not isinstance(entries, list):
        raise ShadowError("E_SPEC", "instances must be a list")
    return tuple(parse_generator(e) for e in entries)


def _measure(spec: GeneratorSpec, timed: bool) -> tuple:
    shadow = build_generator(spec)
    index = validate_shadow(shadow)
    kind = classify(shadow, index).kind.value
    t0 = time.perf_counter()
    lo = mu_loc(shadow, index)
    hi = mu(shadow, index)
    ms = (time.perf_counter() - t0) * 1e3
    wall = f"{ms:.3f}" if timed else "0.000"
    return (spec.seed, shadow.n_vertices, shadow.n_arcs, kind,
            lo.value, hi.value, hi.value - lo.value, wall)


def thread_budget() -> int:
    """Worker cap from SHADOWMIN_THREADS, else the machine's cores."""
    raw = os.environ.get("SHADOWMIN_THREADS", "")
    if raw.strip():
        try:
            k = int(raw)
        except ValueError:
            raise ShadowError("E_SPEC",
                              f"SHADOWMIN_THREADS={raw!r} is not a number")
        if k < 1:
            raise ShadowError("E_SPEC", "SHADOWMIN_THREADS must be >= 1")
        return k
    return os.cpu_count() or 1


def run_experiment(specs, timed: bool = False,
                   threads: Optional[int] = None) -> list[tuple]:
    """Rows in spec order; scheduling never reorders them.

    Timing is off by default so the CSV bytes are a pure function of the
    spec file; timed runs fill wall_ms with real measurements.
    """
    if threads is None:
        threads = thread_budget()
    if threads == 1 or len(specs) <= 1:
        return [_measure(s, timed) for s in specs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: _measure(s, timed), specs))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()
