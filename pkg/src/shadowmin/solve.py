"""Exact minimization of conflict counts over admissible coorientations.

Tree-like shadows decompose along the block tree; every polygon is a
cyclic chain of side variables whose corner couplings join consecutive
sides, so each block solves by a pinned chain DP in linear time.  A
necklace ring becomes a chain of bead tables closed at its anchor bead,
with the ring parity carried through the chain and conditioned on the
anchor's closing corner pair.  The brute-force enumerator is the oracle
everything else is checked against.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .blocks import Ring, ShadowKind, classify, cycle_blocks
from .coorient import Coor, ConflictReport, conflicts
from .embed import Embedding, derive_embedding
from .model import (DecoratedShadow, ShadowError, ShadowIndex, Side,
                    validate_shadow)

BIG = 1 << 40
MAX_BRUTE_ARCS = 26


@dataclass(frozen=True)
class SolveStats:
    """nodes is the count of problem units processed (assignments for the
    enumerator, polygons for the DP engines); states counts materialized
    table entries.  wall_ms is a measurement, never part of any
    serialized output."""
    nodes: int
    states: int
    wall_ms: float


@dataclass(frozen=True)
class Solution:
    value: int
    witness: tuple | None
    status: str
    method: str
    note: str = ""
    conflict_report: ConflictReport | None = None
    stats: SolveStats | None = None


def _bits_to_coor(bits) -> tuple:
    return tuple(Coor.INWARD if b else Coor.OUTWARD for b in bits)


# -- brute force --------------------------------------------------------

def solve_bruteforce(shadow: DecoratedShadow,
                     index: ShadowIndex | None = None,
                     embedding: Embedding | None = None,
                     enforce_holonomy: bool = False,
                     rings: tuple[Ring, ...] | None = None,
                     max_arcs: int = MAX_BRUTE_ARCS,
                     chunk: int = 1 << 20) -> Solution:
    """Enumerate every coorientation; arc i sits at bit (m-1-i), so the
    argmin of the masked conflict vector is the lexicographically least
    witness with outward preferred."""
    t0 = time.perf_counter()
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    m = shadow.n_arcs
    if m > max_arcs:
        raise ShadowError("E_TOO_LARGE",
                          f"{m} arcs exceed the enumeration guard "
                          f"({max_arcs})")
    if enforce_holonomy and rings is None:
        rings = cycle_blocks(shadow, index)
        if rings is None:
            raise ShadowError("E_NOT_NECKLACE",
                              "holonomy filter needs a cactus block "
                              "structure")

    dl = np.array([1 if s is Side.LEFT else 0
                   for s in embedding.domain_side], dtype=np.int8)
    in_idx = []
    out_idx = []
    for v in shadow.vertices:
        for i, o in v.transitions:
            in_idx.append(i)
            out_idx.append(o)
    in_idx = np.array(in_idx, dtype=np.int64)
    out_idx = np.array(out_idx, dtype=np.int64)
    flip = (dl[in_idx] ^ dl[out_idx]).astype(bool)

    forbidden = []
    for p in shadow.polygons:
        k = len(p.sides)
        nst = sum(1 for c in p.corners if c.nested)
        if not (k >= 3 and nst <= k - 3):
            forbidden.append(np.array(p.sides, dtype=np.int64))

    ring_cols = []
    if enforce_holonomy:
        for ring in rings:
            cols = []
            for v in ring.joints:
                cols.extend((2 * v, 2 * v + 1))
            ring_cols.append(np.array(cols, dtype=np.int64))

    shifts = np.array([m - 1 - i for i in range(m)], dtype=np.int64)
    best_val = None
    best_key = None
    total = 1 << m
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        vals = np.arange(lo, hi, dtype=np.int64)
        A = ((vals[:, None] >> shifts[None, :]) & 1).astype(bool)
        C = A[:, in_idx] ^ A[:, out_idx] ^ flip[None, :]
        conf = C.sum(axis=1).astype(np.int64)
        ok = np.ones(len(vals), dtype=bool)
        for sides in forbidden:
            ok &= ~A[:, sides].all(axis=1)
        for cols in ring_cols:
            ok &= (C[:, cols].sum(axis=1) & 1) == 0
        if not ok.any():
            continue
        conf[~ok] = BIG
        pos = int(conf.argmin())
        v = int(conf[pos])
        if v < BIG and (best_val is None or v < best_val):
            best_val = v
            best_key = lo + pos
    if best_val is None:
        raise ShadowError("E_SCHEMA", "no feasible coorientation exists")
    bits = [(best_key >> (m - 1 - i)) & 1 for i in range(m)]
    witness = _bits_to_coor(bits)
    stats = SolveStats(nodes=total, states=total,
                       wall_ms=(time.perf_counter() - t0) * 1e3)
    return Solution(value=best_val, witness=witness,
                    status="ExactEnumeration", method="bruteforce",
                    conflict_report=conflicts(shadow, witness, index,
                                              embedding),
                    stats=stats)


# -- chain DP engine ----------------------------------------------------

class _Engine:
    """Shared machinery for the tree and cactus solvers.  Side variables
    are bits, 0 outward and 1 inward; conflict terms reduce to xors with
    a per-transition flip constant."""

    def __init__(self, shadow: DecoratedShadow, index: ShadowIndex,
                 embedding: Embedding, rings: tuple[Ring, ...],
                 enforce_parity: bool):
        self.sh = shadow
        self.ix = index
        self.par_on = enforce_parity
        self.dl = [1 if s is Side.LEFT else 0 for s in embedding.domain_side]
        npoly = len(shadow.polygons)

        self.pair: list[list[tuple[int, int]]] = []
        self.allow_allin: list[bool] = []
        for p in shadow.polygons:
            k = len(p.sides)
            self.pair.append([(p.sides[i], p.sides[(i + 1) % k])
                              for i in range(k)])
            nst = sum(1 for c in p.corners if c.nested)
            self.allow_allin.append(k >= 3 and nst <= k - 3)

        self.corner_at: dict[tuple[int, int], int] = {}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(npoly)]
        for v, ((pa, ca), (pb, cb)) in enumerate(index.vertex_corners):
            self.corner_at[(pa, v)] = ca
            self.corner_at[(pb, v)] = cb
            adj[pa].append((pb, v))
            adj[pb].append((pa, v))

        root = shadow.owner[shadow.outer_arc]
        self.root = root
        depth = [-1] * npoly
        parent_edge = [-1] * npoly
        order = [root]
        depth[root] = 0
        qi = 0
        while qi < len(order):
            p = order[qi]
            qi += 1
            for q, v in adj[p]:
                if depth[q] < 0:
                    depth[q] = depth[p] + 1
                    parent_edge[q] = v
                    order.append(q)
        self.bfs_order = order
        self.parent_edge = parent_edge

        # normalize rings so beads[0] is the anchor (nearest the root)
        self.ring_joint: dict[int, int] = {}
        self.anchored: dict[int, list[Ring]] = {}
        self.bead_iface: dict[int, tuple[int, int]] = {}
        for ri, ring in enumerate(rings):
            for v in ring.joints:
                self.ring_joint[v] = ri
            a = min(range(len(ring.beads)), key=lambda i: depth[ring.beads[i]])
            beads = ring.beads[a:] + ring.beads[:a]
            joints = ring.joints[a:] + ring.joints[:a]
            norm = Ring(beads=beads, joints=joints)
            self.anchored.setdefault(beads[0], []).append(norm)
            mlen = len(beads)
            for i in range(1, mlen):
                if beads[i] in self.bead_iface:
                    raise ShadowError(
                        "E_NOT_NECKLACE",
                        f"polygon {beads[i]} is an interior bead of two "
                        f"rings")
                cl = self.corner_at[(beads[i], joints[i - 1])]
                cr = self.corner_at[(beads[i], joints[i])]
                self.bead_iface[beads[i]] = (cl, cr)

        self.tab: dict[int, list[int]] = {}
        self.tab2: dict[int, list[int]] = {}
        self.ring_rt: dict[tuple[int, int], list[list[int]]] = {}
        self.ctabs: dict[int, list] = {}
        self.ring_local: dict[int, list[tuple[int, int, Ring]]] = {}
        self._jt_by_vp: dict[tuple[int, int], list] = {}
        self._jt_by_terms: dict[tuple, list] = {}

    # transition cost tables ------------------------------------------

    def _j_table(self, v: int, first_pid: int):
        """16 (cost, parity) pairs indexed by (first pair << 2) | second,
        each pair being (x of earlier side << 1) | x of later side.
        Memoized twice over: per call site and per bit structure, since
        large instances repeat a handful of vertex shapes."""
        key = (v, first_pid)
        got = self._jt_by_vp.get(key)
        if got is not None:
            return got
        (pa, ca), (pb, cb) = self.ix.vertex_corners[v]
        if pa == first_pid:
            fp, sp = self.pair[pa][ca], self.pair[pb][cb]
        else:
            fp, sp = self.pair[pb][cb], self.pair[pa][ca]
        shift: dict[int, int] = {}
        for arc, sh in ((fp[0], 3), (fp[1], 2), (sp[0], 1), (sp[1], 0)):
            shift.setdefault(arc, sh)
        trans = self.sh.vertices[v].transitions
        (i1, o1), (i2, o2) = trans
        terms_key = (shift[i1], shift[o1], self.dl[i1] ^ self.dl[o1],
                     shift[i2], shift[o2], self.dl[i2] ^ self.dl[o2])
        out = self._jt_by_terms.get(terms_key)
        if out is None:
            s1i, s1o, f1, s2i, s2o, f2 = terms_key
            out = []
            for combo in range(16):
                c1 = ((combo >> s1i) & 1) ^ ((combo >> s1o) & 1) ^ f1
                c2 = ((combo >> s2i) & 1) ^ ((combo >> s2o) & 1) ^ f2
                out.append((c1 + c2, c1 ^ c2))
            self._jt_by_terms[terms_key] = out
        self._jt_by_vp[key] = out
        return out

    # chain DP ----------------------------------------------------------

    def _chain(self, pid: int, ctabs, pins, want_assign: bool):
        """Minimize the corner-table sum over the side bits of polygon
        pid.  ctabs[i] couples sides i and i+1 (None contributes 0);
        pins force side bits.  Admissibility: unless the all-inward
        exception holds, at least one side must stay outward."""
        p = self.sh.polygons[pid]
        k = len(p.sides)
        allow = self.allow_allin[pid]
        if not p.corners:
            x = pins.get(0)
            cands = (x,) if x is not None else (0, 1)
            for xv in cands:
                if xv == 1 and not allow:
                    continue
                return 0, ([xv] if want_assign else None)
            return BIG, None

        pins_get = pins.get

        def run(x0, trace):
            # state index (x << 1) | any_outward_so_far
            dp = [BIG, BIG, BIG, BIG]
            dp[(x0 << 1) | (1 if x0 == 0 else 0)] = 0
            bps = [] if trace else None
            for pos in range(1, k):
                t = ctabs[pos - 1]
                pin = pins_get(pos)
                xns = (0, 1) if pin is None else (pin,)
                ndp = [BIG, BIG, BIG, BIG]
                bp = [0, 0, 0, 0] if trace else None
                for s in range(4):
                    cost = dp[s]
                    if cost >= BIG:
                        continue
                    xc2 = s & 2  # (xc << 1)
                    fl = s & 1
                    for xn in xns:
                        c2 = cost + (t[xc2 | xn] if t else 0)
                        if c2 >= BIG:
                            continue
                        key = (xn << 1) | fl | (1 if xn == 0 else 0)
                        if c2 < ndp[key]:
                            ndp[key] = c2
                            if trace:
                                bp[key] = s
                dp = ndp
                if trace:
                    bps.append(bp)
            t = ctabs[k - 1]
            best = BIG
            bstate = -1
            for s in range(4):
                cost = dp[s]
                if cost >= BIG or ((s & 1) == 0 and not allow):
                    continue
                c2 = cost + (t[(s & 2) | x0] if t else 0)
                if c2 < best:
                    best = c2
                    bstate = s
            return best, bstate, bps

        pin0 = pins_get(0)
        best = BIG
        bx0 = None
        bstate = -1
        bbps = None
        for x0 in ((0, 1) if pin0 is None else (pin0,)):
            val, state, bps = run(x0, want_assign)
            if val < best:
                best = val
                bx0 = x0
                bstate = state
                bbps = bps
        if best >= BIG:
            return BIG, None
        if not want_assign:
            return best, None
        xs = [0] * k
        xs[0] = bx0
        cur = bstate
        for pos in range(k - 1, 0, -1):
            xs[pos] = cur >> 1
            cur = bbps[pos - 1][cur]
        return best, xs

    # per-polygon assembly ----------------------------------------------

    def _assemble(self, pid: int):
        """Cache bridge-child cost tables and anchored-ring hooks."""
        if pid in self.ctabs:
            return
        p = self.sh.polygons[pid]
        k = len(p.sides)
        ctabs: list = [None] * max(k, 1)
        skip: set[int] = set()
        iface = self._iface_corners(pid)
        ring_local: list[tuple[int, int, Ring]] = []
        for ring in self.anchored.get(pid, ()):  # anchor-side corners
            ci_f = self.corner_at[(pid, ring.joints[0])]
            ci_l = self.corner_at[(pid, ring.joints[-1])]
            ring_local.append((ci_f, ci_l, ring))
            skip.update((ci_f, ci_l))
        for ci, c in enumerate(p.corners):
            if ci in skip or ci in iface:
                continue
            v = c.vertex
            q = c.neighbor
            jt = self._j_table(v, pid)
            qt = self.tab[q]
            g = [BIG] * 4
            for a in range(4):
                m = BIG
                base = a << 2
                for b in range(4):
                    tq = qt[b]
                    if tq >= BIG:
                        continue
                    cand = tq + jt[base | b][0]
                    if cand < m:
                        m = cand
                g[a] = m
            ctabs[ci] = g
        self.ctabs[pid] = ctabs
        self.ring_local[pid] = ring_local

    def _iface_corners(self, pid: int) -> set[int]:
        if pid == self.root:
            return set()
        if pid in self.bead_iface:
            return set(self.bead_iface[pid])
        v = self.parent_edge[pid]
        return {self.corner_at[(pid, v)]}

    def _solve_poly(self, pid: int, iface_pins, want_assign: bool):
        """Best cost under iface pins, conditioning each anchored ring on
        its closing corner pair.  Returns (cost, xs, sigma per ring)."""
        self._assemble(pid)
        p = self.sh.polygons[pid]
        k = len(p.sides)
        ctabs0 = self.ctabs[pid]
        rlocal = self.ring_local[pid]
        best = BIG
        bxs = None
        bsig = None
        for sig in product(range(4), repeat=len(rlocal)):
            pins = dict(iface_pins)
            ctabs = list(ctabs0)
            ok = True
            for (ci_f, ci_l, ring), sg in zip(rlocal, sig):
                rt = self._ring_rt(pid, ring)
                for pos, bit in ((ci_l, (sg >> 1) & 1),
                                 ((ci_l + 1) % k, sg & 1)):
                    if pins.get(pos, bit) != bit:
                        ok = False
                        break
                    pins[pos] = bit
                if not ok:
                    break
                ctabs[ci_f] = rt[sg]
            if not ok:
                continue
            val, xs = self._chain(pid, ctabs, pins, want_assign)
            if val < best:
                best = val
                bxs = xs
                bsig = sig
        return best, bxs, bsig

    # rings --------------------------------------------------------------

    def _ring_rt(self, pid: int, ring: Ring):
        key = (pid, ring.joints[0])
        got = self.ring_rt.get(key)
        if got is None:
            got = self._ring_dp(ring, None)
            self.ring_rt[key] = got
        return got

    def _ring_dp(self, ring: Ring, trace):
        """Forward DP along the bead chain.  Without trace, returns
        rt[sigma][c0].  With trace=(sigma, c0), returns the bead interface
        combos achieving rt[sigma][c0]."""
        beads = ring.beads
        joints = ring.joints
        mlen = len(beads)
        jt0 = self._j_table(joints[0], beads[0])
        t1 = self.tab2[beads[1]]
        state: dict = {}
        bps: list[dict] = [{}]
        for c0 in range(4):
            if trace is not None and c0 != trace[1]:
                continue
            for l1 in range(4):
                cost0, par0 = jt0[(c0 << 2) | l1]
                for r1 in range(4):
                    tb = t1[(l1 << 2) | r1]
                    if tb >= BIG:
                        continue
                    key = (c0, r1, par0)
                    cand = cost0 + tb
                    if cand < state.get(key, BIG):
                        state[key] = cand
                        bps[0][key] = l1
        for i in range(2, mlen):
            jt = self._j_table(joints[i - 1], beads[i - 1])
            tb = self.tab2[beads[i]]
            nstate: dict = {}
            bp: dict = {}
            for (c0, r, par), cost in state.items():
                for li in range(4):
                    cj, pj = jt[(r << 2) | li]
                    for ri in range(4):
                        tv = tb[(li << 2) | ri]
                        if tv >= BIG:
                            continue
                        key = (c0, ri, par ^ pj)
                        cand = cost + cj + tv
                        if cand < nstate.get(key, BIG):
                            nstate[key] = cand
                            bp[key] = (r, par, li)
            state = nstate
            bps.append(bp)
        jtl = self._j_table(joints[-1], beads[-1])
        if trace is None:
            rt = [[BIG] * 4 for _ in range(4)]
            for (c0, r, par), cost in state.items():
                base = r << 2
                for sg in range(4):
                    cj, pj = jtl[base | sg]
                    if self.par_on and (par ^ pj):
                        continue
                    cand = cost + cj
                    if cand < rt[sg][c0]:
                        rt[sg][c0] = cand
            return rt
        sg, c0 = trace
        best = BIG
        bkey = None
        for (cc0, r, par), cost in state.items():
            if cc0 != c0:
                continue
            cj, pj = jtl[(r << 2) | sg]
            if self.par_on and (par ^ pj):
                continue
            if cost + cj < best:
                best = cost + cj
                bkey = (cc0, r, par)
        combos = [None] * mlen  # combos[i] = (l_i, r_i) for beads 1..m-1
        cur = bkey
        for i in range(mlen - 1, 1, -1):
            r_prev, par_prev, li = bps[i - 1][cur]
            combos[i] = (li, cur[1])
            cur = (cur[0], r_prev, par_prev)
        combos[1] = (bps[0][cur], cur[1])
        return combos

    # main passes --------------------------------------------------------

    def solve(self):
        for pid in reversed(self.bfs_order):
            if pid == self.root:
                continue
            if pid in self.bead_iface:
                cl, cr = self.bead_iface[pid]
                k = len(self.sh.polygons[pid].sides)
                t2 = [BIG] * 16
                for l in range(4):
                    for r in range(4):
                        pins = {}
                        ok = True
                        for pos, bit in ((cl, (l >> 1) & 1),
                                         ((cl + 1) % k, l & 1),
                                         (cr, (r >> 1) & 1),
                                         ((cr + 1) % k, r & 1)):
                            if pins.get(pos, bit) != bit:
                                ok = False
                                break
                            pins[pos] = bit
                        if not ok:
                            continue
                        val, _, _ = self._solve_poly(pid, pins, False)
                        t2[(l << 2) | r] = val
                self.tab2[pid] = t2
            else:
                ci = self.corner_at[(pid, self.parent_edge[pid])]
                p = self.sh.polygons[pid]
                k = len(p.sides)
                if k <= 2 and p.corners and not self.anchored.get(pid):
                    # fully pinned by the parent corner: closed form
                    self._assemble(pid)
                    allow = self.allow_allin[pid]
                    if k == 1:
                        t = [0, BIG, BIG, 0 if allow else BIG]
                    else:
                        g = self.ctabs[pid][1 - ci]
                        t = [g[((a & 1) << 1) | (a >> 1)]
                             if (allow or a != 3) else BIG
                             for a in range(4)]
                    self.tab[pid] = t
                    continue
                t = [BIG] * 4
                for a in range(4):
                    pins = {}
                    ok = True
                    for pos, bit in ((ci, (a >> 1) & 1),
                                     ((ci + 1) % k, a & 1)):
                        if pins.get(pos, bit) != bit:
                            ok = False
                            break
                        pins[pos] = bit
                    if not ok:
                        continue
                    val, _, _ = self._solve_poly(pid, pins, False)
                    t[a] = val
                self.tab[pid] = t
        val, _, _ = self._solve_poly(self.root, {}, False)
        return val

    def witness(self):
        """Descend from the root re-running pinned chains with argmin."""
        x = [None] * self.sh.n_arcs
        stack = [(self.root, {})]
        while stack:
            pid, pins = stack.pop()
            p = self.sh.polygons[pid]
            k = len(p.sides)
            if len(pins) == k and not self.anchored.get(pid):
                # every side bit already pinned by the caller
                xs = [pins[i] for i in range(k)]
                sig = ()
            else:
                val, xs, sig = self._solve_poly(pid, pins, True)
                if xs is None:
                    raise ShadowError("E_SCHEMA",
                                      "witness descent hit an infeasible table")
            for i, s in enumerate(p.sides):
                x[s] = xs[i]
            iface = self._iface_corners(pid)
            skip = set(iface)
            rlocal = self.ring_local[pid]
            for (ci_f, ci_l, ring), sg in zip(rlocal, sig or ()):
                skip.update((ci_f, ci_l))
                c0 = (xs[ci_f] << 1) | xs[(ci_f + 1) % k]
                combos = self._ring_dp(ring, (sg, c0))
                for i in range(1, len(ring.beads)):
                    b = ring.beads[i]
                    cl, cr = self.bead_iface[b]
                    li, ri = combos[i]
                    kb = len(self.sh.polygons[b].sides)
                    bpins = {cl: (li >> 1) & 1, (cl + 1) % kb: li & 1,
                             cr: (ri >> 1) & 1, (cr + 1) % kb: ri & 1}
                    stack.append((b, bpins))
            for ci, c in enumerate(p.corners):
                if ci in skip:
                    continue
                q = c.neighbor
                jt = self._j_table(c.vertex, pid)
                a = (xs[ci] << 1) | xs[(ci + 1) % k]
                qt = self.tab[q]
                bb = None
                bv = BIG
                for b in range(4):
                    if qt[b] >= BIG:
                        continue
                    cand = qt[b] + jt[(a << 2) | b][0]
                    if cand < bv:
                        bv = cand
                        bb = b
                cj = self.corner_at[(q, c.vertex)]
                kq = len(self.sh.polygons[q].sides)
                qpins = {cj: (bb >> 1) & 1, (cj + 1) % kq: bb & 1}
                stack.append((q, qpins))
        if any(b is None for b in x):
            raise ShadowError("E_SCHEMA", "witness descent left arcs unset")
        return _bits_to_coor(x)


def _run_engine(shadow, index, embedding, rings, enforce_parity):
    t0 = time.perf_counter()
    eng = _Engine(shadow, index, embedding, rings, enforce_parity)
    value = eng.solve()
    if value >= BIG:
        raise ShadowError("E_SCHEMA", "no feasible coorientation exists")
    witness = eng.witness()
    states = sum(len(t) for t in eng.tab.values())
    states += sum(len(t) for t in eng.tab2.values())
    states += sum(len(t) for t in eng.ctabs.values())
    states += sum(sum(len(row) for row in t) for t in eng.ring_rt.values())
    stats = SolveStats(nodes=len(eng.bfs_order), states=states,
                       wall_ms=(time.perf_counter() - t0) * 1e3)
    return value, witness, stats


def _with_report(shadow, index, embedding, sol: Solution) -> Solution:
    if sol.conflict_report is not None or sol.witness is None:
        return sol
    rep = conflicts(shadow, sol.witness, index, embedding)
    return Solution(value=sol.value, witness=sol.witness, status=sol.status,
                    method=sol.method, note=sol.note, conflict_report=rep,
                    stats=sol.stats)


def solve_tree_dp(shadow: DecoratedShadow,
                  index: ShadowIndex | None = None,
                  embedding: Embedding | None = None) -> Solution:
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    report = classify(shadow, index)
    if report.kind is not ShadowKind.TREE_LIKE:
        raise ShadowError("E_NOT_TREELIKE",
                          f"block structure is {report.kind.value}")
    value, witness, stats = _run_engine(shadow, index, embedding, (), False)
    return _with_report(shadow, index, embedding,
                        Solution(value=value, witness=witness,
                                 status="ExactTreeLike", method="tree-dp",
                                 stats=stats))


def solve_cactus(shadow: DecoratedShadow,
                 index: ShadowIndex | None = None,
                 embedding: Embedding | None = None) -> Solution:
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    report = classify(shadow, index)
    if report.kind is not ShadowKind.TREE_NECKLACE:
        raise ShadowError("E_NOT_NECKLACE",
                          f"block structure is {report.kind.value}")
    value, witness, stats = _run_engine(shadow, index, embedding,
                                        report.rings, True)
    return _with_report(shadow, index, embedding,
                        Solution(value=value, witness=witness,
                                 status="ExactTreeNecklace",
                                 method="cactus-dp", stats=stats))


def mu_loc(shadow: DecoratedShadow,
           index: ShadowIndex | None = None,
           embedding: Embedding | None = None) -> Solution:
    """Minimum conflicts over admissible coorientations with every
    holonomy constraint dropped; a lower bound for the exact value."""
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    report = classify(shadow, index)
    if report.kind is ShadowKind.GENERAL:
        sol = solve_bruteforce(shadow, index, embedding)
        return Solution(value=sol.value, witness=sol.witness,
                        status="LowerBoundOnly", method="bruteforce",
                        note="holonomy constraints ignored; witness may "
                             "not be realizable",
                        conflict_report=sol.conflict_report,
                        stats=sol.stats)
    value, witness, stats = _run_engine(shadow, index, embedding,
                                        report.rings, False)
    return _with_report(shadow, index, embedding,
                        Solution(value=value, witness=witness,
                                 status="LowerBoundOnly",
                                 method="cactus-dp",
                                 note="holonomy constraints ignored; "
                                      "witness may not be realizable",
                                 stats=stats))


def mu(shadow: DecoratedShadow,
       index: ShadowIndex | None = None,
       embedding: Embedding | None = None) -> Solution:
    """Exact minimum where the block structure allows it, a certified
    lower bound otherwise."""
    if index is None:
        index = validate_shadow(shadow)
    if embedding is None:
        embedding = derive_embedding(shadow, index)
    report = classify(shadow, index)
    if report.kind is ShadowKind.TREE_LIKE:
        value, witness, stats = _run_engine(shadow, index, embedding,
                                            (), False)
        return _with_report(shadow, index, embedding,
                            Solution(value=value, witness=witness,
                                     status="ExactTreeLike",
                                     method="tree-dp", stats=stats))
    if report.kind is ShadowKind.TREE_NECKLACE:
        value, witness, stats = _run_engine(shadow, index, embedding,
                                            report.rings, True)
        return _with_report(shadow, index, embedding,
                            Solution(value=value, witness=witness,
                                     status="ExactTreeNecklace",
                                     method="cactus-dp", stats=stats))
    sol = solve_bruteforce(shadow, index, embedding)
    return Solution(value=sol.value, witness=sol.witness,
                    status="LowerBoundOnly", method="bruteforce",
                    note=f"{report.note}; value is a lower bound and the "
                         f"witness is not claimed realizable",
                    conflict_report=sol.conflict_report, stats=sol.stats)
