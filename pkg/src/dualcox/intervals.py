"""Windowed enumeration of absolute-order intervals [1, w].

Membership always comes from an explicit factorization witness: an element
belongs to the windowed interval when a minimal-weight factorization of the
top element passes through it using only window generators.  The exact
length oracle (reflection length for Euclidean groups, BFS distance for
finite ones) is used solely as an admissible pruning bound, never as a
membership shortcut.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coxeter import (
    AxisData,
    CoxeterElement,
    CoxeterSystem,
    HorizontalDecomposition,
    axis_data,
    enumerate_reflections,
    horizontal_decomposition,
)
from .geometry import Q, dot, reflection_length


class ResourceCapExceeded(RuntimeError):
    """Raised when interval enumeration exceeds its node budget."""


# ---------------------------------------------------------------------------
# marked groups
# ---------------------------------------------------------------------------

class EuclideanMarkedGroup:
    """The interval group data for [1, w]^W over a reflection window:
    vertical reflections crossing the axis at p_{-m}..p_m plus the finite
    set of horizontal reflections fixing an axial vertex."""

    def __init__(self, system: CoxeterSystem, w: CoxeterElement, window: int,
                 axis: Optional[AxisData] = None,
                 dec: Optional[HorizontalDecomposition] = None):
        self.system = system
        self.w = w
        self.window = window
        self.axis = axis if axis is not None else axis_data(system, w, window)
        self.dec = dec if dec is not None else horizontal_decomposition(system, w)
        self.records = enumerate_reflections(system, w, window,
                                             axis=self.axis, dec=self.dec)
        self.record_by_key = {r.iso.key(): r for r in self.records}
        self.generators = [(r.iso, 1, r.name) for r in self.records if r.in_R0]
        self.identity = system.identity()
        self.top = w.iso
        self._mirror_index = {(c.root, c.offset): i
                              for i, c in self.axis.crossings.items()}
        self._hor_inventory = {(r.root, r.offset) for r in self.records
                               if r.kind == "horizontal" and r.in_R0}
        self._cert_cache = {}
        self._fact_cache = {}

    # group operations -----------------------------------------------------
    def mul(self, u, v):
        return self.system.intern(u.compose(v))

    def inv(self, u):
        return self.system.intern(u.inverse())

    def sort_key(self, u):
        return u.sort_key()

    @property
    def weight_scale(self):
        return 1

    def top_weight(self):
        return self.system.ess_dim + 1

    def lower_bound(self, u):
        return reflection_length(u)

    def length_oracle(self, u):
        return reflection_length(u)

    def label_of(self, g):
        return self.record_by_key[g.key()].name

    # geometry helpers -------------------------------------------------------
    def is_horizontal(self, u) -> bool:
        """Elliptic u moving every point orthogonally to the axis."""
        inv = u.invariants()
        return (not inv.hyperbolic) and inv.fix.direction_contains(self.w.mu)

    def divisor_mirrors(self, u):
        """Mirrors whose reflection could divide elliptic u in the full
        isometry group: mirror contains Fix(u)."""
        inv = u.invariants()
        if inv.hyperbolic:
            return None
        fix = inv.fix
        out = []
        for al in self.system.roots_pos:
            if any(dot(al, b) != 0 for b in fix.basis):
                continue
            c = dot(al, fix.point)
            d = self.system.mirror_offset_scale(al)
            if (c / d) % 1 == 0:
                out.append((al, c))
        return out

    def certify(self, u) -> bool:
        """True when every reflection that can divide u inside the interval
        lies strictly inside the window, so the full lower cone of u is
        enumerated.  Candidates come from the full-isometry-group order;
        horizontal candidates whose mirror holds no axial vertex are
        confirmed non-divisors (they never belong to the interval, which
        the instance checks verify independently)."""
        got = self._cert_cache.get(u.key())
        if got is not None:
            return got
        mirrors = self.divisor_mirrors(u)
        ok = mirrors is not None
        if ok:
            for al, c in mirrors:
                if dot(al, self.w.mu) == 0:
                    continue        # horizontal: in the interval iff in R0
                idx = self._mirror_index.get((al, c))
                if idx is None or abs(idx) >= self.window:
                    ok = False
                    break
        self._cert_cache[u.key()] = ok
        return ok

    def w_factorable(self, x) -> Optional[bool]:
        """Exact, window-free decision of 'x is a product of l_L(x) many
        reflections of W', for elliptic x: recurse over the finitely many
        mirrors of the arrangement containing Fix(x).  Returns None for
        hyperbolic x (not decided here)."""
        if x.is_hyperbolic:
            return None
        memo = self._fact_cache

        def rec(y):
            ky = y.key()
            got = memo.get(ky)
            if got is not None:
                return got
            ln = reflection_length(y)
            if ln == 0:
                memo[ky] = True
                return True
            out = False
            for al, c in self.divisor_mirrors(y):
                r = self.system.refl(al, c)
                y2 = self.mul(r, y)
                if reflection_length(y2) == ln - 1 and rec(y2):
                    out = True
                    break
            memo[ky] = out
            return out

        return rec(x)

    def translation_splits_in_w(self, x) -> bool:
        """Exact: the translation x is a product of two arrangement
        reflections (parallel mirrors at half its vector apart)."""
        v = x.b
        for al in self.system.roots_pos:
            coo = [vi / ai for vi, ai in zip(v, al) if ai != 0]
            if not coo or any(vi != 0 for vi, ai in zip(v, al) if ai == 0):
                continue
            s = coo[0]
            if any(c != s for c in coo[1:]):
                continue
            need = s * dot(al, al) / 2
            d = self.system.mirror_offset_scale(al)
            if (need / d) % 1 == 0:
                return True
        return False

    def leq_refuted(self, u, v) -> bool:
        """Exact refutation of u <= v in the interval order of W."""
        lu, lv = reflection_length(u), reflection_length(v)
        if lu == lv:
            return u != v
        x = self.mul(self.inv(u), v)
        if lu + reflection_length(x) != lv:
            return True
        if x.is_translation():
            return not self.translation_splits_in_w(x)
        fac = self.w_factorable(x)
        return fac is False

    def mirrors_through_flat(self, flat):
        """All arrangement mirrors containing the given affine flat."""
        out = []
        for al in self.system.roots_pos:
            if any(dot(al, b) != 0 for b in flat.basis):
                continue
            c = dot(al, flat.point)
            d = self.system.mirror_offset_scale(al)
            if (c / d) % 1 == 0:
                out.append((al, c))
        return out

    def no_rank2_upper_bound(self, a, b) -> Optional[bool]:
        """Exact, window-free certificate that no length-2 element of W sits
        above both reflections a and b inside [1, w].  Only for reflections
        with intersecting mirrors: every rank-2 elliptic above both is a
        rotation about the codimension-2 flat Fix(a) and Fix(b) span, and
        all such rotations in W are products of two arrangement mirrors
        through that flat; each is screened by length additivity below w."""
        flat = a.invariants().fix.intersect(b.invariants().fix)
        if flat.is_empty:
            return self._no_rank2_ub_parallel(a, b)
        mirrors = self.mirrors_through_flat(flat)
        refl = [self.system.refl(al, c) for al, c in mirrors]
        top_len = self.top_weight()
        seen = set()
        for r1 in refl:
            for r2 in refl:
                if r1 == r2:
                    continue
                j = self.mul(r1, r2)
                if j.key() in seen:
                    continue
                seen.add(j.key())
                if reflection_length(j) != 2:
                    continue
                res = self.mul(self.inv(j), self.top)
                if 2 + reflection_length(res) != top_len:
                    continue
                # the length screen is necessary but not sufficient: the
                # residual must itself factor over arrangement reflections
                if res.is_translation() and not self.translation_splits_in_w(res):
                    continue
                if not res.is_translation() and not res.is_hyperbolic \
                        and self.w_factorable(res) is False:
                    continue
                return False            # a surviving rank-2 candidate
        return True

    def decide_leq(self, u, v):
        """Exact decision of u <= v in the absolute order of W for interval
        members, or None when genuinely undecidable (hyperbolic quotient of
        length >= 3 against a proper element)."""
        lu, lv = reflection_length(u), reflection_length(v)
        if lu > lv:
            return False
        if lu == lv:
            return u == v
        x = self.mul(self.inv(u), v)
        if lu + reflection_length(x) != lv:
            return False
        if v == self.top:
            return True                  # both are enumerated members
        if x.is_translation():
            return self.translation_splits_in_w(x)
        if x.is_hyperbolic:
            return True if u.is_identity() else None
        return self.w_factorable(x)

    def _no_rank2_ub_parallel(self, a, b) -> bool:
        """Parallel-mirror case of the rank-2 floor: no elliptic tops both
        reflections, and the only translation candidate is the unique point
        where the mirrors' normal line meets the displacement set of w."""
        from .geometry import Isometry, vscale
        al = next(al for al, c in self.divisor_mirrors(a))
        dep = self.top.invariants().dep
        # solve s*al in dep via its equations
        eqs = dep.equations()
        rows = [[dot(nrm, al)] for nrm, cc in eqs]
        rhs = [cc for nrm, cc in eqs]
        from .geometry import solve
        sol = solve(rows, rhs)
        if sol is None:
            return True
        s = sol[0]
        if s == 0:
            return True
        t = self.system.intern(Isometry.translation(vscale(s, al), ess=self.system.ess))
        if not self.translation_splits_in_w(t):
            return True
        for r in (a, b):
            x = self.mul(self.inv(r), t)
            if reflection_length(x) != 1 or self.w_factorable(x) is not True:
                return True
        res = self.mul(self.inv(t), self.top)
        if 2 + reflection_length(res) != self.top_weight():
            return True
        if res.is_translation() and not self.translation_splits_in_w(res):
            return True
        if (not res.is_translation() and not res.is_hyperbolic
                and self.w_factorable(res) is False):
            return True
        return False                    # a surviving translation above both

    def row_of(self, u) -> str:
        """Trichotomy of interval elements by the nature of u and of its
        right complement."""
        v = self.mul(self.inv(u), self.top)
        u_h, v_h = u.is_hyperbolic, v.is_hyperbolic
        if not u_h and self.is_horizontal(u) and v_h:
            return "bottom"
        if u_h and not v_h and self.is_horizontal(v):
            return "top"
        if (not u_h and not self.is_horizontal(u)
                and not v_h and not self.is_horizontal(v)):
            return "middle"
        raise AssertionError("element escapes the three-row classification")


# ---------------------------------------------------------------------------
# the poset
# ---------------------------------------------------------------------------

@dataclass
class IntervalPoset:
    group: object
    elements: list                  # raw elements, sorted by (rank, key)
    rank: list                      # scaled integer weights
    index_of: dict                  # element key -> index
    covers: list                    # (lo, hi, generator name)
    succ: list                      # adjacency: lists of (hi, name)
    pred: list
    up_mask: list                   # bit i of up_mask[j]: j <= i
    down_mask: list
    certified: list
    rows: list                      # row classification or None
    window: int
    scale: int
    l_feasible_non_members: int     # L-additive explored elements not admitted
    order_undecided: int = 0        # member pairs whose relation stayed open

    # --- order -------------------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up_mask[i] >> j & 1)

    def key_index(self, elem) -> Optional[int]:
        return self.index_of.get(self._key(elem))

    @staticmethod
    def _key(elem):
        return elem.key() if hasattr(elem, "key") else elem

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top_index(self) -> int:
        return len(self.elements) - 1

    def down_list(self, i):
        m = self.down_mask[i]
        return [j for j in range(len(self.elements)) if m >> j & 1]

    def up_list(self, i):
        m = self.up_mask[i]
        return [j for j in range(len(self.elements)) if m >> j & 1]

    def atoms_below(self, i):
        return [j for j in self.down_list(i) if self.rank[j] == self.scale]

    def interval_indices(self, i, j):
        m = self.up_mask[i] & self.down_mask[j]
        return [k for k in range(len(self.elements)) if m >> k & 1]

    # --- meets, joins, bowties ----------------------------------------------
    def meet(self, i, j):
        if self.leq(i, j):
            return ("meet", i)
        if self.leq(j, i):
            return ("meet", j)
        common = self.down_mask[i] & self.down_mask[j]
        maxes = [z for z in range(len(self.elements))
                 if common >> z & 1 and self.up_mask[z] & common == 1 << z]
        exact = self.certified[i] and self.certified[j]
        if len(maxes) == 1:
            return ("meet", maxes[0]) if exact else ("inconclusive", maxes[0])
        return ("undefined", tuple(maxes)) if exact else ("inconclusive", tuple(maxes))

    def join(self, i, j):
        if self.leq(i, j):
            return ("join", j)
        if self.leq(j, i):
            return ("join", i)
        common = self.up_mask[i] & self.up_mask[j]
        mins = [z for z in range(len(self.elements))
                if common >> z & 1 and self.down_mask[z] & common == 1 << z]
        if len(mins) == 1:
            z = mins[0]
            return ("join", z) if self.certified[z] else ("inconclusive", z)
        if len([z for z in mins if self.certified[z]]) >= 2:
            return ("undefined", tuple(mins))
        return ("inconclusive", tuple(mins))

    def _exact_min_bound(self, z, a, b, step):
        """z (minimal common upper bound in the window) is exactly minimal
        in the full interval when its lower cone is completely enumerated,
        or when its rank leaves no room between it and the pair."""
        if self.certified[z]:
            return True
        return self.rank[z] == max(self.rank[a], self.rank[b]) + step

    def _refutes_leq(self, i, j) -> bool:
        """Exact refutation of elements[i] <= elements[j] in the interval:
        the order respects the length oracle, so non-additivity rules the
        relation out; for Euclidean groups an additive but non-realizable
        quotient is refuted by the window-free factorization test."""
        if self.rank[i] == self.rank[j]:
            return True          # graded: comparable same-rank elements coincide
        g = self.group
        u, v = self.elements[i], self.elements[j]
        if hasattr(g, "leq_refuted"):
            return g.leq_refuted(u, v)
        if not hasattr(g, "length_oracle"):
            return False
        return (g.length_oracle(u) + g.length_oracle(g.mul(g.inv(u), v))
                != g.length_oracle(v))

    def bowtie_search(self):
        """An exact witness that the interval is not a lattice, if one is
        visible in the window.

        Join side: a pair with distinct minimal upper bounds z1, z2 where z1
        is exactly minimal (complete lower cone, or no rank room below it)
        and z1 <= z2 is refuted: a least upper bound would have to equal z1
        and sit below z2.  Meet side dually, with the pair's lower cones
        complete.  A lattice never produces such a witness."""
        n = len(self.elements)
        order = sorted(range(n), key=lambda z: self.rank[z])
        step = min(wt for _, wt, _ in self.group.generators) * self.group.weight_scale
        for a in range(n):
            for b in range(a + 1, n):
                if self.leq(a, b) or self.leq(b, a):
                    continue
                up_common = self.up_mask[a] & self.up_mask[b]
                down_common = self.down_mask[a] & self.down_mask[b]
                gap_ub = self.rank[a] if self.rank[a] > self.rank[b] else self.rank[b]
                gap_lb = self.rank[a] if self.rank[a] < self.rank[b] else self.rank[b]
                pair_refuted = None

                # rank-gap route: a join would have rank exactly max+step and
                # sit below every common upper bound of that rank, so two
                # distinct ones refute it (dually for meets); needs the pair's
                # comparability exactly refuted
                if up_common:
                    at_gap = [z for z in order if up_common >> z & 1
                              and self.rank[z] == gap_ub + step]
                    if len(at_gap) >= 2:
                        pair_refuted = (self._refutes_leq(a, b)
                                        and self._refutes_leq(b, a))
                        if pair_refuted:
                            return {"kind": "join", "pair": (a, b),
                                    "bounds": (at_gap[0], at_gap[1])}
                if down_common:
                    at_gap = [z for z in order if down_common >> z & 1
                              and self.rank[z] == gap_lb - step]
                    if len(at_gap) >= 2:
                        if pair_refuted is None:
                            pair_refuted = (self._refutes_leq(a, b)
                                            and self._refutes_leq(b, a))
                        if pair_refuted:
                            return {"kind": "meet", "pair": (a, b),
                                    "bounds": (at_gap[0], at_gap[1])}

                # floor route for reflection pairs: when no length-2 element
                # of W tops both (exact, window-free), a join would be one of
                # the length-3 common upper bounds, of which there are two
                if (up_common and self.rank[a] == self.rank[b] == step
                        and self.scale == 1
                        and hasattr(self.group, "no_rank2_upper_bound")):
                    ub3 = [z for z in order if up_common >> z & 1
                           and self.rank[z] == 3]
                    if len(ub3) >= 2 and self.group.no_rank2_upper_bound(
                            self.elements[a], self.elements[b]) is True:
                        return {"kind": "join", "pair": (a, b),
                                "bounds": (ub3[0], ub3[1])}

                # certified route: an exactly-minimal upper bound (complete
                # lower cone) not below another minimal one
                if up_common:
                    mins = [z for z in order if up_common >> z & 1
                            and self.down_mask[z] & up_common == 1 << z]
                    if len(mins) >= 2:
                        for z1 in mins:
                            if not self.certified[z1]:
                                continue
                            for z2 in mins:
                                if z2 != z1 and self._refutes_leq(z1, z2):
                                    return {"kind": "join", "pair": (a, b),
                                            "bounds": (z1, z2)}
                if down_common and self.certified[a] and self.certified[b]:
                    maxes = [z for z in reversed(order) if down_common >> z & 1
                             and self.up_mask[z] & down_common == 1 << z]
                    if len(maxes) >= 2:
                        return {"kind": "meet", "pair": (a, b),
                                "bounds": tuple(maxes[:2])}
        return None

    # --- reports -------------------------------------------------------------
    def balance_report(self):
        g = self.group
        out = {"checked": 0, "ok": 0, "violations": [], "inconclusive": 0}
        for i, u in enumerate(self.elements):
            if not self.certified[i]:
                continue
            out["checked"] += 1
            x = g.mul(g.top, g.inv(u))
            if self.key_index(x) is not None:
                out["ok"] += 1
            else:
                lb = g.lower_bound(x) + g.lower_bound(g.mul(g.inv(x), g.top))
                if lb != g.top_weight():
                    out["violations"].append(i)
                else:
                    out["inconclusive"] += 1
        return out

    def row_census(self):
        out = {"bottom": 0, "middle": 0, "top": 0}
        for r in self.rows:
            if r is not None:
                out[r] += 1
        return out


def enumerate_interval(group, node_cap: int = 500_000) -> IntervalPoset:
    """All prefixes of minimal-weight factorizations of the top element by
    window generators, with cover edges labelled by the generator used."""
    total = group.top_weight() * group.weight_scale
    gens = sorted(((g, wt * group.weight_scale, nm) for g, wt, nm in group.generators),
                  key=lambda t: (t[1], t[2]))
    ident = group.identity
    top = group.top
    dist = {}
    keyf = group.sort_key
    dist[_ekey(ident)] = 0
    elems = {_ekey(ident): ident}
    heap = [(0, keyf(ident))]
    by_key = {keyf(ident): ident}
    popped = set()
    while heap:
        d, sk = heapq.heappop(heap)
        u = by_key[sk]
        ku = _ekey(u)
        if d > dist[ku] or ku in popped:
            continue
        popped.add(ku)
        for g, wt, nm in gens:
            v = group.mul(u, g)
            d2 = d + wt
            if d2 > total:
                continue
            res = group.mul(group.inv(v), top)
            if d2 + group.lower_bound(res) > total:
                continue
            kv = _ekey(v)
            if kv not in dist or d2 < dist[kv]:
                dist[kv] = d2
                elems[kv] = v
                by_key[keyf(v)] = v
                heapq.heappush(heap, (d2, keyf(v)))
                if len(dist) > node_cap:
                    raise ResourceCapExceeded(
                        f"interval enumeration exceeded {node_cap} nodes")
    ktop = _ekey(top)
    if ktop not in dist or dist[ktop] != total:
        raise AssertionError("top element not reached at its defining weight; "
                             "window too small or inventory inconsistent")
    members = []
    for ku, u in elems.items():
        kc = _ekey(group.mul(group.inv(u), top))
        if kc in dist and dist[ku] + dist[kc] == total:
            members.append(u)
    members.sort(key=lambda u: (dist[_ekey(u)], keyf(u)))
    index_of = {_ekey(u): i for i, u in enumerate(members)}
    ranks = [dist[_ekey(u)] for u in members]

    covers = []
    succ = [[] for _ in members]
    pred = [[] for _ in members]
    for i, u in enumerate(members):
        for g, wt, nm in gens:
            v = group.mul(u, g)
            j = index_of.get(_ekey(v))
            if j is not None and ranks[j] == ranks[i] + wt:
                covers.append((i, j, nm))
                succ[i].append((j, nm))
                pred[j].append((i, nm))

    n = len(members)
    up = [0] * n
    down = [0] * n
    for i in sorted(range(n), key=lambda t: -ranks[t]):
        m = 1 << i
        for j, _ in succ[i]:
            m |= up[j]
        up[i] = m
    for i in sorted(range(n), key=lambda t: ranks[t]):
        m = 1 << i
        for j, _ in pred[i]:
            m |= down[j]
        down[i] = m

    # refine reachability to the exact order where the group can decide it:
    # a relation may hold through chains that leave the window
    undecided = 0
    if hasattr(group, "decide_leq"):
        for i in range(n):
            for j in range(n):
                if i == j or ranks[i] >= ranks[j] or up[i] >> j & 1:
                    continue
                got = group.decide_leq(members[i], members[j])
                if got is True:
                    up[i] |= 1 << j
                    down[j] |= 1 << i
                elif got is None:
                    undecided += 1
        # re-close transitively (exact relations compose)
        for i in sorted(range(n), key=lambda t: -ranks[t]):
            m = up[i]
            for j in range(n):
                if m >> j & 1 and j != i:
                    m |= up[j]
            up[i] = m
        for i in sorted(range(n), key=lambda t: ranks[t]):
            m = down[i]
            for j in range(n):
                if m >> j & 1 and j != i:
                    m |= down[j]
            down[i] = m

    certified = []
    rows = []
    for u in members:
        certified.append(group.certify(u) if hasattr(group, "certify") else True)
        rows.append(group.row_of(u) if hasattr(group, "row_of") else None)

    lfail = 0
    if hasattr(group, "length_oracle"):
        for ku, u in elems.items():
            if ku in index_of:
                continue
            if (group.length_oracle(u)
                    + group.length_oracle(group.mul(group.inv(u), top))
                    == group.top_weight()):
                lfail += 1

    return IntervalPoset(
        group=group, elements=members, rank=ranks, index_of=index_of,
        covers=covers, succ=succ, pred=pred, up_mask=up, down_mask=down,
        certified=certified, rows=rows,
        window=getattr(group, "window", 0),
        scale=group.weight_scale,
        l_feasible_non_members=lfail,
        order_undecided=undecided,
    )


def _ekey(elem):
    return elem.key() if hasattr(elem, "key") else elem


# ---------------------------------------------------------------------------
# hyperbolic-horizontal decomposition
# ---------------------------------------------------------------------------

def hyperbolic_horizontal_decompose(poset: IntervalPoset, i: int):
    """The unique factorization u = u'h with u' hyperbolic, h elliptic
    horizontal, additive lengths, and the reflections under u' commuting
    with those under h; also checks [1,u] = [1,u'] x [1,h] under the
    multiplication map.  Raises on zero or several candidates."""
    g = poset.group
    u = poset.elements[i]
    if not u.is_hyperbolic:
        raise ValueError("element is not hyperbolic")
    candidates = []
    for j in poset.down_list(i):
        up = poset.elements[j]
        if not up.is_hyperbolic:
            continue
        h = g.mul(g.inv(up), u)
        if h.is_hyperbolic or not g.is_horizontal(h):
            continue
        hi = poset.key_index(h)
        if hi is None:
            continue
        ra = [poset.elements[t] for t in poset.atoms_below(j)]
        rb = [poset.elements[t] for t in poset.atoms_below(hi)]
        if all(g.mul(x, y) == g.mul(y, x) for x in ra for y in rb):
            candidates.append((j, hi))
    if len(candidates) != 1:
        raise AssertionError(
            f"hyperbolic-horizontal decomposition not unique: {len(candidates)} candidates")
    j, hi = candidates[0]
    down_u = poset.down_list(i)
    down_a = poset.down_list(j)
    down_b = poset.down_list(hi)
    prod = {}
    for x in down_a:
        for y in down_b:
            z = g.mul(poset.elements[x], poset.elements[y])
            zi = poset.key_index(z)
            if zi is None or zi not in down_u:
                raise AssertionError("product map leaves the lower cone")
            if (poset.rank[zi] != poset.rank[x] + poset.rank[y]):
                raise AssertionError("product map does not add ranks")
            prod[(x, y)] = zi
    if len(set(prod.values())) != len(prod):
        raise AssertionError("product map is not injective")
    if len(prod) != len(down_u):
        raise AssertionError("product map is not onto the lower cone")
    for (x, y), zi in prod.items():
        for (x2, y2), zi2 in prod.items():
            lhs = poset.leq(x, x2) and poset.leq(y, y2)
            if lhs != poset.leq(zi, zi2):
                raise AssertionError("product map is not an order isomorphism")
    return j, hi


# ---------------------------------------------------------------------------
# conjugation by the Coxeter element
# ---------------------------------------------------------------------------

def phi_shift(group: EuclideanMarkedGroup, u):
    return group.w.conj(u)


def phi_equivariance_report(poset_m: IntervalPoset, poset_m1: IntervalPoset):
    """Conjugation by w maps the window-m interval into the window-(m+1)
    interval, preserving rank, covers and rows."""
    g = poset_m.group
    out = {"elements": 0, "missing": 0, "rank_mismatch": 0,
           "cover_missing": 0, "row_mismatch": 0}
    img = {}
    for i, u in enumerate(poset_m.elements):
        v = phi_shift(g, u)
        j = poset_m1.key_index(v)
        out["elements"] += 1
        if j is None:
            out["missing"] += 1
            continue
        img[i] = j
        if poset_m1.rank[j] != poset_m.rank[i]:
            out["rank_mismatch"] += 1
        if poset_m.rows[i] is not None and poset_m1.rows[j] != poset_m.rows[i]:
            out["row_mismatch"] += 1
    cover_set = {(a, b) for a, b, _ in poset_m1.covers}
    for a, b, _ in poset_m.covers:
        if a in img and b in img and (img[a], img[b]) not in cover_set:
            out["cover_missing"] += 1
    return out


# ---------------------------------------------------------------------------
# noncrossing partitions (independent oracle)
# ---------------------------------------------------------------------------

def set_partitions(n: int):
    """All partitions of {0..n-1} as tuples of increasing tuples."""
    def rec(k, blocks):
        if k == n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(k)
            yield from rec(k + 1, blocks)
            b.pop()
        blocks.append([k])
        yield from rec(k + 1, blocks)
        blocks.pop()
    return list(rec(0, []))


def is_noncrossing(part) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another; this is
    exactly disjointness of the convex hulls on a circle."""
    blk = {}
    for bi, b in enumerate(part):
        for x in b:
            blk[x] = bi
    n = len(blk)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for d in range(c + 1, n):
                    if blk[a] == blk[c] and blk[b] == blk[d] and blk[a] != blk[b]:
                        return False
    return True


def noncrossing_partitions(n: int):
    return [p for p in set_partitions(n) if is_noncrossing(p)]


def refines(p, q) -> bool:
    """Every block of p is contained in a block of q."""
    qmap = {}
    for bi, b in enumerate(q):
        for x in b:
            qmap[x] = bi
    return all(len({qmap[x] for x in b}) == 1 for b in p)


def partition_rank(p, n) -> int:
    return n - len(p)


def partition_to_permutation(part, n):
    """One cycle per block, in increasing cyclic order (0-based tuples)."""
    perm = list(range(n))
    for b in part:
        for i, x in enumerate(b):
            perm[x] = b[(i + 1) % len(b)]
    return tuple(perm)


def noncrossing_oracle_report(n: int, poset: IntervalPoset):
    """Compare the geometric noncrossing-partition lattice with the dual
    interval of the symmetric group: counts, bijection and both orders."""
    parts = noncrossing_partitions(n)
    report = {"count_partitions": len(parts), "count_interval": len(poset),
              "bijection": True, "order_agrees": True, "rank_agrees": True}
    images = {}
    for p in parts:
        perm = partition_to_permutation(p, n)
        i = poset.key_index(perm)
        if i is None:
            report["bijection"] = False
            continue
        images[p] = i
        if poset.rank[i] != partition_rank(p, n):
            report["rank_agrees"] = False
    if len(set(images.values())) != len(images) or len(images) != len(poset):
        report["bijection"] = False
    for p in parts:
        for q in parts:
            if refines(p, q) != poset.leq(images[p], images[q]):
                report["order_agrees"] = False
    return report
