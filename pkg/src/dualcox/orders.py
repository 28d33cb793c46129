"""Reflection orders, axial orders, and lexicographic shellability checks.

A reflection order on a finite positive system puts every root that is a
positive combination of two others between them; the axial order on the
reflections of an affine interval [1, w] runs up the positive axis
crossings, through the horizontal block, then up the negative crossings.
The shellability check verifies, interval by interval, that exactly one
maximal chain is strictly increasing and that it is lexicographically
first and colexicographically last.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .coxeter import (
    CoxeterElement,
    CoxeterSystem,
    HorizontalDecomposition,
    ReflectionRecord,
)
from .geometry import Q, dot, primitive, qvec, row_space, solve, vscale, vsub
from .intervals import EuclideanMarkedGroup, IntervalPoset


@dataclass
class ReflectionOrder:
    """A total order on a finite carrier of reflections."""

    items: list                 # elements (isometries or opaque labels), in order
    provenance: str
    names: Optional[list] = None

    def __post_init__(self):
        self.position = {}
        for i, r in enumerate(self.items):
            self.position[_key(r)] = i

    def __len__(self):
        return len(self.items)

    def pos(self, r) -> int:
        return self.position[_key(r)]

    def less(self, r1, r2) -> bool:
        return self.pos(r1) < self.pos(r2)


def _key(r):
    return r.key() if hasattr(r, "key") else r


# ---------------------------------------------------------------------------
# orders from generic lines (finite groups)
# ---------------------------------------------------------------------------

def order_from_line(roots_pos, base, directions):
    """Total order on a finite positive system from a directed generic line
    through `base` (a point of the open base chamber): roots are rescaled so
    that they pair to 1 with the base point, and compared by the tuple of
    pairings against the perturbation directions, lexicographically.

    Returns the ordered list of roots.  Raises if two roots are
    indistinguishable under all supplied directions."""
    keyed = []
    for al in roots_pos:
        s = dot(base, al)
        if s <= 0:
            raise ValueError("base point is not in the open base chamber")
        scaled = vscale(Q(1) / s, al)
        keyed.append((tuple(dot(mu, scaled) for mu in directions), al))
    keyed.sort(key=lambda t: t[0])
    for (k1, a1), (k2, a2) in zip(keyed, keyed[1:]):
        if k1 == k2:
            raise ValueError(
                f"roots {a1} and {a2} are not separated; supply a longer "
                "direction sequence")
    return [al for _, al in keyed]


def is_reflection_order(order_roots, roots_pos) -> bool:
    """Betweenness: whenever a positive root is a positive combination of
    two others, it sits between them."""
    pos = {r: i for i, r in enumerate(order_roots)}
    roots = list(roots_pos)
    n = len(roots)
    for i in range(n):
        for j in range(i + 1, n):
            a1, a2 = roots[i], roots[j]
            basis = row_space([a1, a2])
            if len(basis) < 2:
                continue
            for al in roots:
                if al == a1 or al == a2:
                    continue
                cols = list(zip(a1, a2))
                sol = solve(cols, al)
                if sol is None or sol[0] <= 0 or sol[1] <= 0:
                    continue
                lo, hi = sorted((pos[a1], pos[a2]))
                if not lo < pos[al] < hi:
                    return False
    return True


def rank2_subsystems(roots_pos):
    """Irreducible rank-2 subsystems of a finite positive system, as
    (simple pair, members).  The simple pair consists of the two members
    that are not positive combinations of two other members."""
    from itertools import combinations
    planes = {}
    for a1, a2 in combinations(roots_pos, 2):
        basis = row_space([a1, a2])
        if len(basis) == 2:
            planes[basis] = None
    out = []
    for basis in planes:
        members = [al for al in roots_pos if _in_plane(basis, al)]
        if len(members) < 3:
            continue                      # two orthogonal roots: reducible
        simples = []
        for al in members:
            dec = False
            for b1 in members:
                for b2 in members:
                    if b1 == al or b2 == al or b1 == b2:
                        continue
                    cols = list(zip(b1, b2))
                    sol = solve(cols, al)
                    if sol is not None and sol[0] > 0 and sol[1] > 0:
                        dec = True
            if not dec:
                simples.append(al)
        if len(simples) == 2:
            out.append((tuple(simples), tuple(members)))
    return out


def _in_plane(basis, al):
    from .geometry import in_span
    return in_span(basis, al)


def is_compatible(order_roots, roots_pos, leq_product) -> dict:
    """Compatibility with a Coxeter element: whenever alpha, beta are the
    simple roots of an irreducible rank-2 subsystem and r_alpha r_beta
    divides the element, alpha comes first.  `leq_product(a, b)` says
    whether r_a r_b divides.  Ambiguous subsystems (both products divide)
    are reported, not judged."""
    pos = {r: i for i, r in enumerate(order_roots)}
    report = {"ok": True, "ambiguous": 0, "violations": 0}
    for (a, b), _ in rank2_subsystems(roots_pos):
        ab, ba = leq_product(a, b), leq_product(b, a)
        if ab and ba:
            report["ambiguous"] += 1
            continue
        if ab and not pos[a] < pos[b]:
            report["ok"] = False
            report["violations"] += 1
        if ba and not pos[b] < pos[a]:
            report["ok"] = False
            report["violations"] += 1
    return report


# ---------------------------------------------------------------------------
# horizontal component orders
# ---------------------------------------------------------------------------

def _component_chain(comp):
    """Order the component's simple roots along the Dynkin path of its
    type-A system, returning the point labels of every root."""
    roots = list(comp.roots_pos)
    simples = []
    for al in roots:
        dec = False
        for b1 in roots:
            for b2 in roots:
                if b1 == al or b2 == al:
                    continue
                cols = list(zip(b1, b2))
                sol = solve(cols, al)
                if sol is not None and sol[0] > 0 and sol[1] > 0:
                    dec = True
        if not dec:
            simples.append(al)
    m = len(simples)
    assert m == comp.rank
    if m == 1:
        chain = simples
    else:
        adj = {i: [j for j in range(m) if j != i and dot(simples[i], simples[j]) != 0]
               for i in range(m)}
        ends = sorted(i for i in range(m) if len(adj[i]) == 1)
        chain_idx = [ends[0]]
        while len(chain_idx) < m:
            nxt = [j for j in adj[chain_idx[-1]] if j not in chain_idx]
            chain_idx.append(nxt[0])
        chain = [simples[i] for i in chain_idx]
    # express each positive root as a consecutive sum beta_p + ... + beta_{q-1}
    labels = {}
    for al in roots:
        cols = list(zip(*chain))
        sol = solve(cols, al)
        assert sol is not None
        coeffs = [int(c) for c in sol]
        if any(c not in (0, 1) for c in coeffs) or 1 not in coeffs:
            coeffs = [-c for c in coeffs]
            sign = -1
        else:
            sign = 1
        ones = [i for i, c in enumerate(coeffs) if c == 1]
        assert ones == list(range(ones[0], ones[-1] + 1))
        labels[al] = (ones[0] + 1, ones[-1] + 2, sign)
    return chain, labels


def component_reflection_order(group: EuclideanMarkedGroup, comp, h_iso):
    """Reflection order on the component's positive roots compatible with
    the component factor h: the simplex-model staircase line order, with
    strand labels renumbered along the cycle of h (so the factor becomes
    the standard long cycle and the order is lexicographic in the strand
    pairs)."""
    from .geometry import reflection_length
    _, labels = _component_chain(comp)
    m = comp.rank
    npts = m + 1
    trans = {al: (p, q) for al, (p, q, _) in labels.items()}

    # decompose h over the mirrors through its fixed space that carry
    # component roots
    hh = h_iso
    word = []
    guard = 0
    while not hh.is_identity():
        guard += 1
        if guard > m + 2:
            raise AssertionError("component factor failed to decompose")
        ln = reflection_length(hh)
        for al in comp.roots_pos:
            c = _mirror_offset_for(group, al, hh)
            if c is None:
                continue
            nxt = group.mul(group.system.refl(al, c), hh)
            if reflection_length(nxt) == ln - 1:
                word.append(al)
                hh = nxt
                break
        else:
            raise AssertionError("component factor does not decompose over "
                                 "its component reflections")

    # h on strands: compose the transpositions right to left
    image = list(range(npts + 1))
    for al in reversed(word):
        p, q = trans[al]
        image = [q if x == p else p if x == q else x for x in image]
    cyc = []
    x = 1
    for _ in range(npts):
        cyc.append(x)
        x = image[x]
    if sorted(cyc) != list(range(1, npts + 1)):
        raise AssertionError("component factor is not a long cycle")
    relabel = {c: i + 1 for i, c in enumerate(cyc)}
    return sorted(comp.roots_pos,
                  key=lambda al: tuple(sorted((relabel[trans[al][0]],
                                               relabel[trans[al][1]]))))


def _mirror_offset_for(group, al, hh):
    """Offset making the mirror of root `al` pass through Fix(hh)."""
    inv = hh.invariants()
    if inv.hyperbolic or inv.fix.is_empty:
        return None
    c = dot(al, inv.fix.point)
    if any(dot(al, b) != 0 for b in inv.fix.basis):
        return None
    d = group.system.mirror_offset_scale(al)
    if (c / d) % 1 != 0:
        return None
    return c


def horizontal_factorization(group: EuclideanMarkedGroup, poset: IntervalPoset):
    """First factorization w = t * h_1 ... h_k with t a translation in the
    interval and each h_i the component part of the horizontal complement.
    The search widens its window internally if the given one holds no such
    translation (the resulting order does not depend on the window)."""
    from .intervals import enumerate_interval
    g0 = group
    for attempt in range(4):
        g = g0 if attempt == 0 else EuclideanMarkedGroup(
            g0.system, g0.w, g0.window + attempt * max(g0.axis.period, 1),
            dec=g0.dec)
        ps = poset if attempt == 0 else enumerate_interval(g)
        trans = [u for u in ps.elements
                 if u.is_translation() and not u.is_identity()]
        trans.sort(key=g.sort_key)
        for t in trans:
            rest = g.mul(g.inv(t), g.top)
            if rest.is_hyperbolic or not g.is_horizontal(rest):
                continue
            parts = []
            for comp in g.dec.components:
                h_i = _component_part(g, rest, comp)
                if h_i is None:
                    break
                parts.append(h_i)
            else:
                acc = g.identity
                for h in parts:
                    acc = g.mul(acc, h)
                if acc == rest:
                    return t, parts
    raise AssertionError("no horizontal factorization of w found")


def _component_part(g, rest, comp):
    """The isometry acting like `rest` on the component's span and trivially
    on its orthogonal complement."""
    from .geometry import AffineSubspace, Isometry, nullspace, zero_vec
    n = g.system.ambient
    basis = list(comp.basis)
    perp = list(nullspace(basis, n))
    full = basis + perp
    images = [rest.apply_vector(v) for v in basis] + perp
    mat = _matrix_sending(full, images, n)
    if mat is None:
        return None
    span = AffineSubspace.make(zero_vec(n), basis, n)
    iso = Isometry(mat, span.project_point(rest.b), ess=g.system.ess)
    return g.system.intern(iso)


def _matrix_sending(basis_vs, image_vs, n):
    """The matrix M with M v_i = w_i for the given spanning vectors."""
    rows = []
    for coord in range(n):
        rhs = [img[coord] for img in image_vs]
        row = solve([list(v) for v in basis_vs], rhs)
        if row is None:
            return None
        rows.append(tuple(row))
    return tuple(rows)


def horizontal_order(group: EuclideanMarkedGroup, poset: IntervalPoset):
    """Order on the horizontal reflections of the interval: per component,
    the compatible staircase order on root classes; parallel translates
    inherit their class position (ties by offset); components concatenate
    in index order."""
    t, parts = horizontal_factorization(group, poset)
    ordered = []
    for comp, h_i in zip(group.dec.components, parts):
        root_order = component_reflection_order(group, comp, h_i)
        assert is_reflection_order(root_order, comp.roots_pos)
        rep = {r: i for i, r in enumerate(root_order)}
        members = [r for r in group.records
                   if r.kind == "horizontal" and r.in_R0
                   and r.component == comp.index]
        members.sort(key=lambda r: (rep[r.root], r.offset))
        ordered.extend(members)

        def leq_prod(a, b, comp=comp, h=h_i):
            ra = group.system.refl(a, _mirror_offset_for(group, a, h))
            rb = group.system.refl(b, _mirror_offset_for(group, b, h))
            from .geometry import reflection_length
            pr = group.mul(ra, rb)
            return (reflection_length(pr) + reflection_length(
                group.mul(group.inv(pr), h)) == reflection_length(h))
        rep_check = is_compatible(root_order, comp.roots_pos, leq_prod)
        if not rep_check["ok"]:
            raise AssertionError("component order incompatible with its factor")
    return ordered, (t, parts)


def axial_order(group: EuclideanMarkedGroup, poset: IntervalPoset) -> ReflectionOrder:
    """Positive verticals up the axis, the horizontal block, then negative
    verticals up the axis."""
    hor, _ = horizontal_order(group, poset)
    pos = [r for r in group.records if r.kind == "vertical" and r.index >= 1]
    neg = [r for r in group.records if r.kind == "vertical" and r.index <= 0]
    pos.sort(key=lambda r: r.index)
    neg.sort(key=lambda r: r.index)
    items = [r.iso for r in pos] + [r.iso for r in hor] + [r.iso for r in neg]
    names = [r.name for r in pos] + [r.name for r in hor] + [r.name for r in neg]
    return ReflectionOrder(items, "axial", names=names)


# ---------------------------------------------------------------------------
# shellability
# ---------------------------------------------------------------------------

def _interval_edges(poset, i, j):
    """Cover edges of [i, j] with label order positions."""
    mask = poset.up_mask[i] & poset.down_mask[j]
    out = {}
    for a, b, nm in poset.covers:
        if mask >> a & 1 and mask >> b & 1:
            out.setdefault(a, []).append((b, nm))
    return out


def cover_label_positions(poset: IntervalPoset, order: ReflectionOrder):
    out = {}
    for a, b, nm in poset.covers:
        key = poset.group.mul(poset.group.inv(poset.elements[a]),
                              poset.elements[b])
        out[(a, b)] = order.pos(key)
    return out


def interval_chain_stats(poset: IntervalPoset, order: ReflectionOrder, i, j,
                         label_pos=None):
    """Maximal chains of [i, j]: total count, strictly increasing count,
    the lexicographically minimal chain and the colexicographically maximal
    chain (as label-position words)."""
    if label_pos is None:
        label_pos = cover_label_positions(poset, order)
    edges = _interval_edges(poset, i, j)

    total = {}
    def count(x):
        if x == j:
            return 1
        if x in total:
            return total[x]
        total[x] = sum(count(y) for y, _ in edges.get(x, []))
        return total[x]

    incr = {}
    def count_incr(x, last):
        if x == j:
            return 1
        key = (x, last)
        if key in incr:
            return incr[key]
        s = 0
        for y, _ in edges.get(x, []):
            p = label_pos[(x, y)]
            if p > last:
                s += count_incr(y, p)
        incr[key] = s
        return s

    def lex_min(x):
        word = []
        while x != j:
            steps = [(label_pos[(x, y)], y) for y, _ in edges.get(x, [])
                     if count(y) > 0]
            steps.sort()
            word.append(steps[0][0])
            x = steps[0][1]
        return tuple(word)

    rev = {}
    for a, outs in edges.items():
        for b, _ in outs:
            rev.setdefault(b, []).append(a)

    def colex_max(x):
        word = []
        while x != i:
            steps = [(label_pos[(a, x)], a) for a in rev.get(x, [])]
            steps.sort(reverse=True)
            word.append(steps[0][0])
            x = steps[0][1]
        return tuple(reversed(word))

    nchains = count(i)
    if nchains == 0:
        return None
    lm = lex_min(i)
    cm = colex_max(j)
    return {
        "chains": nchains,
        "increasing": count_incr(i, -1),
        "lex_min": lm,
        "colex_max": cm,
        "lex_min_increasing": all(a < b for a, b in zip(lm, lm[1:])),
        "agree": lm == cm,
    }


def shellability_check(poset: IntervalPoset, order: ReflectionOrder) -> dict:
    """Every enumerated closed interval with a fully enumerated lower cone
    has exactly one strictly increasing maximal chain, which is the
    lexicographically first and colexicographically last one."""
    n = len(poset.elements)
    report = {"intervals": 0, "skipped": 0, "violations": []}
    label_pos = cover_label_positions(poset, order)
    for j in range(n):
        if not poset.certified[j]:
            report["skipped"] += 1
            continue
        for i in range(n):
            if i == j or not poset.leq(i, j):
                continue
            st = interval_chain_stats(poset, order, i, j, label_pos)
            if st is None:
                report["violations"].append((i, j, "no chain"))
                continue
            report["intervals"] += 1
            if st["increasing"] != 1:
                report["violations"].append((i, j, f"{st['increasing']} increasing"))
            elif not st["lex_min_increasing"]:
                report["violations"].append((i, j, "lex-min not increasing"))
            elif not st["agree"]:
                report["violations"].append((i, j, "lex-min != colex-max"))
    report["ok"] = not report["violations"]
    return report


def increasing_factorization(group, order: ReflectionOrder, x, inventory=None):
    """The unique increasing word for an interval element: repeatedly strip
    the order-least reflection dividing the residual."""
    from .geometry import reflection_length
    word = []
    rest = x
    guard = 0
    while not rest.is_identity():
        guard += 1
        if guard > 32:
            raise AssertionError("increasing factorization did not terminate")
        ln = reflection_length(rest)
        for r in order.items:
            nxt = group.mul(r, rest)
            hmm = group.mul(group.inv(r), rest)
            if reflection_length(hmm) == ln - 1:
                word.append(r)
                rest = hmm
                break
        else:
            raise AssertionError("no window reflection divides the residual")
    for r1, r2 in zip(word, word[1:]):
        if not order.less(r1, r2):
            raise AssertionError("greedy factorization is not increasing")
    return word
