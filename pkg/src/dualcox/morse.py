"""Discrete Morse matchings on the hull, their certificates, and integral
homology via Smith normal form.

The pairing sends a cell left or right along its fiber line; when the
right neighbour is a core cell the pairing instead splits off the least
reflection under the axial order at the cell's depth, or merges two
adjacent entries.  Acyclicity is certified twice: by direct cycle search
on the oriented face relation, and through the monotone word invariant
built from increasing factorizations of the entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .complexes import DeltaComplex, FiberComponent
from .geometry import reflection_length
from .orders import ReflectionOrder, increasing_factorization


# ---------------------------------------------------------------------------
# depth and the pairing
# ---------------------------------------------------------------------------

class MorseData:
    def __init__(self, K: DeltaComplex, order: ReflectionOrder):
        self.K = K
        self.order = order
        self.poset = K.poset
        self.group = K.poset.group
        # order positions of the carrier reflections that are enumerated
        # interval members (far verticals may fall outside the window; they
        # never divide the cells the pairing touches, and the certificate
        # checks would catch it if one did)
        self._present = []
        for pos, r in enumerate(order.items):
            i = self.poset.key_index(r)
            if i is not None:
                self._present.append((pos, i))
        self.vacuous_depth_cells = []

    # reflections of the order dividing an interval element, in order
    def reflections_below(self, elem_idx):
        p = self.poset
        return [pos for pos, ridx in self._present if p.leq(ridx, elem_idx)]

    def least_reflection_below(self, elem_idx) -> int:
        for pos, ridx in self._present:
            if self.poset.leq(ridx, elem_idx):
                return pos
        raise AssertionError("no window reflection divides the element")

    def reflection_at(self, pos) -> int:
        for p0, ridx in self._present:
            if p0 == pos:
                return ridx
        raise KeyError(pos)

    def depth(self, entries) -> Optional[int]:
        """Least position delta (1-based) with either a non-reflection entry
        there, or reflections all the way whose next entry only carries
        greater reflections; None when nothing qualifies."""
        p = self.poset
        d = len(entries)
        for delta in range(1, d + 1):
            x = entries[delta - 1]
            if p.rank[x] >= 2 * p.scale:
                return delta
            # entries 1..delta are reflections here
            pos_x = self.order.pos(p.elements[x])
            if delta == d:
                # the comparison set is empty; the convention is recorded
                self.vacuous_depth_cells.append(entries)
                return delta
            nxt = entries[delta]
            if all(pos_x < pos for pos in self.reflections_below(nxt)):
                return delta
        return None

    def pair(self, entries) -> tuple:
        """The matched cell of a hull cell outside the core."""
        K, p, g = self.K, self.poset, self.group
        cell = K.cells[entries]
        if entries in K.core:
            raise ValueError("core cells are critical")
        if not cell.is_full:
            out = K.push_left(entries)
            if out is None:
                raise AssertionError("pairing left leaves the window")
            return out
        right = K.push_right(entries)
        if right is None:
            raise AssertionError("pairing right leaves the window")
        if right not in K.core:
            return right
        delta = self.depth(entries)
        if delta is None:
            raise AssertionError("superior cell with core right-neighbour "
                                 "has unbounded depth")
        x = entries[delta - 1]
        if p.rank[x] >= 2 * p.scale:
            ypos = self.least_reflection_below(x)
            y = self.reflection_at(ypos)
            z = g.mul(g.inv(p.elements[y]), p.elements[x])
            zi = p.key_index(z)
            if zi is None:
                raise AssertionError("split leaves the window")
            new = entries[:delta - 1] + (y, zi) + entries[delta:]
            if new not in K.cells:
                raise AssertionError("split cell missing from the complex")
            return new
        if delta >= len(entries):
            raise AssertionError("reflection entry at the last position "
                                 "cannot be merged")
        new = K.merge_entries(entries, delta - 1)
        if new is None or new not in K.cells:
            raise AssertionError("merge cell missing from the complex")
        return new


# ---------------------------------------------------------------------------
# matching and certificate
# ---------------------------------------------------------------------------

@dataclass
class MatchingCertificate:
    involution: bool
    fixed_point_free: bool
    facet_pairs: bool
    regular_facets: bool
    critical_is_core: bool
    acyclic: bool
    proper: bool
    word_fact1: bool
    word_fact2: bool
    vacuous_depth_cells: int
    witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return all([self.involution, self.fixed_point_free, self.facet_pairs,
                    self.regular_facets, self.critical_is_core, self.acyclic,
                    self.proper, self.word_fact1, self.word_fact2])


def build_matching(K: DeltaComplex, order: ReflectionOrder):
    """The pairing on hull cells outside the core, as a set of (facet,
    cell) pairs."""
    md = MorseData(K, order)
    mu = {}
    for ent in K.hull:
        if ent not in K.core:
            mu[ent] = md.pair(ent)
    pairs = set()
    for ent, img in mu.items():
        lo, hi = (ent, img) if len(ent) < len(img) else (img, ent)
        pairs.add((lo, hi))
    return md, mu, sorted(pairs)


def facet_multiplicity(K: DeltaComplex, lo, hi) -> int:
    return sum(1 for f in K.faces(hi) if f == lo)


def verify_matching(K: DeltaComplex, order: ReflectionOrder):
    md, mu, pairs = build_matching(K, order)
    involution = all(mu.get(img) == ent for ent, img in mu.items())
    fpf = all(img != ent for ent, img in mu.items())
    facet_ok = all(abs(len(a) - len(b)) == 1 and facet_multiplicity(K, a, b) >= 1
                   for a, b in pairs)
    regular = all(facet_multiplicity(K, a, b) == 1 for a, b in pairs)
    matched = {c for pair in pairs for c in pair}
    critical = set(K.hull) - matched
    critical_is_core = critical == K.core

    acyclic, witness = _acyclic(K, set(pairs), K.hull)
    fact1, fact2 = _word_facts(md, mu, pairs)

    cert = MatchingCertificate(
        involution=involution, fixed_point_free=fpf, facet_pairs=facet_ok,
        regular_facets=regular, critical_is_core=critical_is_core,
        acyclic=acyclic, proper=True, word_fact1=fact1, word_fact2=fact2,
        vacuous_depth_cells=len(md.vacuous_depth_cells), witness=witness)
    return md, mu, pairs, cert


def _acyclic(K: DeltaComplex, pairs, carrier):
    """Cycle search in the face relation oriented by the matching."""
    up = {}
    down = {}
    pairset = pairs
    for ent in carrier:
        for f in K.faces(ent):
            if f is None or f not in carrier:
                continue
            if (f, ent) in pairset:
                up.setdefault(f, set()).add(ent)
            else:
                down.setdefault(ent, set()).add(f)
    adj = {}
    for a, outs in up.items():
        adj.setdefault(a, set()).update(outs)
    for a, outs in down.items():
        adj.setdefault(a, set()).update(outs)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in carrier}
    for root in carrier:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(adj.get(root, ()))))]
        color[root] = GREY
        while stack:
            v, it = stack[-1]
            advanced = False
            for nxt in it:
                if color.get(nxt, BLACK) == GREY:
                    return False, (v, nxt)
                if color.get(nxt, BLACK) == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(sorted(adj.get(nxt, ())))))
                    advanced = True
                    break
            if not advanced:
                color[v] = BLACK
                stack.pop()
    return True, None


# ---------------------------------------------------------------------------
# the monotone word invariant
# ---------------------------------------------------------------------------

def increasing_word(md: MorseData, entries) -> tuple:
    """Concatenated increasing factorizations of the entries (for inferior
    cells, of the left-pushed cell), as order positions."""
    K, p, g = md.K, md.poset, md.group
    cell = K.cells[entries]
    if not cell.is_full:
        entries = K.push_left(entries)
        if entries is None:
            raise AssertionError("word invariant needs the left neighbour")
    word = []
    for e in entries:
        for r in increasing_factorization(g, md.order, p.elements[e]):
            word.append(md.order.pos(r))
    return tuple(word)


def word_key(word: tuple) -> tuple:
    """Sort key for the top-down word order: larger maximal reflection
    first, then later first occurrence, then lexicographic order."""
    mx = max(word)
    return (-mx, -(word.index(mx)), word)


def _word_facts(md: MorseData, mu, pairs):
    K = md.K
    words = {}

    def wd(ent):
        if ent not in words:
            words[ent] = increasing_word(md, ent)
        return words[ent]

    fact1 = True
    for ent, img in mu.items():
        if wd(ent) != wd(img):
            fact1 = False
    fact2 = True
    domain = set(mu)
    for ent in domain:
        if not K.cells[ent].is_full:
            continue
        left = K.push_left(ent)
        for f in K.faces(ent):
            if f is None or f not in domain:
                continue
            if word_key(wd(f)) > word_key(wd(ent)):
                fact2 = False
            if f == left and not word_key(wd(f)) < word_key(wd(ent)):
                fact2 = False
    return fact1, fact2


# ---------------------------------------------------------------------------
# the line matchings that collapse the full complex onto the hull
# ---------------------------------------------------------------------------

def component_matching(K: DeltaComplex, comps) -> dict:
    """Per infinite fiber line, pair consecutive cells outside the hull
    segment towards it; the union over fibers stays acyclic and leaves
    exactly the hull critical (up to window-edge leftovers, reported)."""
    pairs = []
    leftover_cells = []
    for comp in comps:
        if comp.kind == "finite":
            continue
        members = comp.members
        in_hull = [i for i, e in enumerate(members) if e in K.hull]
        if not in_hull:
            raise AssertionError("fiber line misses the hull")
        lo, hi = in_hull[0], in_hull[-1]
        i = lo - 1
        while i - 1 >= 0:
            pairs.append((members[i], members[i - 1]))
            i -= 2
        if i == 0:
            leftover_cells.append(members[0])
        i = hi + 1
        while i + 1 < len(members):
            pairs.append((members[i], members[i + 1]))
            i += 2
        if i == len(members) - 1:
            leftover_cells.append(members[-1])
    norm = set()
    used = {}
    for a, b in pairs:
        lo_c, hi_c = (a, b) if len(a) < len(b) else (b, a)
        if facet_multiplicity(K, lo_c, hi_c) != 1:
            raise AssertionError("line pairing uses an irregular facet")
        for c in (lo_c, hi_c):
            if c in used:
                raise AssertionError("cell matched twice across fibers")
            used[c] = True
        norm.add((lo_c, hi_c))
    carrier = set(K.cells)
    acyclic, witness = _acyclic(K, norm, carrier)
    matched = {c for pair in norm for c in pair}
    critical = {e for e in K.cells if e not in matched}
    return {
        "pairs": sorted(norm),
        "acyclic": acyclic,
        "witness": witness,
        "critical_equals_hull": critical == set(K.hull),
        "critical_is_hull_plus_edges": critical == set(K.hull) | set(leftover_cells),
        "edge_leftovers": len(leftover_cells),
        "critical_extra": sorted(critical - set(K.hull)),
    }


# ---------------------------------------------------------------------------
# chain complexes, Smith normal form, homology
# ---------------------------------------------------------------------------

def boundary_matrices(K: DeltaComplex, cells) -> dict:
    """Signed boundary matrices of the subcomplex spanned by `cells`."""
    cells = set(cells)
    by_dim = {}
    for ent in cells:
        by_dim.setdefault(len(ent), []).append(ent)
    for d in by_dim:
        by_dim[d].sort()
    index = {d: {e: i for i, e in enumerate(es)} for d, es in by_dim.items()}
    mats = {}
    top = max(by_dim) if by_dim else 0
    for d in range(1, top + 1):
        rows = len(by_dim.get(d - 1, []))
        cols = len(by_dim.get(d, []))
        mat = [[0] * cols for _ in range(rows)]
        for j, ent in enumerate(by_dim.get(d, [])):
            for i, f in enumerate(K.faces(ent)):
                if f is None or f not in cells:
                    raise AssertionError("boundary leaves the subcomplex")
                mat[index[d - 1][f]][j] += (-1) ** i
        mats[d] = mat
    return {"cells": by_dim, "boundaries": mats}


def verify_dd_zero(chain) -> bool:
    mats = chain["boundaries"]
    for d in mats:
        if d + 1 not in mats:
            continue
        a, b = mats[d], mats[d + 1]
        if not a or not b or not b[0]:
            continue
        rows, mid, cols = len(a), len(b), len(b[0])
        for i in range(rows):
            for j in range(cols):
                s = sum(a[i][k] * b[k][j] for k in range(mid))
                if s != 0:
                    return False
    return True


def smith_normal_form(mat):
    """Diagonal of the Smith normal form; greedy smallest-pivot reduction
    with a divisibility fix-up, over exact integers."""
    m = [row[:] for row in mat]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        # locate the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        m[t], m[i0] = m[i0], m[t]
        for row in m:
            row[t], row[j0] = row[j0], row[t]
        while True:
            reduced = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    for j in range(t, cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t] != 0:
                        m[t], m[i] = m[i], m[t]
                    reduced = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    for i in range(t, rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j] != 0:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                    reduced = True
            if not reduced:
                break
        # divisibility fix-up: the pivot must divide the remaining block
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t] != 0:
                    for jj in range(t, cols):
                        m[t][jj] += m[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def homology(chain) -> dict:
    """Betti numbers and torsion per dimension from Smith normal forms."""
    by_dim = chain["cells"]
    mats = chain["boundaries"]
    top = max(by_dim) if by_dim else 0
    snf = {d: smith_normal_form(mats[d]) for d in mats}
    rank = {d: len([x for x in snf.get(d, []) if x != 0]) for d in range(top + 2)}
    out = {}
    for d in range(top + 1):
        dim_cd = len(by_dim.get(d, []))
        betti = dim_cd - rank.get(d, 0) - rank.get(d + 1, 0)
        torsion = [x for x in snf.get(d + 1, []) if x > 1]
        out[d] = {"betti": betti, "torsion": torsion}
    return out


def euler_characteristic(chain) -> int:
    return sum((-1) ** d * len(es) for d, es in chain["cells"].items())


def compare_homology(K: DeltaComplex) -> dict:
    """Homology of the hull against the core, dimension by dimension."""
    ch_hull = boundary_matrices(K, K.hull)
    ch_core = boundary_matrices(K, K.core)
    if not verify_dd_zero(ch_hull) or not verify_dd_zero(ch_core):
        raise AssertionError("boundary of boundary is nonzero")
    h_hull = homology(ch_hull)
    h_core = homology(ch_core)
    top = max(max(h_hull), max(h_core))
    equal = True
    for d in range(top + 1):
        a = h_hull.get(d, {"betti": 0, "torsion": []})
        b = h_core.get(d, {"betti": 0, "torsion": []})
        if a != b:
            equal = False
    return {
        "hull": h_hull,
        "core": h_core,
        "equal": equal,
        "euler_hull": euler_characteristic(ch_hull),
        "euler_core": euler_characteristic(ch_core),
    }
