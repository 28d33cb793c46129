"""The interval complex, its shift maps, fiber components and subcomplexes.

A d-cell [x_1|...|x_d] records a weight-additive tuple of nontrivial
interval elements; cells are glued along the faces drop-first, merge-two,
drop-last.  Walking a cell to the right (towards w) or left (towards
w^{-1}) sweeps out fiber components, finitely many of which are cycles
while the rest are lines periodic under conjugation by w.  The core
subcomplex collects the cells whose product fixes a vertex of the base
chamber; the hull cuts each line down to the span of its core cells and
keeps the cycles whole, leaving a finite complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .geometry import reflection_length
from .intervals import EuclideanMarkedGroup, IntervalPoset


@dataclass
class Cell:
    entries: tuple            # poset element indices, none the identity
    pi: int                   # poset index of the product
    is_full: bool             # product equals the top element

    @property
    def dim(self) -> int:
        return len(self.entries)


class DeltaComplex:
    """All cells over a windowed interval, with face maps and tags."""

    def __init__(self, poset: IntervalPoset):
        self.poset = poset
        self.group = poset.group
        self.cells: dict = {}
        self.truncated_faces = 0
        self._build()
        self.core = set()
        self.hull = set()
        self._quot_cache = {}

    # -- construction --------------------------------------------------------
    def _build(self):
        p = self.poset
        g = self.group
        n = len(p.elements)
        top = p.top_index
        chains = [[]]
        self.cells[()] = Cell((), 0, p.rank[top] == 0)
        # chains 0 < y_1 < ... < y_d; entries x_i = y_{i-1}^{-1} y_i
        order = sorted(range(n), key=lambda i: (p.rank[i], i))

        def extend(chain):
            last = chain[-1] if chain else 0
            for y in order:
                if p.rank[y] == 0 or y == last:
                    continue
                if chain and not (p.leq(last, y) and p.rank[y] > p.rank[last]):
                    continue
                if not chain and p.rank[y] == 0:
                    continue
                new = chain + [y]
                ent = self._entries_of(new)
                if ent is not None:
                    self.cells[ent] = Cell(ent, new[-1], new[-1] == top)
                extend(new)

        extend([])

    def _entries_of(self, chain):
        p, g = self.poset, self.group
        out = []
        prev = None
        for y in chain:
            if prev is None:
                out.append(y)
            else:
                q = g.mul(g.inv(p.elements[prev]), p.elements[y])
                qi = p.key_index(q)
                if qi is None:
                    self.truncated_faces += 1
                    return None
                out.append(qi)
            prev = y
        return tuple(out)

    # -- basic cell operations -------------------------------------------------
    def __len__(self):
        return len(self.cells)

    def by_dim(self, d):
        return [c for c in self.cells.values() if c.dim == d]

    def max_dim(self):
        return max(c.dim for c in self.cells.values())

    def product_index(self, entries) -> Optional[int]:
        p, g = self.poset, self.group
        acc = g.identity
        for e in entries:
            acc = g.mul(acc, p.elements[e])
        return p.key_index(acc)

    def quotient_index(self, i, j) -> Optional[int]:
        """Index of elements[i]^{-1} elements[j]."""
        key = (i, j)
        if key not in self._quot_cache:
            g, p = self.group, self.poset
            q = g.mul(g.inv(p.elements[i]), p.elements[j])
            self._quot_cache[key] = p.key_index(q)
        return self._quot_cache[key]

    def merge_entries(self, entries, i) -> Optional[tuple]:
        """Replace entries i, i+1 by their product (a face map)."""
        p, g = self.poset, self.group
        prod = g.mul(p.elements[entries[i]], p.elements[entries[i + 1]])
        pi = p.key_index(prod)
        if pi is None:
            return None
        return entries[:i] + (pi,) + entries[i + 2:]

    def faces(self, entries):
        """The d+1 facets (drop-first, merges, drop-last); None marks a face
        escaping the window."""
        d = len(entries)
        if d == 0:
            return []
        out = [entries[1:]]
        for i in range(d - 1):
            out.append(self.merge_entries(entries, i))
        out.append(entries[:-1])
        checked = []
        for f in out:
            if f is not None and f in self.cells:
                checked.append(f)
            elif f is not None and f not in self.cells:
                checked.append(None)
            else:
                checked.append(None)
        return checked

    # -- shift maps ------------------------------------------------------------
    def push_right(self, entries) -> Optional[tuple]:
        """Step towards w: full cells lose their head, others gain the
        right complement of their product."""
        cell = self.cells[entries]
        if cell.is_full:
            return entries[1:] if entries[1:] in self.cells else None
        p, g = self.poset, self.group
        y = self.quotient_index(cell.pi, p.top_index)
        if y is None or p.rank[y] == 0:
            return None
        new = entries + (y,)
        return new if new in self.cells else None

    def push_left(self, entries) -> Optional[tuple]:
        """Step towards w^{-1}: full cells lose their tail, others gain the
        left complement of their product."""
        cell = self.cells[entries]
        if cell.is_full:
            return entries[:-1]
        p, g = self.poset, self.group
        comp = g.mul(g.top, g.inv(p.elements[cell.pi]))
        y = p.key_index(comp)
        if y is None or p.rank[y] == 0:
            return None
        new = (y,) + entries
        return new if new in self.cells else None

    def fiber_level(self, entries) -> int:
        cell = self.cells[entries]
        return cell.dim if cell.is_full else cell.dim + 1

    def conj_cell(self, entries) -> Optional[tuple]:
        """Entrywise conjugation by the Coxeter element."""
        p, g = self.poset, self.group
        out = []
        for e in entries:
            img = g.w.conj(p.elements[e])
            i = p.key_index(img)
            if i is None:
                return None
            out.append(i)
        t = tuple(out)
        return t if t in self.cells else None

    def conj_cell_inv(self, entries) -> Optional[tuple]:
        p, g = self.poset, self.group
        out = []
        for e in entries:
            img = g.w.conj_inv(p.elements[e])
            i = p.key_index(img)
            if i is None:
                return None
            out.append(i)
        t = tuple(out)
        return t if t in self.cells else None


def build_complex(poset: IntervalPoset) -> DeltaComplex:
    return DeltaComplex(poset)


def resolved_complex(system, w, window, attempts: int = 4):
    """Poset, complex, core and fully resolved fiber components; the window
    grows by one axis period per retry while any component stays truncated
    (the core and hull do not depend on the window)."""
    from .intervals import enumerate_interval
    last = None
    widen = 0
    for k in range(attempts):
        g = EuclideanMarkedGroup(system, w, window + widen)
        widen += g.axis.period
        p = enumerate_interval(g)
        K = build_complex(p)
        tag_core(K)
        comps = fiber_components(K)
        if all(c.kind != "truncated" for c in comps):
            return g, p, K, comps
        last = (g, p, K, comps)
    raise AssertionError("fiber components stayed truncated after widening; "
                         f"kinds: {[c.kind for c in last[3]]}")


# ---------------------------------------------------------------------------
# the core subcomplex (products fixing a base-chamber vertex)
# ---------------------------------------------------------------------------

def tag_core(K: DeltaComplex):
    """Cells whose product fixes a vertex of the closed base chamber."""
    p, g = K.poset, K.group
    verts = g.system.chamber_vertices()
    fixing = {}
    for i, u in enumerate(p.elements):
        fixing[i] = any(u(v) == v for v in verts)
    K.core = {ent for ent, cell in K.cells.items() if fixing[cell.pi]}
    for ent in K.core:
        for f in K.faces(ent):
            if f is not None and f not in K.core:
                raise AssertionError("core subcomplex not closed under faces")
    return K.core


def parabolic_core_crosscheck(K: DeltaComplex, max_group_order=400):
    """The core criterion agrees with membership of the product in an
    interval of a finite standard parabolic below its induced Coxeter
    element (checked on systems whose parabolics stay small)."""
    from itertools import combinations
    p, g = K.poset, K.group
    sys = g.system
    names = [s.name for s in sys.simple]
    order = list(g.w.order)
    para_members = set()
    checked_equality = True
    for drop in range(len(names)):
        T = [nm for nm in order if nm != names[drop]]
        gens = [sys.simple_by_name(nm).iso for nm in T]
        group_elems = _close_group(g, gens, max_group_order)
        w_t = g.identity
        for nm in T:
            w_t = g.mul(w_t, sys.simple_by_name(nm).iso)
        lw = reflection_length(w_t)
        inside = {u for u in group_elems
                  if reflection_length(u)
                  + reflection_length(g.mul(g.inv(u), w_t)) == lw}
        para_members |= {u.key() for u in inside}
        # the parabolic interval agrees with the ambient one below w_T
        wt_idx = p.key_index(w_t)
        if wt_idx is not None and p.certified[wt_idx]:
            ambient = {p.elements[i].key() for i in p.down_list(wt_idx)}
            if ambient != {u.key() for u in inside}:
                checked_equality = False
    mism = 0
    for ent, cell in K.cells.items():
        vertex_fix = ent in K.core
        parabolic = p.elements[cell.pi].key() in para_members
        if vertex_fix != parabolic:
            mism += 1
    return {"mismatches": mism, "parabolic_interval_equality": checked_equality}


def _close_group(g, gens, cap):
    seen = {g.identity.key(): g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for u in frontier:
            for s in gens:
                v = g.mul(u, s)
                if v.key() not in seen:
                    seen[v.key()] = v
                    nxt.append(v)
                    if len(seen) > cap:
                        raise AssertionError("parabolic subgroup exceeded cap")
        frontier = nxt
    return list(seen.values())


# ---------------------------------------------------------------------------
# fiber components
# ---------------------------------------------------------------------------

@dataclass
class FiberComponent:
    index: int
    kind: str                  # "finite" | "infinite" | "truncated"
    level: int                 # constant fiber level
    members: tuple             # cells in the window, in line/cycle order
    meets_core: bool
    period: Optional[int] = None   # steps of push_right matching one conj


def fiber_components(K: DeltaComplex):
    """Orbits of the shift maps, traversed with conjugation jumps; cycles
    are finite components, conjugation-periodic lines are infinite ones."""
    cells = list(K.cells.keys())
    comp_of = {}
    comps = []

    for start in sorted(cells, key=lambda e: (len(e), e)):
        if start in comp_of:
            continue
        # walk left as far as the window allows
        left = start
        seen_left = {start}
        while True:
            prv = K.push_left(left)
            if prv is None or prv in seen_left:
                break
            left = prv
            seen_left.add(prv)
        # walk right from the left end, collecting the line or cycle
        line = [left]
        pos = {left: 0}
        kind = "truncated"
        period = None
        cur = left
        while True:
            nxt = K.push_right(cur)
            if nxt is None:
                break
            if nxt in pos:
                kind = "finite"
                break
            line.append(nxt)
            pos[nxt] = len(line) - 1
            # conjugation-periodicity marks the line as an infinite orbit,
            # but the walk continues to the window edge
            if period is None:
                for img in (K.conj_cell(nxt), K.conj_cell_inv(nxt)):
                    if img is not None and img in pos and img != nxt:
                        kind = "infinite"
                        period = pos[nxt] - pos[img]
                        break
            cur = nxt
        idx = len(comps)
        levels = {K.fiber_level(e) for e in line}
        if len(levels) != 1:
            raise AssertionError("fiber level not constant along a component")
        meets = any(e in K.core for e in line)
        comps.append(FiberComponent(idx, kind, levels.pop(), tuple(line),
                                    meets, period))
        for e in line:
            comp_of[e] = idx
    # merge components connected through conjugation (the same global orbit
    # may enter the window several times)
    parent = list(range(len(comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in cells:
        for img in (K.conj_cell(e), K.conj_cell_inv(e)):
            if img is not None and img in comp_of:
                a, b = find(comp_of[e]), find(comp_of[img])
                if a != b:
                    parent[max(a, b)] = min(a, b)
    merged = {}
    for i, comp in enumerate(comps):
        root = find(i)
        merged.setdefault(root, []).append(comp)
    out = []
    for root in sorted(merged):
        group_members = merged[root]
        kind = ("finite" if any(c.kind == "finite" for c in group_members)
                else "infinite" if any(c.kind == "infinite" for c in group_members)
                else "truncated")
        # representative line: the longest traversed piece
        rep = max(group_members, key=lambda c: len(c.members))
        members = rep.members
        out.append(FiberComponent(
            len(out), kind, rep.level, members,
            any(c.meets_core for c in group_members),
            rep.period))
    return out


def classify_component_entries(K: DeltaComplex, comp: FiberComponent) -> str:
    """Entry pattern along the component, for the two-type dichotomy: type-1
    cells have all entries elliptic with at least one vertical, type-2 all
    entries elliptic horizontal or hyperbolic."""
    g, p = K.group, K.poset
    type1 = type2 = False
    for ent in comp.members:
        if not K.cells[ent].is_full or len(ent) == 0:
            continue
        elems = [p.elements[e] for e in ent]
        if all(not u.is_hyperbolic for u in elems) and any(
                not g.is_horizontal(u) for u in elems):
            type1 = True
        elif all(u.is_hyperbolic or g.is_horizontal(u) for u in elems):
            type2 = True
        else:
            return "mixed"
    if type1 and not type2:
        return "type1"
    if type2 and not type1:
        return "type2"
    return "empty" if not (type1 or type2) else "mixed"


# ---------------------------------------------------------------------------
# the hull (finite subcomplex the whole complex collapses onto)
# ---------------------------------------------------------------------------

def tag_hull(K: DeltaComplex, components):
    """Finite components entirely; each infinite line only between its
    first and last core cells."""
    hull = set()
    for comp in components:
        if comp.kind == "finite":
            hull.update(comp.members)
            continue
        core_pos = [i for i, e in enumerate(comp.members) if e in K.core]
        if not core_pos:
            raise AssertionError("a fiber component misses the core")
        lo, hi = core_pos[0], core_pos[-1]
        hull.update(comp.members[lo:hi + 1])
    K.hull = hull
    for ent in hull:
        for f in K.faces(ent):
            if f is not None and f not in hull:
                raise AssertionError("hull not closed under faces")
            if f is None:
                raise AssertionError("hull face escapes the window")
    if not K.core <= hull:
        raise AssertionError("hull does not contain the core")
    return hull


# ---------------------------------------------------------------------------
# the dual presentation
# ---------------------------------------------------------------------------

def dual_presentation(K: DeltaComplex):
    """Generators: one per edge; relations: (x1)(x2) = (x1 x2) per
    2-cell."""
    p = K.poset
    gens = sorted({c.entries[0] for c in K.cells.values() if c.dim == 1})
    rels = []
    for c in K.cells.values():
        if c.dim == 2:
            x1, x2 = c.entries
            m = K.merge_entries(c.entries, 0)
            rels.append(((x1, x2), m[0]))
    rels.sort()
    return {"generators": gens, "relations": rels}


def reduced_presentation(K: DeltaComplex):
    """Eliminate every generator of rank >= 2 using one defining relation,
    leaving relations among the atoms."""
    p = K.poset
    pres = dual_presentation(K)
    defn = {}
    for (x1, x2), prod in pres["relations"]:
        if p.rank[prod] >= 2 and prod not in defn:
            defn[prod] = (x1, x2)

    def expand(x, guard=0):
        if guard > 16:
            raise AssertionError("generator elimination cycled")
        if x not in defn:
            return (x,)
        a, b = defn[x]
        return expand(a, guard + 1) + expand(b, guard + 1)

    words = {}
    for (x1, x2), prod in pres["relations"]:
        w1 = expand(x1) + expand(x2)
        w2 = expand(prod)
        if w1 != w2:
            words.setdefault(tuple(sorted([w1, w2]))[0], set()).add((w1, w2))
    rel_words = sorted({(w1, w2) for pairs in words.values() for w1, w2 in pairs})
    atoms = sorted({x for w1, w2 in rel_words for x in w1 + w2}
                   | {x for x in pres["generators"] if p.rank[x] == p.scale})
    return {"generators": atoms, "relations": rel_words}
