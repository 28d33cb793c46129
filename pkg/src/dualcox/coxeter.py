"""Realized irreducible affine Coxeter systems over the rationals.

Each supported family is realized explicitly: the simple mirrors determine
the group; the full mirror arrangement is recovered exactly from the
translation lattice (the Z-span of the coroots in the length class of the
affine node's root).  The Coxeter axis of a chosen Coxeter element is
analysed by an exact chamber walk; where the axis meets lower-dimensional
strata, crossings are separated by a symbolic perturbation implemented as
lexicographic comparison of rational key tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .geometry import (
    AffineSubspace,
    Isometry,
    ZLattice,
    dot,
    is_zero_vec,
    mat_id,
    norm2,
    primitive,
    qvec,
    reflection_length,
    row_space,
    solve,
    vadd,
    vscale,
    vsub,
    zero_vec,
    Q,
)


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

_AFFINE_FAMILIES = "ABCDEFG"


@dataclass(frozen=True)
class CoxeterType:
    family: str
    rank: int
    affine: bool

    @staticmethod
    def parse(s: str) -> "CoxeterType":
        s = s.strip()
        if "~" in s:
            fam, _, r = s.partition("~")
            affine = True
        else:
            fam, r = s[:1], s[1:]
            affine = False
        fam = fam.upper()
        if fam not in _AFFINE_FAMILIES or not r.isdigit():
            raise ValueError(f"unrecognized type string: {s!r}")
        return CoxeterType(fam, int(r), affine)

    def __str__(self):
        return f"{self.family}~{self.rank}" if self.affine else f"{self.family}{self.rank}"


@dataclass(frozen=True)
class SimpleReflection:
    name: str
    root: tuple
    offset: Fraction
    iso: Isometry


# ---------------------------------------------------------------------------
# root data per family
# ---------------------------------------------------------------------------

def _e(i, n):
    return tuple(Q(1) if j == i else Q(0) for j in range(n))


def _roots_type_a(n):
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                out.append(vsub(_e(i, n), _e(j, n)))
    return out


def _roots_bc(n):
    out = []
    for i in range(n):
        out.append(_e(i, n))
        out.append(vscale(-1, _e(i, n)))
    out.extend(_roots_d(n))
    return out


def _roots_d(n):
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1, -1):
                for sj in (1, -1):
                    out.append(vadd(vscale(si, _e(i, n)), vscale(sj, _e(j, n))))
    return out


def _roots_g2():
    out = []
    for i in range(3):
        for j in range(3):
            if i != j:
                out.append(vsub(_e(i, 3), _e(j, 3)))
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        v = vsub(vscale(2, _e(i, 3)), vadd(_e(j, 3), _e(k, 3)))
        out.append(v)
        out.append(vscale(-1, v))
    return out


def _roots_f4():
    out = _roots_bc(4)
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                for s4 in (1, -1):
                    out.append(tuple(Q(s, 2) for s in (s1, s2, s3, s4)))
    return out


def _roots_e8():
    out = _roots_d(8)
    for signs in range(256):
        bits = [(signs >> k) & 1 for k in range(8)]
        if sum(bits) % 2 == 0:
            out.append(tuple(Q(1, 2) if b == 0 else Q(-1, 2) for b in bits))
    return out


def _sum_zero_basis(n):
    return tuple(vsub(_e(i, n), _e(n - 1, n)) for i in range(n - 1))


def _build_data(ct: CoxeterType):
    """Ambient dim, essential basis (or None), simple (root, offset) list,
    all roots, and the row index of the affine node."""
    f, r = ct.family, ct.rank
    if f == "A" and not ct.affine:
        if r < 1:
            raise ValueError("finite A needs rank >= 1")
        n = r + 1
        simples = [(vsub(_e(i + 1, n), _e(i, n)), Q(0)) for i in range(r)]
        return n, _sum_zero_basis(n), simples, _roots_type_a(n), None
    if not ct.affine:
        raise ValueError(f"finite family {f!r} not supported (only finite A)")
    if f == "A":
        if r < 2:
            raise ValueError("affine A needs rank >= 2")
        n = r + 1
        simples = [(vsub(_e(i + 1, n), _e(i, n)), Q(0)) for i in range(r)]
        simples.append((vsub(_e(n - 1, n), _e(0, n)), Q(1)))
        return n, _sum_zero_basis(n), simples, _roots_type_a(n), r
    if f == "C":
        if r < 2:
            raise ValueError("affine C needs rank >= 2")
        n = r
        simples = [(_e(0, n), Q(0))]
        simples += [(vsub(_e(i + 1, n), _e(i, n)), Q(0)) for i in range(n - 1)]
        simples.append((_e(n - 1, n), Q(1)))
        return n, None, simples, _roots_bc(n), n
    if f == "B":
        if r < 3:
            raise ValueError("affine B needs rank >= 3")
        n = r
        simples = [(_e(0, n), Q(0))]
        simples += [(vsub(_e(i + 1, n), _e(i, n)), Q(0)) for i in range(n - 1)]
        simples.append((vadd(_e(n - 2, n), _e(n - 1, n)), Q(1)))
        return n, None, simples, _roots_bc(n), n
    if f == "D":
        if r < 4:
            raise ValueError("affine D needs rank >= 4")
        n = r
        simples = [(vadd(_e(0, n), _e(1, n)), Q(0))]
        simples += [(vsub(_e(i + 1, n), _e(i, n)), Q(0)) for i in range(n - 1)]
        simples.append((vadd(_e(n - 2, n), _e(n - 1, n)), Q(1)))
        return n, None, simples, _roots_d(n), n
    if f == "G":
        if r != 2:
            raise ValueError("affine G needs rank 2")
        a1 = vsub(_e(0, 3), _e(1, 3))
        a2 = vadd(vscale(-2, _e(0, 3)), vadd(_e(1, 3), _e(2, 3)))
        theta = vsub(vscale(2, _e(2, 3)), vadd(_e(0, 3), _e(1, 3)))
        simples = [(a1, Q(0)), (a2, Q(0)), (theta, Q(1))]
        return 3, _sum_zero_basis(3), simples, _roots_g2(), 2
    if f == "F":
        if r != 4:
            raise ValueError("affine F needs rank 4")
        a1 = vsub(_e(1, 4), _e(2, 4))
        a2 = vsub(_e(2, 4), _e(3, 4))
        a3 = _e(3, 4)
        a4 = tuple(Q(s, 2) for s in (1, -1, -1, -1))
        theta = vadd(_e(0, 4), _e(1, 4))
        simples = [(a, Q(0)) for a in (a1, a2, a3, a4)] + [(theta, Q(1))]
        return 4, None, simples, _roots_f4(), 4
    if f == "E":
        if r not in (6, 7, 8):
            raise ValueError("affine E needs rank 6, 7 or 8")
        n = 8
        roots8 = _roots_e8()
        a = [None] * 9
        a[1] = tuple(Q(s, 2) for s in (1, -1, -1, -1, -1, -1, -1, 1))
        a[2] = vadd(_e(0, n), _e(1, n))
        for k in range(3, 9):
            a[k] = vsub(_e(k - 2, n), _e(k - 3, n))
        simples_fin = [a[k] for k in range(1, r + 1)]
        span = row_space(simples_fin)
        roots = [al for al in roots8 if _in_row_space(span, al)]
        if r == 8:
            theta = vadd(_e(6, n), _e(7, n))
        elif r == 7:
            theta = vsub(_e(7, n), _e(6, n))
        else:
            theta = tuple(Q(s, 2) for s in (1, 1, 1, 1, 1, -1, -1, 1))
        simples = [(al, Q(0)) for al in simples_fin] + [(theta, Q(1))]
        return n, span, simples, roots, r
    raise ValueError(f"unsupported type {ct}")


def _in_row_space(basis, v):
    from .geometry import in_span
    return in_span(basis, v)


_EXPECTED_HORIZONTAL = {
    "B": lambda n: sorted([1, n - 2]),
    "C": lambda n: [n - 1],
    "D": lambda n: sorted([1, 1, n - 3]),
    "G": lambda n: [1],
    "F": lambda n: [1, 2],
    "E": lambda n: {6: [1, 2, 2], 7: [1, 2, 3], 8: [1, 2, 4]}[n],
}


# ---------------------------------------------------------------------------
# the system
# ---------------------------------------------------------------------------

class CoxeterSystem:
    def __init__(self, ct: CoxeterType):
        self.ctype = ct
        n, ess, simples, roots, affine_idx = _build_data(ct)
        self.ambient = n
        self.ess = tuple(ess) if ess is not None else None
        self.affine = ct.affine
        self._intern: dict = {}
        # positive roots, by sign against a regular point of the finite chamber
        fin_roots = [s[0] for s in simples[: len(simples) - (1 if ct.affine else 0)]]
        self.reg_point = self._regular_point(fin_roots)
        pos = []
        for al in roots:
            s = dot(al, self.reg_point)
            if s == 0:
                raise ValueError("regular point is not regular")
            if s > 0:
                pos.append(al)
        self.roots_pos = tuple(sorted(pos))
        names = [f"s{i+1}" for i in range(len(simples))]
        if ct.affine:
            names[-1] = "s0"
        self.simple = tuple(
            SimpleReflection(nm, al, off, self.refl(al, off))
            for nm, (al, off) in zip(names, simples)
        )
        # translation lattice: Z-span of coroots in the affine root's length class
        if ct.affine:
            theta = simples[-1][0]
            cls = [al for al in roots if norm2(al) == norm2(theta)]
            self.lattice = ZLattice([vscale(Q(2) / norm2(al), al) for al in cls], n)
            self._scales = {}
            for al in self.roots_pos:
                d = self.lattice.scale_of(vscale(Q(2) / norm2(al), al))
                if d is None or d <= 0:
                    raise ValueError("coroot outside the rational span of the lattice")
                self._scales[al] = d
        else:
            self.lattice = None
            self._scales = {al: None for al in self.roots_pos}
        self._prim_to_root = {}
        for al in self.roots_pos:
            self._prim_to_root[primitive(al)] = al
        self.coxeter_matrix = self._compute_matrix()
        self._verify()

    def mirror_canon(self, normal, c):
        """Canonical (positive root, offset) naming the mirror <normal,x>=c."""
        al = self._prim_to_root[primitive(normal)]
        s = next(x / y for x, y in zip(al, normal) if y != 0)
        return al, s * c

    # -- construction helpers ----------------------------------------------

    def _regular_point(self, fin_roots):
        n = self.ambient
        rows = list(fin_roots)
        rhs = [Q(1)] * len(rows)
        if self.ess is not None:
            from .geometry import nullspace
            comp = nullspace(list(self.ess), n)
            rows = rows + list(comp)
            rhs = rhs + [Q(0)] * len(comp)
        pt = solve(rows, rhs)
        if pt is None:
            raise ValueError("no regular point for the finite chamber")
        return pt

    def refl(self, root, offset) -> Isometry:
        from .geometry import reflection_through
        iso = reflection_through(root, offset, ess=self.ess)
        return self.intern(iso)

    def intern(self, iso: Isometry) -> Isometry:
        got = self._intern.get(iso.key())
        if got is None:
            self._intern[iso.key()] = iso
            return iso
        return got

    def identity(self) -> Isometry:
        return self.intern(Isometry.identity(self.ambient, ess=self.ess))

    def _compute_matrix(self):
        k = len(self.simple)
        m = [[1] * k for _ in range(k)]
        table = {0: 2, 1: 3, 2: 4, 3: 6}
        for i in range(k):
            for j in range(i + 1, k):
                ai, aj = self.simple[i].root, self.simple[j].root
                ratio = 4 * dot(ai, aj) ** 2 / (norm2(ai) * norm2(aj))
                if ratio not in table:
                    raise ValueError("simple roots at unsupported angle")
                m[i][j] = m[j][i] = table[ratio]
        return tuple(tuple(row) for row in m)

    def _verify(self):
        ident = self.identity()
        for s in self.simple:
            if not s.iso.compose(s.iso) == ident:
                raise AssertionError(f"simple {s.name} is not an involution")
        for i, si in enumerate(self.simple):
            for j, sj in enumerate(self.simple):
                if i >= j:
                    continue
                m = self.coxeter_matrix[i][j]
                prod = si.iso.compose(sj.iso)
                acc = ident
                for _ in range(m):
                    acc = acc.compose(prod)
                if acc != ident:
                    raise AssertionError(
                        f"({si.name}{sj.name})^{m} != 1 in {self.ctype}")
        all_roots = set(self.roots_pos) | {vscale(-1, al) for al in self.roots_pos}
        for s in self.simple:
            for al in self.roots_pos:
                if s.iso.apply_vector(al) not in all_roots:
                    raise AssertionError("simple reflection does not stabilize roots")

    # -- public data ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.simple) - (1 if self.affine else 0)

    @property
    def ess_dim(self) -> int:
        return len(self.ess) if self.ess is not None else self.ambient

    def simple_by_name(self, name: str) -> SimpleReflection:
        for s in self.simple:
            if s.name == name:
                return s
        raise KeyError(name)

    def mirror_offset_scale(self, root) -> Optional[Fraction]:
        """Offsets of mirrors normal to `root` form scale * Z (None: only 0)."""
        return self._scales[root]

    def chamber_halfspaces(self):
        """(normal, const, sign): interior satisfies sign*(<n,x> - c) > 0."""
        out = []
        ns = len(self.simple)
        for i, s in enumerate(self.simple):
            if self.affine and i == ns - 1:
                out.append((s.root, s.offset, -1))
            else:
                out.append((s.root, s.offset, 1))
        return out

    def chamber_vertices(self):
        """Vertices of the closed base chamber (affine systems only)."""
        if not self.affine:
            raise ValueError("finite chamber is a cone")
        from .geometry import nullspace
        halfs = self.chamber_halfspaces()
        verts = []
        extra_rows, extra_rhs = [], []
        if self.ess is not None:
            comp = nullspace(list(self.ess), self.ambient)
            extra_rows = list(comp)
            extra_rhs = [Q(0)] * len(comp)
        for drop in range(len(halfs)):
            rows = [h[0] for i, h in enumerate(halfs) if i != drop] + extra_rows
            rhs = [h[1] for i, h in enumerate(halfs) if i != drop] + extra_rhs
            pt = solve(rows, rhs)
            if pt is None:
                raise AssertionError("chamber walls in degenerate position")
            n0, c0, sg = halfs[drop]
            if sg * (dot(n0, pt) - c0) <= 0:
                raise AssertionError("chamber vertex on the wrong side")
            verts.append(pt)
        return tuple(verts)

    def chamber_barycenter(self):
        verts = self.chamber_vertices()
        acc = zero_vec(self.ambient)
        for v in verts:
            acc = vadd(acc, v)
        return vscale(Q(1, len(verts)), acc)

    def in_closed_chamber(self, x) -> bool:
        return all(sg * (dot(n, x) - c) >= 0 for n, c, sg in self.chamber_halfspaces())

    def chamber_of_point(self, x) -> Isometry:
        """The u with x in u(C0-closure); exact gallery walk."""
        halfs = self.chamber_halfspaces()
        u = self.identity()
        y = x
        guard = 0
        while True:
            moved = False
            for (n, c, sg), s in zip(halfs, self.simple):
                if sg * (dot(n, y) - c) < 0:
                    y = s.iso(y)
                    u = u.compose(s.iso)
                    moved = True
                    break
            if not moved:
                return self.intern(u)
            guard += 1
            if guard > 100000:
                raise RuntimeError("chamber walk failed to terminate")


def build_system(type_string) -> CoxeterSystem:
    ct = type_string if isinstance(type_string, CoxeterType) else CoxeterType.parse(type_string)
    return CoxeterSystem(ct)


# ---------------------------------------------------------------------------
# Coxeter elements and axis data
# ---------------------------------------------------------------------------

@dataclass
class CoxeterElement:
    system: CoxeterSystem
    order: tuple          # names of simples, product order
    iso: Isometry
    axis_point: tuple     # a point on the axis
    mu: tuple             # exact displacement along the axis

    def conj(self, u: Isometry) -> Isometry:
        """Conjugation by the Coxeter element: u -> w^-1 u w."""
        return self.system.intern(self.iso.inverse().compose(u).compose(self.iso))

    def conj_inv(self, u: Isometry) -> Isometry:
        return self.system.intern(self.iso.compose(u).compose(self.iso.inverse()))

    @property
    def length(self) -> int:
        return self.system.ess_dim + 1


def coxeter_element(system: CoxeterSystem, order=None) -> CoxeterElement:
    names = [s.name for s in system.simple]
    if order is None:
        order = names
    order = list(order)
    if sorted(order) != sorted(names):
        raise ValueError(f"order {order} is not a permutation of {names}")
    w = system.identity()
    for nm in order:
        w = w.compose(system.simple_by_name(nm).iso)
    w = system.intern(w)
    if not system.affine:
        return CoxeterElement(system, tuple(order), w, None, None)
    if reflection_length(w) != system.ess_dim + 1:
        raise AssertionError("Coxeter element has wrong reflection length")
    inv = w.invariants()
    if inv.min_set.dim != 1:
        raise AssertionError("min set of the Coxeter element is not a line")
    a = inv.min_set.point
    mu = inv.mu
    if vsub(w(a), a) != mu:
        raise AssertionError("axis point is not minimally displaced")
    return CoxeterElement(system, tuple(order), w, a, mu)


@dataclass(frozen=True)
class Crossing:
    """One mirror crossing of the (perturbed) Coxeter axis."""
    index: int            # position: p_i
    theta: Fraction       # exact axis parameter of the unperturbed crossing
    key: tuple            # symbolic perturbation key (lexicographic)
    root: tuple
    offset: Fraction
    iso: Isometry


@dataclass(frozen=True)
class AxialChamber:
    low: int              # crossing index directly below (the chamber sits
    high: int             # between crossings low and high = low + 1)
    rep: Isometry
    vertices: tuple


@dataclass
class AxisData:
    w: CoxeterElement
    crossings: dict             # index -> Crossing
    chambers: tuple             # AxialChamber, ordered along the axis
    base_positions: tuple       # indices i with chamber (i, i+1) equal to C0
    c0_axial: bool
    theta_ref: Fraction         # reference split when C0 is off the axis
    period: int                 # crossings per unit of theta (phi shift)
    axial_vertices: tuple
    window: int
    nongeneric: bool            # axis met a codim >= 2 stratum in the window

    def crossing_list(self):
        return [self.crossings[i] for i in sorted(self.crossings)]

    def vertex_set(self):
        return set(self.axial_vertices)


def axis_data(system: CoxeterSystem, w: CoxeterElement, window: int) -> AxisData:
    if not system.affine:
        raise ValueError("axis data requires an affine system")
    a, mu = w.axis_point, w.mu
    bary = system.chamber_barycenter()
    # perturbation directions: toward the base chamber, then coordinate axes
    tref = dot(vsub(bary, a), mu) / norm2(mu)
    g0 = vsub(bary, vadd(a, vscale(tref, mu)))
    gs = [g for g in [g0] if not is_zero_vec(g)]
    gs += [tuple(r) for r in (system.ess if system.ess is not None else mat_id(system.ambient))]

    vertical, horizontal = [], []
    for al in system.roots_pos:
        if dot(al, mu) != 0:
            vertical.append(al)
        else:
            horizontal.append(al)
            d = system.mirror_offset_scale(al)
            if (dot(al, a) / d) % 1 == 0:
                raise AssertionError("axis lies inside a horizontal mirror")

    # enough crossings to cover the requested window plus a full period
    period = 0
    for al in vertical:
        d = system.mirror_offset_scale(al)
        period += abs(dot(al, mu)) / d
    if period % 1 != 0:
        raise AssertionError("crossings per period is not an integer")
    period = int(period)
    span = window + 2 * period + 6
    radius = Q(span + 2, period) + 2

    raw = []
    for al in vertical:
        d = system.mirror_offset_scale(al)
        sal = dot(al, mu)
        lo_c = (tref - radius) * sal + dot(al, a)
        hi_c = (tref + radius) * sal + dot(al, a)
        lo_c, hi_c = min(lo_c, hi_c), max(hi_c, lo_c)
        k0 = (lo_c / d).__ceil__()
        k = k0
        while k * d <= hi_c:
            c = k * d
            theta = (c - dot(al, a)) / sal
            key = (theta,) + tuple(-dot(al, g) / sal for g in gs)
            raw.append((key, theta, al, c))
            k += 1
    raw.sort(key=lambda t: t[0])
    thetas = [t[1] for t in raw]
    nongeneric = len(set(thetas)) != len(thetas)

    # chamber walk along the perturbed axis; start safely below the first
    # enumerated crossing (gaps between crossings repeat with the period,
    # so half the minimal gap clears every mirror)
    min_gap = min(b - a_ for a_, b in zip(thetas, thetas[1:]) if b != a_)
    start = vadd(a, vscale(raw[0][1] - min_gap / 2, mu))
    reps = [system.chamber_of_point(start)]
    for key, theta, al, c in raw:
        r = system.refl(al, c)
        reps.append(system.intern(r.compose(reps[-1])))

    # index crossings so that p_1 is the first crossing above the base chamber
    ident = system.identity()
    base_pos = [i for i, u in enumerate(reps) if u == ident]
    if base_pos:
        c0_axial = True
        if len(base_pos) != 1:
            raise AssertionError("base chamber met more than once along the axis")
        anchor = base_pos[0]         # crossing raw[anchor] is p_1
    else:
        c0_axial = False
        anchor = next((i for i, t in enumerate(raw) if t[1] > tref), len(raw))

    crossings = {}
    for pos, (key, theta, al, c) in enumerate(raw):
        idx = pos - anchor + 1
        crossings[idx] = Crossing(idx, theta, key, al, c, system.refl(al, c))

    verts_c0 = system.chamber_vertices()
    chambers = []
    for pos, u in enumerate(reps):
        low = pos - anchor       # chamber between crossings low and low+1
        vv = tuple(u(v) for v in verts_c0)
        chambers.append(AxialChamber(low, low + 1, u, vv))

    # verify periodicity at the level of crossing parameters: the perturbed
    # tie-breaks inside a cluster are not w-equivariant, but the crossing
    # multiset advances by exactly one unit of theta every `period` steps
    for pos in range(len(raw) - period):
        if raw[pos + period][1] != raw[pos][1] + 1:
            raise AssertionError("axis crossings are not periodic")

    vset = []
    seen = set()
    for ch in chambers:
        for v in ch.vertices:
            if v not in seen:
                seen.add(v)
                vset.append(v)

    keep = {i: c for i, c in crossings.items() if -span <= i <= span}
    return AxisData(
        w=w,
        crossings=keep,
        chambers=tuple(chambers),
        base_positions=tuple(i for i in base_pos),
        c0_axial=c0_axial,
        theta_ref=tref,
        period=period,
        axial_vertices=tuple(vset),
        window=window,
        nongeneric=nongeneric,
    )


# ---------------------------------------------------------------------------
# reflection inventory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReflectionRecord:
    name: str
    iso: Isometry
    root: tuple
    offset: Fraction
    kind: str                 # "vertical" | "horizontal"
    index: Optional[int]      # crossing index for verticals
    theta: Optional[Fraction]
    component: Optional[int]  # horizontal component index
    in_R0: bool


@dataclass
class HorizontalComponent:
    index: int
    roots_pos: tuple
    rank: int
    basis: tuple


@dataclass
class HorizontalDecomposition:
    components: tuple
    mu: tuple

    @property
    def k(self) -> int:
        return len(self.components)

    def component_of_root(self, root) -> int:
        p = primitive(root)
        for comp in self.components:
            for al in comp.roots_pos:
                if primitive(al) == p:
                    return comp.index
        raise KeyError(root)


def horizontal_decomposition(system: CoxeterSystem, w: CoxeterElement) -> HorizontalDecomposition:
    mu = w.mu
    hor = [al for al in system.roots_pos if dot(al, mu) == 0]
    comps = []
    todo = list(hor)
    while todo:
        seed = todo.pop(0)
        comp = [seed]
        changed = True
        while changed:
            changed = False
            for al in list(todo):
                if any(dot(al, b) != 0 for b in comp):
                    comp.append(al)
                    todo.remove(al)
                    changed = True
        comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    out = []
    for i, c in enumerate(comps):
        basis = row_space(c)
        r = len(basis)
        if len(c) != r * (r + 1) // 2:
            raise AssertionError("horizontal component is not of type A")
        lens = {norm2(al) for al in c}
        if len(lens) != 1:
            raise AssertionError("horizontal component has roots of two lengths")
        out.append(HorizontalComponent(i, tuple(c), r, basis))
    # orthogonality of the pieces, and the dimension count with the axis line
    for i, ci in enumerate(out):
        for cj in out[i + 1:]:
            for x in ci.roots_pos:
                for y in cj.roots_pos:
                    if dot(x, y) != 0:
                        raise AssertionError("horizontal components not orthogonal")
    total = 1 + sum(c.rank for c in out)
    if total != system.ess_dim:
        raise AssertionError("horizontal decomposition does not fill the space")
    fam = system.ctype.family
    if fam == "A":
        strands = sum(c.rank + 1 for c in out) + (2 - len(out)) * 1
        if len(out) > 2 or strands != system.ambient:
            raise AssertionError("affine A horizontal ranks inconsistent with a bigon")
    else:
        expected = _EXPECTED_HORIZONTAL[fam](system.ctype.rank)
        if sorted(c.rank for c in out) != expected:
            raise AssertionError(
                f"horizontal decomposition {[c.rank for c in out]} does not match "
                f"the expected pattern {expected} for {system.ctype}")
    return HorizontalDecomposition(tuple(out), mu)


def bigon_class(system: CoxeterSystem, dec: HorizontalDecomposition):
    """(p, q) with p >= q for affine A; derived from the chosen element."""
    if system.ctype.family != "A":
        return None
    ranks = sorted((c.rank + 1 for c in dec.components), reverse=True)
    while len(ranks) < 2:
        ranks.append(1)
    return tuple(ranks)


def enumerate_reflections(system: CoxeterSystem, w: CoxeterElement, window: int,
                          axis: Optional[AxisData] = None,
                          dec: Optional[HorizontalDecomposition] = None):
    """Vertical reflections crossing the axis at p_{-window}..p_{window} plus
    the horizontal reflections whose mirror holds an axial vertex."""
    if axis is None:
        axis = axis_data(system, w, window)
    if dec is None:
        dec = horizontal_decomposition(system, w)
    simple_keys = {s.iso.key() for s in system.simple}
    records = []
    for i in sorted(axis.crossings):
        c = axis.crossings[i]
        # the window proper, widened by any simple reflection that crosses
        # the axis outside it (the simples generate, so they always belong)
        if not (-window <= i <= window or c.iso.key() in simple_keys):
            continue
        records.append(ReflectionRecord(
            name=f"v{i}", iso=c.iso, root=c.root, offset=c.offset,
            kind="vertical", index=i, theta=c.theta, component=None, in_R0=True))
    # horizontal mirrors through an axial vertex, closed under conjugation by w
    hor = {}
    vset = axis.vertex_set()
    for comp in dec.components:
        for al in comp.roots_pos:
            d = system.mirror_offset_scale(al)
            for v in vset:
                c = dot(al, v)
                if (c / d) % 1 == 0:
                    hor[(al, c)] = comp.index
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        if guard > 200:
            raise AssertionError("horizontal mirror set does not close under w")
        for (al, c), ci in list(hor.items()):
            for iso in (w.iso, w.iso.inverse()):
                mapped = _mirror_image(system, iso, al, c)
                if mapped not in hor:
                    hor[mapped] = dec.component_of_root(mapped[0])
                    changed = True
    items = sorted(hor.items(), key=lambda t: (t[1], t[0][0], t[0][1]))
    for j, ((al, c), ci) in enumerate(items):
        fixes_axial = any(dot(al, v) == c for v in vset)
        records.append(ReflectionRecord(
            name=f"h{j}", iso=system.refl(al, c), root=al, offset=c,
            kind="horizontal", index=None, theta=None, component=ci,
            in_R0=fixes_axial))
    return records


def _mirror_image(system: CoxeterSystem, iso: Isometry, al, c):
    """Canonical (root, offset) of the image of {<al,x>=c} under `iso`."""
    a2 = iso.apply_vector(al)
    c2 = c + dot(a2, iso.b)
    return system.mirror_canon(a2, c2)


# ---------------------------------------------------------------------------
# symmetric group oracle (finite type A marked groups)
# ---------------------------------------------------------------------------

class SymmetricGroupOracle:
    """S_n with all transpositions (dual) or adjacent ones (standard);
    lengths come from breadth-first search over the Cayley graph, with no
    cycle-counting formula assumed."""

    def __init__(self, n: int, structure: str = "dual"):
        if n < 2:
            raise ValueError("need n >= 2")
        if structure not in ("dual", "standard"):
            raise ValueError("structure must be 'dual' or 'standard'")
        self.n = n
        self.structure = structure
        self.identity = tuple(range(n))
        gens = []
        if structure == "dual":
            for i in range(n):
                for j in range(i + 1, n):
                    gens.append(((i, j), self._transposition(i, j)))
        else:
            for i in range(n - 1):
                gens.append(((i, i + 1), self._transposition(i, i + 1)))
        self.generators = [(g, 1, f"t{i+1}{j+1}") for (i, j), g in gens]
        if structure == "dual":
            self.top = tuple((i + 1) % n for i in range(n))
        else:
            self.top = tuple(n - 1 - i for i in range(n))
        self._lengths = self._bfs()

    def _transposition(self, i, j):
        p = list(range(self.n))
        p[i], p[j] = p[j], p[i]
        return tuple(p)

    def mul(self, u, v):
        return tuple(u[v[i]] for i in range(self.n))

    def inv(self, u):
        p = [0] * self.n
        for i, x in enumerate(u):
            p[x] = i
        return tuple(p)

    def _bfs(self):
        from collections import deque
        dist = {self.identity: 0}
        dq = deque([self.identity])
        while dq:
            u = dq.popleft()
            for g, _, _ in self.generators:
                v = self.mul(u, g)
                if v not in dist:
                    dist[v] = dist[u] + 1
                    dq.append(v)
        return dist

    def length(self, u) -> int:
        return self._lengths[u]

    # marked-group protocol used by the interval enumerator
    @property
    def weight_scale(self):
        return 1

    def top_weight(self):
        return self.length(self.top)

    def lower_bound(self, u):
        return self.length(u)

    def sort_key(self, u):
        return u

    def label_of(self, g):
        for gg, _, nm in self.generators:
            if gg == g:
                return nm
        return str(g)


def symmetric_group_oracle(n: int, structure: str = "dual") -> SymmetricGroupOracle:
    return SymmetricGroupOracle(n, structure)
