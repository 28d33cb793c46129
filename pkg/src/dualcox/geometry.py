"""Exact rational affine geometry: subspaces, Euclidean isometries, invariants.

Every coordinate is a `fractions.Fraction`, so incidence questions (point on
hyperplane, subspace containment, fixed spaces) are decided exactly.  An
isometry is stored as an orthogonal matrix plus translation vector acting as
``x -> A x + b``; groups realized inside a proper subspace of the ambient
space (e.g. a sum-zero hyperplane) carry that subspace along so that
codimensions and orthogonal complements are taken where the group really
acts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Q = Fraction


# ---------------------------------------------------------------------------
# vectors and matrices as tuples of Fractions
# ---------------------------------------------------------------------------

def qvec(xs) -> tuple:
    return tuple(Q(x) for x in xs)


def zero_vec(n: int) -> tuple:
    return (Q(0),) * n


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vneg(u):
    return tuple(-a for a in u)


def vscale(c, u):
    c = Q(c)
    return tuple(c * a for a in u)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Q(0))


def norm2(u):
    return dot(u, u)


def is_zero_vec(u) -> bool:
    return all(a == 0 for a in u)


def mat_id(n: int) -> tuple:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def mat_vec(a, x):
    return tuple(dot(row, x) for row in a)


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(a):
    return tuple(zip(*a))


def is_orthogonal(a) -> bool:
    n = len(a)
    return mat_mul(transpose(a), a) == mat_id(n)


def primitive(v):
    """Scale a rational vector to integer entries with content 1 and a
    positive leading nonzero entry.  Canonical representative of a line."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(Q(0) for _ in v)
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(Q(x) for x in ints)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot_columns); zero rows
    dropped.  The output is the canonical basis of the row space."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def row_space(rows):
    """Canonical (rref) basis of the span of the given vectors."""
    return tuple(rref(rows)[0])


def solve(a_rows, rhs):
    """One exact solution of A x = rhs, or None if inconsistent."""
    if not a_rows:
        return None
    ncols = len(a_rows[0])
    aug = [list(r) + [b] for r, b in zip(a_rows, rhs)]
    red, pivots = rref(aug)
    x = [Q(0)] * ncols
    for row, p in zip(red, pivots):
        if p == ncols:      # pivot in augmented column: inconsistent
            return None
        x[p] = row[ncols]
    return tuple(x)


def nullspace(a_rows, ncols: int):
    """Canonical basis of {x : A x = 0}."""
    red, pivots = rref(a_rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return tuple(row_space(basis)) if basis else ()


def in_span(basis, v) -> bool:
    """Is v in the row space of `basis` (basis assumed in rref form)?"""
    w = list(v)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x == 1)
        if w[p] != 0:
            f = w[p]
            w = [a - f * b for a, b in zip(w, row)]
    return all(x == 0 for x in w)


def coords_in(basis, v):
    """Coordinates of v in the given (independent) basis, or None."""
    if not basis:
        return () if is_zero_vec(v) else None
    cols = list(zip(*basis))
    sol = solve(cols, v)
    return sol


# ---------------------------------------------------------------------------
# affine subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace in canonical form: `basis` is the rref basis of the
    direction, `point` has zero entries in all pivot coordinates of the
    basis (so equal subspaces compare equal structurally).  The empty
    subspace has point None."""

    point: Optional[tuple]
    basis: tuple
    ambient: int

    @staticmethod
    def empty(ambient: int) -> "AffineSubspace":
        return AffineSubspace(None, (), ambient)

    @staticmethod
    def make(point, directions, ambient: int) -> "AffineSubspace":
        basis = row_space(directions) if directions else ()
        p = list(point)
        for row in basis:
            piv = next(i for i, x in enumerate(row) if x == 1)
            f = p[piv]
            if f != 0:
                p = [a - f * b for a, b in zip(p, row)]
        return AffineSubspace(tuple(p), basis, ambient)

    @staticmethod
    def full(ambient: int) -> "AffineSubspace":
        return AffineSubspace.make(zero_vec(ambient), list(mat_id(ambient)), ambient)

    @property
    def is_empty(self) -> bool:
        return self.point is None

    @property
    def dim(self) -> int:
        return -1 if self.is_empty else len(self.basis)

    def contains_point(self, x) -> bool:
        if self.is_empty:
            return False
        return in_span(self.basis, vsub(x, self.point))

    def direction_contains(self, v) -> bool:
        return not self.is_empty and in_span(self.basis, v)

    def contains(self, other: "AffineSubspace") -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        if not self.contains_point(other.point):
            return False
        return all(in_span(self.basis, b) for b in other.basis)

    def translate(self, v) -> "AffineSubspace":
        if self.is_empty:
            return self
        return AffineSubspace.make(vadd(self.point, v), self.basis, self.ambient)

    def equations(self):
        """Pairs (normal, const) cutting out the subspace: <n,x> = c."""
        if self.is_empty:
            raise ValueError("empty subspace has no equation form")
        normals = nullspace(self.basis, self.ambient) if self.basis else mat_id(self.ambient)
        return [(n, dot(n, self.point)) for n in normals]

    def intersect(self, other: "AffineSubspace") -> "AffineSubspace":
        if self.is_empty or other.is_empty:
            return AffineSubspace.empty(self.ambient)
        eqs = self.equations() + other.equations()
        return affine_from_equations(eqs, self.ambient)

    def linear_span_of_points(self):
        """Canonical basis of span{x : x in the subspace} (points as vectors)."""
        if self.is_empty:
            return ()
        return row_space(list(self.basis) + [self.point])

    def project_point(self, x):
        """Orthogonal projection of x onto the subspace (exact)."""
        if self.is_empty:
            raise ValueError("cannot project onto the empty subspace")
        if not self.basis:
            return self.point
        d = vsub(x, self.point)
        gram = tuple(tuple(dot(bi, bj) for bj in self.basis) for bi in self.basis)
        rhs = tuple(dot(bi, d) for bi in self.basis)
        t = solve(gram, rhs)
        p = self.point
        for c, b in zip(t, self.basis):
            p = vadd(p, vscale(c, b))
        return p


def affine_from_equations(eqs, ambient: int) -> AffineSubspace:
    """Solution set of <n_i, x> = c_i."""
    if not eqs:
        return AffineSubspace.full(ambient)
    a = [e[0] for e in eqs]
    rhs = [e[1] for e in eqs]
    pt = solve(a, rhs)
    if pt is None:
        return AffineSubspace.empty(ambient)
    return AffineSubspace.make(pt, nullspace(a, ambient), ambient)


def orth_complement_within(vectors, within_basis, ambient: int):
    """Canonical basis of {x in span(within) : x _|_ all given vectors}."""
    if not within_basis:
        return ()
    rows = [tuple(dot(v, wb) for wb in within_basis) for v in vectors]
    if not rows:
        coords = mat_id(len(within_basis))
    else:
        coords = nullspace(rows, len(within_basis))
    out = []
    for c in coords:
        v = zero_vec(ambient)
        for ci, wb in zip(c, within_basis):
            v = vadd(v, vscale(ci, wb))
        out.append(v)
    return row_space(out)


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------

class Isometry:
    """Affine Euclidean isometry x -> A x + b with A exactly orthogonal.

    `ess` is an optional basis of the essential linear subspace the group
    acts on (None means the full ambient space); fixed spaces, displacement
    sets and codimensions are all taken inside it.
    """

    __slots__ = ("a", "b", "ess", "_inv", "_hash", "_order_key")

    def __init__(self, a, b, ess=None):
        self.a = tuple(tuple(Q(x) for x in row) for row in a)
        self.b = tuple(Q(x) for x in b)
        self.ess = ess
        self._inv = None
        self._hash = hash((self.a, self.b))
        self._order_key = None

    # -- identity / comparison on (A, b) only: `ess` is shared group data --
    def __eq__(self, other):
        return isinstance(other, Isometry) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return self._hash

    def key(self):
        return (self.a, self.b)

    def sort_key(self):
        if self._order_key is None:
            self._order_key = tuple(x for row in self.a for x in row) + self.b
        return self._order_key

    def __repr__(self):
        rows = ["[" + " ".join(str(x) for x in row) + "]" for row in self.a]
        return "Isometry(A={}, b=[{}])".format("".join(rows), " ".join(str(x) for x in self.b))

    @property
    def ambient(self) -> int:
        return len(self.b)

    @property
    def ess_basis(self):
        if self.ess is not None:
            return self.ess
        return mat_id(self.ambient)

    @property
    def ess_dim(self) -> int:
        return len(self.ess_basis)

    @staticmethod
    def identity(n: int, ess=None) -> "Isometry":
        return Isometry(mat_id(n), zero_vec(n), ess)

    @staticmethod
    def translation(v, ess=None) -> "Isometry":
        return Isometry(mat_id(len(v)), v, ess)

    def __call__(self, x):
        return vadd(mat_vec(self.a, x), self.b)

    def apply_vector(self, v):
        return mat_vec(self.a, v)

    def compose(self, other: "Isometry") -> "Isometry":
        """Group product self*other, acting as x -> self(other(x))."""
        ess = self.ess if self.ess is not None else other.ess
        return Isometry(mat_mul(self.a, other.a), vadd(mat_vec(self.a, other.b), self.b), ess)

    def inverse(self) -> "Isometry":
        at = transpose(self.a)
        return Isometry(at, vneg(mat_vec(at, self.b)), self.ess)

    def is_identity(self) -> bool:
        return self.b == zero_vec(self.ambient) and self.a == mat_id(self.ambient)

    def is_translation(self) -> bool:
        return self.a == mat_id(self.ambient)

    # -- invariants --------------------------------------------------------

    def invariants(self) -> "IsometryInvariants":
        if self._inv is None:
            self._inv = _compute_invariants(self)
        return self._inv

    @property
    def is_elliptic(self) -> bool:
        return not self.invariants().hyperbolic

    @property
    def is_hyperbolic(self) -> bool:
        return self.invariants().hyperbolic


@dataclass(frozen=True)
class IsometryInvariants:
    """Fixed space, displacement set, minimal displacement and min set."""

    hyperbolic: bool
    fix: AffineSubspace      # empty iff hyperbolic
    dep: AffineSubspace      # b + Im(A - I); the set of displacements u(x)-x
    mu: tuple                # unique minimal-norm displacement
    min_set: AffineSubspace  # {x : u(x) = x + mu}, inside the essential space


def _ess_subspace(u: Isometry) -> AffineSubspace:
    return AffineSubspace.make(zero_vec(u.ambient), list(u.ess_basis), u.ambient)


def _compute_invariants(u: Isometry) -> IsometryInvariants:
    n = u.ambient
    am_i = tuple(tuple(u.a[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n))
    cols = row_space(list(transpose(am_i)))
    dep = AffineSubspace.make(u.b, cols, n)
    ess = _ess_subspace(u)
    if u.ess is not None:
        for c in cols:
            if not ess.direction_contains(c):
                raise ValueError("isometry does not preserve its essential subspace")
        if not ess.direction_contains(u.b):
            raise ValueError("translation part leaves the essential subspace")
    mu = dep.project_point(zero_vec(n))
    pt = solve(am_i, vneg(u.b))
    if pt is not None:
        fix = AffineSubspace.make(pt, nullspace(am_i, n), n)
        if u.ess is not None:
            fix = fix.intersect(ess)
        if not is_zero_vec(mu):
            raise ValueError("elliptic isometry with nonzero minimal displacement")
        return IsometryInvariants(False, fix, dep, mu, fix)
    pt2 = solve(am_i, vsub(mu, u.b))
    min_set = AffineSubspace.make(pt2, nullspace(am_i, n), n)
    if u.ess is not None:
        min_set = min_set.intersect(ess)
    return IsometryInvariants(True, AffineSubspace.empty(n), dep, mu, min_set)


def reflection_length(u: Isometry) -> int:
    """Minimal number of orthogonal reflections multiplying to u: elliptic
    isometries have length codim Fix, hyperbolic ones dim Dep + 2."""
    inv = u.invariants()
    if inv.hyperbolic:
        return inv.dep.dim + 2
    return u.ess_dim - inv.fix.dim


def leq_L(u: Isometry, v: Isometry) -> bool:
    """Absolute order on the full isometry group: u divides v when lengths
    add up along 1 -> u -> v."""
    return reflection_length(u) + reflection_length(u.inverse().compose(v)) == reflection_length(v)


# ---------------------------------------------------------------------------
# the subspace model of the absolute order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelElement:
    """Invariant of an isometry: its fixed space (elliptic) or its
    displacement set (hyperbolic)."""

    hyperbolic: bool
    sub: AffineSubspace


def to_model(u: Isometry) -> ModelElement:
    inv = u.invariants()
    return ModelElement(inv.hyperbolic, inv.dep if inv.hyperbolic else inv.fix)


def model_leq(p: ModelElement, q: ModelElement, ess_basis=None, ambient=None) -> bool:
    """Order on invariants: reverse containment of fixed spaces on the
    elliptic side, containment of displacement sets on the hyperbolic side,
    and elliptic-below-hyperbolic when the orthogonal complement of the
    displacement span lies in the fixed directions."""
    if not p.hyperbolic and not q.hyperbolic:
        return p.sub.contains(q.sub)
    if p.hyperbolic and q.hyperbolic:
        return q.sub.contains(p.sub)
    if p.hyperbolic:
        return False
    amb = ambient if ambient is not None else p.sub.ambient
    if ess_basis is None:
        ess_basis = mat_id(amb)
    perp = orth_complement_within(q.sub.linear_span_of_points(), ess_basis, amb)
    return all(p.sub.direction_contains(v) for v in perp)


def reflection_through(alpha, c, ess=None) -> Isometry:
    """Orthogonal reflection in the hyperplane <alpha, x> = c."""
    alpha = qvec(alpha)
    if is_zero_vec(alpha):
        raise ValueError("reflection normal must be nonzero")
    n = len(alpha)
    a2 = norm2(alpha)
    a = tuple(
        tuple((1 if i == j else 0) - 2 * alpha[i] * alpha[j] / a2 for j in range(n))
        for i in range(n)
    )
    b = vscale(2 * Q(c) / a2, alpha)
    return Isometry(a, b, ess)


# ---------------------------------------------------------------------------
# integer lattices (for mirror offset patterns)
# ---------------------------------------------------------------------------

class ZLattice:
    """Z-span of finitely many rational vectors, with exact membership."""

    def __init__(self, generators, ambient: int):
        self.ambient = ambient
        den = 1
        for g in generators:
            for x in g:
                den = den * x.denominator // gcd(den, x.denominator)
        self.den = den
        rows = [[int(x * den) for x in g] for g in generators]
        self.basis = _hnf(rows)

    def contains(self, v) -> bool:
        w = [Q(x) * self.den for x in v]
        if any(x.denominator != 1 for x in w):
            return False
        w = [int(x) for x in w]
        for row in self.basis:
            p = next((i for i, x in enumerate(row) if x != 0), None)
            if p is None:
                continue
            if w[p] % row[p] != 0:
                return False
            f = w[p] // row[p]
            w = [a - f * b for a, b in zip(w, row)]
        return all(x == 0 for x in w)

    def scale_of(self, v) -> Optional[Q]:
        """Least c > 0 with c*v in the lattice, or None."""
        v = qvec(v)
        sol = coords_in([qvec(b) for b in self.basis], vscale(self.den, v))
        if sol is None:
            return None
        d = 1
        for x in sol:
            d = d * x.denominator // gcd(d, x.denominator)
        return Q(d)


def _hnf(rows):
    """Row-style Hermite normal form of an integer matrix (zero rows gone)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    col = 0
    while m and col < ncols:
        if all(r[col] == 0 for r in m):
            col += 1
            continue
        # gcd-reduce this column until a single row carries it
        while sum(1 for r in m if r[col] != 0) > 1:
            live = sorted((r for r in m if r[col] != 0), key=lambda r: abs(r[col]))
            p = live[0]
            for r in live[1:]:
                f = r[col] // p[col]
                for i in range(ncols):
                    r[i] -= f * p[i]
            m = [r for r in m if any(r)]
        pivot = next(r for r in m if r[col] != 0)
        if pivot[col] < 0:
            for i in range(ncols):
                pivot[i] = -pivot[i]
        out.append(pivot)
        m = [r for r in m if r is not pivot and any(r)]
        col += 1
    return out
