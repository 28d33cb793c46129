"""Exact-geometry checks: invariants, reflection length, absolute order,
and the subspace model of that order."""

import random
from fractions import Fraction as Q

from dualcox.geometry import (
    AffineSubspace,
    Isometry,
    ZLattice,
    leq_L,
    model_leq,
    qvec,
    reflection_length,
    reflection_through,
    to_model,
)


def iso2(a_rows, b):
    return Isometry(a_rows, b)


def test_identity_invariants():
    u = Isometry.identity(2)
    inv = u.invariants()
    assert not inv.hyperbolic
    assert inv.fix == AffineSubspace.full(2)
    assert inv.mu == (0, 0)
    assert reflection_length(u) == 0


def test_translation_invariants():
    u = Isometry.translation(qvec([1, 0]))
    inv = u.invariants()
    assert inv.hyperbolic
    # displacement set is the single point (1,0)
    assert inv.dep.dim == 0 and inv.dep.contains_point(qvec([1, 0]))
    assert inv.mu == (1, 0)
    assert reflection_length(u) == 2


def test_glide_invariants():
    # reflection in {x1 = 0} followed by translation by (0,1):
    # u(x) = (-x1, x2+1); displacements are (-2x1, 1), i.e. the line x2 = 1,
    # so mu = (0,1) and the min set is the mirror itself.
    r = reflection_through(qvec([1, 0]), 0)
    u = Isometry.translation(qvec([0, 1])).compose(r)
    inv = u.invariants()
    assert inv.hyperbolic
    assert inv.dep.dim == 1
    assert inv.dep.contains_point(qvec([0, 1]))
    assert inv.dep.direction_contains(qvec([1, 0]))
    assert inv.mu == (0, 1)
    assert inv.min_set.contains_point(qvec([0, 5]))
    assert reflection_length(u) == 3


def test_rotation_length_two():
    # rotation by 90 degrees about (1,1): elliptic with a single fixed point
    a = ((Q(0), Q(-1)), (Q(1), Q(0)))
    c = qvec([1, 1])
    b = tuple(ci - x for ci, x in zip(c, (Q(-1), Q(1))))  # c - A c
    u = Isometry(a, b)
    inv = u.invariants()
    assert not inv.hyperbolic
    assert inv.fix.dim == 0 and inv.fix.contains_point(c)
    assert reflection_length(u) == 2


def test_reflection_through_basics():
    r = reflection_through(qvec([1, 0]), 0)
    assert r(qvec([3, 5])) == (Q(-3), Q(5))
    assert r.compose(r).is_identity()
    assert reflection_length(r) == 1


def test_leq_L_examples():
    t = Isometry.translation(qvec([2, 0]))
    r_perp = reflection_through(qvec([1, 0]), 0)    # mirror {x1=0}, normal || t
    r_para = reflection_through(qvec([0, 1]), 0)    # mirror {x2=0}, normal _|_ t
    assert leq_L(Isometry.identity(2), t)
    assert leq_L(r_perp, t)
    assert not leq_L(r_para, t)
    assert not leq_L(t, r_perp)


def test_length_of_inverse_sampled():
    rng = random.Random(7)
    pool = [
        reflection_through(qvec([1, 0]), 1),
        reflection_through(qvec([0, 1]), 2),
        reflection_through(qvec([1, -1]), 0),
        reflection_through(qvec([1, 1]), 3),
    ]
    for _ in range(25):
        u = Isometry.identity(2)
        for _ in range(rng.randrange(4)):
            u = u.compose(rng.choice(pool))
        assert reflection_length(u) == reflection_length(u.inverse())


def test_composition_is_action_composition():
    rng = random.Random(3)
    pool = [
        reflection_through(qvec([1, 0]), 1),
        reflection_through(qvec([2, 1]), 0),
        Isometry.translation(qvec([1, 2])),
    ]
    for _ in range(20):
        u, v = rng.choice(pool), rng.choice(pool)
        x = qvec([rng.randrange(-5, 5), Q(rng.randrange(-5, 5), 3)])
        assert u.compose(v)(x) == u(v(x))


def test_elliptic_fixes_fix_and_hyperbolic_displaces_min():
    r = reflection_through(qvec([1, 2]), 3)
    inv = r.invariants()
    assert all(r(vadd) == vadd for vadd in [inv.fix.point])
    g = Isometry.translation(qvec([2, -1])).compose(reflection_through(qvec([1, 2]), 0))
    ginv = g.invariants()
    a = ginv.min_set.point
    assert tuple(x - y for x, y in zip(g(a), a)) == ginv.mu


def test_model_identity_minimal():
    e = to_model(Isometry.identity(2))
    for other in [
        to_model(reflection_through(qvec([1, 0]), 0)),
        to_model(Isometry.translation(qvec([1, 1]))),
    ]:
        assert model_leq(e, other)
        assert not model_leq(other, e)


def test_model_elliptic_rules():
    # rotation about p = (0,0) vs reflection through a line containing p
    a = ((Q(0), Q(-1)), (Q(1), Q(0)))
    rot = Isometry(a, qvec([0, 0]))
    mirror_through = reflection_through(qvec([1, 0]), 0)
    mirror_missing = reflection_through(qvec([1, 0]), 5)
    assert model_leq(to_model(mirror_through), to_model(rot))
    assert not model_leq(to_model(mirror_missing), to_model(rot))
    assert leq_L(mirror_through, rot)
    assert not leq_L(mirror_missing, rot)


def test_model_matches_leq_on_samples():
    pool = [
        Isometry.identity(2),
        reflection_through(qvec([1, 0]), 0),
        reflection_through(qvec([0, 1]), 1),
        reflection_through(qvec([1, 1]), 0),
        Isometry.translation(qvec([2, 0])),
        Isometry.translation(qvec([0, 2])),
    ]
    pool.append(pool[1].compose(pool[2]))
    pool.append(pool[3].compose(pool[1]))
    for u in pool:
        for v in pool:
            assert leq_L(u, v) == model_leq(to_model(u), to_model(v))


def test_essential_subspace_codimension():
    # transposition (1 2) acting on the sum-zero plane of R^3 has length 1
    ess = (qvec([1, 0, -1]), qvec([0, 1, -1]))
    r = reflection_through(qvec([1, -1, 0]), 0, ess=ess)
    assert reflection_length(r) == 1
    assert r.ess_dim == 2


def test_lattice_membership_and_scale():
    lat = ZLattice([qvec([2, 0]), qvec([1, 1])], 2)
    assert lat.contains(qvec([3, 1]))
    assert not lat.contains(qvec([0, Q(1, 2)]))
    assert lat.scale_of(qvec([1, 0])) == 2
    assert lat.scale_of(qvec([1, 1])) == 1


def test_affine_subspace_canonical_equality():
    s1 = AffineSubspace.make(qvec([0, 1]), [qvec([1, 0])], 2)
    s2 = AffineSubspace.make(qvec([7, 1]), [qvec([2, 0])], 2)
    assert s1 == s2
    assert s1.contains(s2) and s2.contains(s1)
    s3 = AffineSubspace.make(qvec([0, 2]), [qvec([1, 0])], 2)
    assert s1 != s3 and not s1.contains(s3)
