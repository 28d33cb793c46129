"""Interval enumeration, lattice diagnostics, rows and the noncrossing oracle."""

import pytest

from dualcox.coxeter import build_system, coxeter_element, symmetric_group_oracle
from dualcox.geometry import leq_L, model_leq, to_model
from dualcox.intervals import (
    EuclideanMarkedGroup,
    enumerate_interval,
    hyperbolic_horizontal_decompose,
    noncrossing_oracle_report,
    noncrossing_partitions,
    phi_equivariance_report,
    phi_shift,
)


def count_max_chains(p, i, j):
    memo = {}

    def rec(x):
        if x == j:
            return 1
        if x in memo:
            return memo[x]
        memo[x] = sum(rec(y) for y, _ in p.succ[x] if p.leq(y, j))
        return memo[x]

    return rec(i)


def euclid_poset(ts, m, order=None):
    sys = build_system(ts)
    w = coxeter_element(sys, order)
    g = EuclideanMarkedGroup(sys, w, m)
    return g, enumerate_interval(g)


def test_s3_chain_counts():
    pd = enumerate_interval(symmetric_group_oracle(3, "dual"))
    assert len(pd) == 5
    assert count_max_chains(pd, 0, pd.top_index) == 3
    ps = enumerate_interval(symmetric_group_oracle(3, "standard"))
    assert count_max_chains(ps, 0, ps.top_index) == 2
    assert ps.rank[ps.top_index] == 3


def test_noncrossing_counts_small():
    assert len(noncrossing_partitions(3)) == 5
    assert len(noncrossing_partitions(4)) == 14
    for n in (3, 4, 5):
        p = enumerate_interval(symmetric_group_oracle(n, "dual"))
        rep = noncrossing_oracle_report(n, p)
        assert rep["bijection"] and rep["order_agrees"] and rep["rank_agrees"]


def test_crossing_partition_excluded():
    parts = noncrossing_partitions(4)
    assert ((0, 2), (1, 3)) not in parts


def test_a2_census_stabilizes():
    prev_mid = 0
    for m in (2, 3, 4, 5):
        g, p = euclid_poset("A~2", m)
        c = p.row_census()
        assert c["bottom"] == 3 and c["top"] == 3
        assert c["middle"] > prev_mid
        prev_mid = c["middle"]


def test_every_simple_is_an_edge_label_at_window_one():
    for ts in ("A~2", "C~2", "B~3", "G~2"):
        g, p = euclid_poset(ts, 1)
        labels = {nm for _, _, nm in p.covers}
        simple_names = set()
        for s in g.system.simple:
            rec = g.record_by_key.get(s.iso.key())
            assert rec is not None, (ts, s.name)
            simple_names.add(rec.name)
        assert simple_names <= labels


def test_balance_on_certified_elements():
    for ts in ("A~2", "C~2"):
        g, p = euclid_poset(ts, 3)
        rep = p.balance_report()
        assert rep["violations"] == []
        assert rep["ok"] > 0


def test_window_monotonicity():
    g3, p3 = euclid_poset("A~2", 3)
    g4, p4 = euclid_poset("A~2", 4)
    for u in p3.elements:
        assert p4.key_index(u) is not None
    covers3 = {(p3.elements[a].key(), p3.elements[b].key(), nm)
               for a, b, nm in p3.covers}
    covers4 = {(p4.elements[a].key(), p4.elements[b].key(), nm)
               for a, b, nm in p4.covers}
    assert covers3 <= covers4


def test_phi_equivariance():
    # conjugation by w shifts crossing indices by the axis period, so the
    # receiving window is grown by that much
    g3, p3 = euclid_poset("A~2", 3)
    g6, p6 = euclid_poset("A~2", 3 + g3.axis.period)
    rep = phi_equivariance_report(p3, p6)
    assert rep["missing"] == 0 and rep["rank_mismatch"] == 0
    assert rep["cover_missing"] == 0 and rep["row_mismatch"] == 0


def test_phi_index_shift_constant():
    g, p = euclid_poset("A~2", 4)
    shifts = set()
    for r in g.records:
        if r.kind != "vertical" or abs(r.index) > 1:
            continue
        img = phi_shift(g, r.iso)
        rec = next((r2 for r2 in g.records if r2.iso == img), None)
        if rec is not None:
            shifts.add(r.index - rec.index)
    assert shifts == {3}


def test_model_order_isomorphism_on_interval():
    g, p = euclid_poset("A~2", 3)
    sys = g.system
    models = [to_model(u) for u in p.elements]
    assert len({(m.hyperbolic, m.sub) for m in models}) == len(models)
    for i, u in enumerate(p.elements):
        for j, v in enumerate(p.elements):
            lhs = leq_L(u, v)
            rhs = model_leq(models[i], models[j], ess_basis=sys.ess,
                            ambient=sys.ambient)
            assert lhs == rhs
            if p.leq(i, j):
                assert lhs


def test_interval_order_within_L_order():
    g, p = euclid_poset("C~2", 3)
    for i, u in enumerate(p.elements):
        for j, v in enumerate(p.elements):
            if p.leq(i, j):
                assert leq_L(u, v)


def test_bowtie_negative_for_lattice_types():
    for ts in ("A~2", "C~2", "G~2"):
        g, p = euclid_poset(ts, 4)
        assert p.bowtie_search() is None, ts


def test_bowtie_positive_for_b3():
    g, p = euclid_poset("B~3", 4)
    bt = p.bowtie_search()
    assert bt is not None and bt["kind"] == "join"
    a, b = bt["pair"]
    assert p.rank[a] == p.rank[b] == 1
    z1, z2 = bt["bounds"]
    assert p.rank[z1] == p.rank[z2] == 3


def test_bowtie_positive_for_alternating_a3():
    g, p = euclid_poset("A~3", 3, order=("s1", "s3", "s2", "s0"))
    assert p.bowtie_search() is not None
    g2, p2 = euclid_poset("A~3", 3)
    assert p2.bowtie_search() is None       # the natural order is a lattice


def test_meet_join_reports():
    g, p = euclid_poset("A~2", 3)
    atoms = [i for i in range(len(p)) if p.rank[i] == 1]
    kind, val = p.meet(atoms[0], atoms[1])
    assert kind == "meet" and val == 0
    kind, val = p.join(0, p.top_index)
    assert kind == "join" and val == p.top_index


def test_hyperbolic_horizontal_decomposition():
    for ts in ("A~2", "C~2"):
        g, p = euclid_poset(ts, 3)
        for i, u in enumerate(p.elements):
            if not u.is_hyperbolic:
                continue
            j, hi = hyperbolic_horizontal_decompose(p, i)
            assert p.elements[j].is_hyperbolic
            h = p.elements[hi]
            assert not h.is_hyperbolic and g.is_horizontal(h)
            if i == p.top_index:
                assert j == p.top_index and p.rank[hi] == 0


def test_translations_stabilize_b3():
    counts = []
    for m in (8, 9, 10):
        g, p = euclid_poset("B~3", m)
        counts.append(sum(1 for u in p.elements
                          if u.is_translation() and not u.is_identity()))
    assert counts == [4, 4, 4]
