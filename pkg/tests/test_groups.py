import math
import random

import pytest

from cohom1 import groups
from cohom1.groups import (
    DELTA_Q, GElem, IDENTITY, ONE, QI, QJ, QK, CircleGroup, DomainError, Quat,
    UnsupportedGroupError, FiniteSubgroup,
)

S = 1 / math.sqrt(2)


def _rand_quat(rng):
    v = [rng.gauss(0, 1) for _ in range(4)]
    n = math.sqrt(sum(x * x for x in v))
    return Quat(*(x / n for x in v))


def test_quaternion_units_and_products():
    assert QI * QJ == QK
    assert QJ * QK == QI
    assert QK * QI == QJ
    assert (QI * QI).dist(-ONE) == 0


def test_associative_and_conjugation_reverses_products():
    rng = random.Random(7)
    for _ in range(50):
        a, b, c = (_rand_quat(rng) for _ in range(3))
        assert ((a * b) * c).dist(a * (b * c)) < 1e-12
        assert (a * b).conj().dist(b.conj() * a.conj()) < 1e-12
        assert abs((a * b).norm2() - 1) < 1e-12


@pytest.mark.parametrize("axis,angle,want", [
    (QI, math.pi / 2, QI),
    (QJ, math.pi, -ONE),
    (QI, math.pi / 4, Quat(S, S, 0, 0)),
])
def test_quat_exp_exact_values(axis, angle, want):
    assert groups.quat_exp(axis, angle).snapped().dist(want) == 0


def test_quat_exp_rejects_non_imaginary_axis():
    with pytest.raises(DomainError):
        groups.quat_exp(Quat(1, 0, 0, 0), 1.0)
    with pytest.raises(DomainError):
        groups.quat_exp(Quat(0, 2, 0, 0), 1.0)


def test_membership_in_delta_q():
    assert groups.in_subgroup(GElem(QI, QI), DELTA_Q)
    assert not groups.in_subgroup(GElem(ONE, -ONE), DELTA_Q)
    e = Quat(S, S, 0, 0)
    assert not groups.in_subgroup(GElem(e, e), DELTA_Q)


def test_delta_q_is_a_group_of_order_8():
    DELTA_Q.check_group()
    assert len(DELTA_Q.elements) == 8


def test_generated_subgroup_closure():
    H = FiniteSubgroup.generated("pm-i", [GElem(-ONE, ONE), GElem(ONE, -ONE), GElem(QI, QI)])
    assert len(H.elements) == 8
    H.check_group()


def test_circle_validation():
    with pytest.raises(DomainError):
        CircleGroup(QI, 0, QI, 0)
    with pytest.raises(DomainError):
        CircleGroup(QI, 2, QI, 4)
    c = CircleGroup(QI, 1, QI, 2)
    assert c(2 * math.pi).dist(IDENTITY) < 1e-12


def test_circle_hits_rejects_non_axis_aligned_group():
    e = groups.quat_exp(Quat(0, 0.6, 0.8, 0), 2 * math.pi / 3)
    H = FiniteSubgroup.generated("Z3", [GElem(e, ONE)])
    with pytest.raises(UnsupportedGroupError):
        groups.circle_hits(CircleGroup(QI, 1, QI, 1), H)


def test_catalog_s7():
    d = groups.catalog("S7")
    assert d.H is DELTA_Q
    assert d.Kminus.identity_component.slopes == (-3, 1)
    assert d.Kminus.identity_component.axisL == QI
    assert d.Kplus.identity_component.slopes == (1, 1)
    assert d.Kplus.identity_component.axisL == QJ
    assert d.L == pytest.approx(math.pi / 6)


def test_catalog_w2():
    d = groups.catalog("W2")
    assert len(d.H.elements) == 8
    assert d.H.contains(GElem(QJ, QJ)) and d.H.contains(GElem(-ONE, ONE))
    assert d.Kminus.identity_component.slopes == (1, -2)
    assert d.Kplus.identity_component.slopes == (1, 1)
    assert d.Kplus.identity_component.axisL == QJ
    assert d.L == pytest.approx(math.pi / 4)


def test_catalog_labels():
    assert groups.catalog("Q_k", k=1).label == "W2"
    assert groups.catalog("W2alt").label == "W2"
    assert groups.catalog("P_k", k=1).label == "S7"
    assert groups.catalog("P_k", k=2).label is None


def test_subgroup_inclusion_is_checked():
    for name in ("S4", "CP2", "S7", "B7", "W1", "W2", "W2alt", "R"):
        d = groups.catalog(name)
        for h in d.H:
            assert d.Kminus.contains(h) and d.Kplus.contains(h)


def test_weyl_elements():
    wm, _ = groups.weyl_reps(groups.catalog("S4"))
    assert wm.dist(GElem(groups.quat_exp(QI, math.pi / 4), ONE)) < 1e-12
    for p in (1, 2, 3, 10):
        _, wp = groups.weyl_reps(groups.catalog("E_p", p=p))
        ip = [ONE, QI, -ONE, -QI]
        assert wp.dist(GElem(ip[(p + 1) % 4], ip[p % 4])) < 1e-12
    wm, _ = groups.weyl_reps(groups.catalog("S7"))
    e = groups.quat_exp(QI, math.pi / 4)
    assert wm.dist(GElem(-e, e)) < 1e-12


@pytest.mark.parametrize("name,order", [
    ("S4", 6), ("CP2", 4), ("S7", 12), ("B7", 6), ("W2", 8), ("W2alt", 8), ("W1", 4), ("R", 4),
])
def test_weyl_orders(name, order):
    assert groups.weyl_order(groups.catalog(name)) == order


@pytest.mark.parametrize("p", [1, 2, 3, 10])
def test_weyl_order_eschenburg(p):
    assert groups.weyl_order(groups.catalog("E_p", p=p)) == 4


def test_weyl_order_families():
    assert [groups.weyl_order(groups.catalog("P_k", k=k)) for k in (1, 2, 3, 4)] == [12, 6, 12, 6]
    assert groups.weyl_order(groups.catalog("Q_k", k=1)) == 8


def test_unknown_catalog_name():
    with pytest.raises(groups.GroupError):
        groups.catalog("nope")
    with pytest.raises(groups.GroupError):
        groups.catalog("E_p")
