import random

import pytest

from bgeom.descent import (blowup_nef_criterion, check_pushforward_nef, check_trivial_blowup,
                           contract_minus_one_curve, descend_nef)
from bgeom.divisors import pullback_along_tower
from bgeom.errors import NotMinusOneCurve, NotNef, PreconditionUnmet
from bgeom.lattice import BlowupCenter, build_model, hirzebruch, projective_plane, raw_base
from helpers import random_nef, random_tower


def blp():
    return build_model(projective_plane(), [BlowupCenter((("L", 1),), "E")])


def test_blowup_criterion_examples():
    p2 = build_model(projective_plane())
    assert blowup_nef_criterion(p2, p2.divisor([2]), BlowupCenter.at(L=1))
    conic = build_model(raw_base("P2+conic", [[1]], [-3], {"L": [1], "Q": [2]}))
    assert blowup_nef_criterion(conic, conic.divisor([1]), BlowupCenter.at(L=1, Q=1))
    m = blp()
    assert not blowup_nef_criterion(m, m.curve_class("L"), BlowupCenter.at(L=1))


def test_contract_exceptional():
    m = blp()
    bd = contract_minus_one_curve(m, "E")
    assert bd.structured and bd.target.rank == 1
    assert bd.target.canonical == (-3,)
    pushed = bd.push(m.divisor([1, 0]))
    assert pushed.square() == 1
    assert bd.pull(pushed) == m.divisor([1, 0])


def test_contract_top_of_chain():
    m = build_model(projective_plane(), [BlowupCenter.at(L=1), BlowupCenter.at(E1=1)])
    assert m.curve_class("E1").square() == -2
    bd = contract_minus_one_curve(m, "E2")
    assert bd.target.curve_class("E1").square() == -1
    with pytest.raises(NotMinusOneCurve):
        contract_minus_one_curve(m, "E1")


def test_contract_keeps_later_names():
    m = build_model(projective_plane(), [BlowupCenter.at(), BlowupCenter.at(L=1), BlowupCenter.at(E2=1)])
    bd = contract_minus_one_curve(m, "E1")
    assert bd.target.exceptional_names == ("E2", "E3")
    assert bd.target.curve_class("E2").square() == -2


def test_generic_blowdown_of_strict_line():
    m = build_model(projective_plane(), [BlowupCenter.at(L=1), BlowupCenter.at(L=1)])
    bd = contract_minus_one_curve(m, "L")
    assert not bd.structured
    t = bd.target
    assert t.rank == 2 and t.canonical_class().square() == 8
    assert t.signature()[:2] == (1, 1)
    rng = random.Random(0)
    for _ in range(30):
        d = m.divisor([rng.randint(-4, 4) for _ in range(3)])
        e = m.curve_class("L")
        assert bd.pull(bd.push(d)) == d + (d @ e) * e
        assert bd.push(d).square() == d.square() + (d @ e) ** 2


def test_descend_examples():
    m = blp()
    r = descend_nef(m, m.divisor([2, 0]))
    assert r.intermediate_model.rank == 1 and r.M_prime.coeffs == (2,)
    assert r.blowup_count == 0 and r.contractions_performed == ("E",)
    r = descend_nef(m, m.divisor([2, -1]))
    assert r.intermediate_model == m and r.blowup_count == 1 == r.bound
    two = build_model(projective_plane(), [BlowupCenter((("L", 1),), "Ep"), BlowupCenter((), "Eq")])
    r = descend_nef(two, two.divisor([2, -1, 0]))
    assert r.contractions_performed == ("Eq",) and r.blowup_count == 1 == r.bound
    with pytest.raises(NotNef):
        descend_nef(m, m.divisor([1, -2]))


def test_descend_volume_invariance():
    rng = random.Random(12)
    for _ in range(60):
        y = random_tower(rng, depth=rng.randint(1, 5))
        k = rng.randint(0, y.depth)
        m = pullback_along_tower(y.truncate(k), y, random_nef(rng, y.truncate(k)))
        r = descend_nef(y, m)
        assert r.M_prime.square() == m.square()
        assert pullback_along_tower(r.intermediate_model, y, r.M_prime) - m == y.zero()


def test_pushforward_nef_examples():
    m = blp()
    p2 = m.truncate(0)
    for d in (m.divisor([2, -1]), m.zero(), m.divisor([1, 0])):
        assert check_pushforward_nef(m, d, p2)
    with pytest.raises(NotNef):
        check_pushforward_nef(m, m.divisor([1, -2]), p2)


def test_trivial_blowups():
    f0 = hirzebruch(0)
    y = build_model(f0, [BlowupCenter.at(f=1), BlowupCenter.at(E1=1)])
    m = f0.divisor([0, 1])  # the other ruling: M.f = 0... class is f, and f.f = 0
    assert f0.intersect(m, f0.curve_class("f")) == 0
    lifted = pullback_along_tower(y.truncate(0), y, y.truncate(0).include(m))
    assert check_trivial_blowup(y, "f", m, lifted) == (True, None)
    bad = lifted - y.basis("E2")
    with pytest.raises(PreconditionUnmet):
        check_trivial_blowup(y, "f", m, bad)
    other = build_model(f0, [BlowupCenter.at(C0=1)])
    with pytest.raises(PreconditionUnmet):
        check_trivial_blowup(other, "f", m, other.include(m))
