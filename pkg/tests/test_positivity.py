import random
from fractions import Fraction

import pytest

from bgeom.errors import NotPseudoeffective
from bgeom.lattice import BlowupCenter, build_model, projective_plane
from bgeom.positivity import is_big, is_nef, is_nef_tracked, volume, zariski
from helpers import random_effective, toric_tower


def blp():
    return build_model(projective_plane(), [BlowupCenter((("L", 1),), "E")])


def test_nef_examples():
    m = blp()
    d = m.divisor([2, -1])
    assert is_nef_tracked(m, d) == (True, [])
    assert [d @ m.curve_class(c) for c in ("L", "E")] == [1, 1]
    ok, bad = is_nef_tracked(m, m.divisor([1, -2]))
    assert not ok and bad == [("L", Fraction(-1))]
    assert is_nef(m, m.zero())


def test_zariski_examples():
    m = blp()
    z = zariski(m, m.divisor([1, 1]))
    assert z.P == m.divisor([1, 0]) and z.N == m.divisor([0, 1])
    assert z.support == ("E",) and z.coefficients == {"E": 1}
    z.check()
    d = m.divisor([2, -1])
    assert zariski(m, d).P == d and zariski(m, d).N.is_zero()
    with pytest.raises(NotPseudoeffective):
        zariski(m, m.divisor([1, -2]))


def test_volume_examples():
    p2 = build_model(projective_plane())
    assert volume(p2, p2.divisor([1])) == 1
    m = blp()
    assert volume(m, m.divisor([1, 1])) == 1
    assert volume(m, m.divisor([1, -2])) == 0
    assert volume(p2, p2.canonical_class()) == 0


def test_is_big_examples():
    p2 = build_model(projective_plane())
    assert is_big(p2, p2.divisor([1]))
    assert not is_big(p2, p2.divisor([-1]))
    m = blp()
    assert not is_big(m, m.curve_class("L"))


def test_volume_properties_on_toric_towers():
    rng = random.Random(8)
    for _ in range(150):
        m = toric_tower(rng)
        d = random_effective(rng, m, hi=3)
        extra = random_effective(rng, m, hi=2)
        v = volume(m, d)
        assert volume(m, d + extra) >= v
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        assert volume(m, lam * d) == lam ** 2 * v
        z = zariski(m, d)
        z.check()
        assert v == max(Fraction(0), z.P.square())
