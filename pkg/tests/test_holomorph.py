import numpy as np
import pytest

from braceforge import autgroup
from braceforge.abelian import GroupSpec
from braceforge.errors import ShapeError
from braceforge.holomorph import (
    Hol,
    Subgroup,
    aut_conjugator_rows,
    conjugate_subgroup,
    sylow_p_hol_generators,
    translations_subgroup,
)
from braceforge.subgroups import closure, is_regular


@pytest.fixture
def hol4():
    return Hol(GroupSpec((4,)))


def test_mul_examples(hol4):
    x = hol4.element([1], [[3]])
    y = hol4.element([2], [[1]])
    assert np.array_equal(hol4.mul(x, y), hol4.element([3], [[3]]))
    assert np.array_equal(hol4.mul(hol4.identity, x), x)
    h22 = Hol(GroupSpec((2, 2)))
    swap = [[0, 1], [1, 0]]
    a = h22.element([1, 0], swap)
    b = h22.element([0, 1], swap)
    assert np.array_equal(h22.mul(a, b), h22.element([0, 0], np.eye(2, dtype=int)))


def test_inv_examples(hol4):
    x = hol4.element([2], [[3]])
    assert np.array_equal(hol4.inv(x), x)
    assert np.array_equal(hol4.mul(x, hol4.inv(x)), hol4.identity)
    assert np.array_equal(hol4.inv(hol4.identity), hol4.identity)
    assert np.array_equal(hol4.inv(hol4.translation([1])), hol4.translation([3]))


def test_act_examples(hol4):
    x = hol4.element([1], [[3]])
    assert hol4.act(x, [2]).tolist() == [3]
    assert hol4.act(hol4.identity, [2]).tolist() == [2]
    # acting on 0 recovers the translation part
    for g in range(4):
        y = hol4.element([g], [[3]])
        assert hol4.act(y, [0]).tolist() == [g]


def test_projection_not_a_homomorphism(hol4):
    x = hol4.element([0], [[3]])
    y = hol4.element([1], [[1]])
    xy = hol4.mul(x, y)
    assert hol4.projection(xy).tolist() == [3]
    assert (hol4.projection(x) + hol4.projection(y)).tolist() == [1]


def test_mul_assoc_and_inverse_exhaustive(hol4):
    S = closure(hol4, sylow_p_hol_generators(hol4, 2))
    assert S.order == 8
    elems = S.elements
    for x in elems:
        for y in elems:
            for z in elems:
                assert np.array_equal(
                    hol4.mul(hol4.mul(x, y), z), hol4.mul(x, hol4.mul(y, z))
                )
    for x in elems:
        assert np.array_equal(hol4.mul(x, hol4.inv(x)), hol4.identity)
        assert np.array_equal(hol4.mul(hol4.inv(x), x), hol4.identity)


def test_action_axioms_and_faithfulness():
    for factors in [(4,), (2, 2)]:
        hol = Hol(GroupSpec(factors))
        S = closure(hol, sylow_p_hol_generators(hol, 2))
        pts = [np.array(c) for c in np.ndindex(*factors)]
        maps = set()
        for x in S.elements:
            img = tuple(tuple(hol.act(x, h)) for h in pts)
            maps.add(img)
            for y in S.elements:
                for h in pts:
                    lhs = hol.act(hol.mul(x, y), h)
                    rhs = hol.act(x, hol.act(y, h))
                    assert np.array_equal(lhs, rhs)
        assert len(maps) == S.order  # distinct elements act differently


def test_translations_subgroup():
    hol = Hol(GroupSpec((4,)))
    T = translations_subgroup(hol)
    assert T.order == 4
    assert is_regular(T)
    hol3 = Hol(GroupSpec((4, 4, 4)))
    assert translations_subgroup(hol3).order == 64
    # T is normal: conjugation by anything returns T
    x = hol.element([1], [[3]])
    assert conjugate_subgroup(x, T) == T


def test_sylow_hol_orders():
    hol = Hol(GroupSpec((4,)))
    assert closure(hol, sylow_p_hol_generators(hol, 2)).order == 8
    hol222 = Hol(GroupSpec((2, 2, 2)))
    assert closure(hol222, sylow_p_hol_generators(hol222, 2)).order == 64
    # |T x| SylAut| = |G| * p-part(|Aut|) without building the closure
    s444 = GroupSpec((4, 4, 4))
    sylow_aut = autgroup.matrix_closure(s444, autgroup.sylow_p_aut_generators(s444, 2))
    assert s444.order * len(sylow_aut) == 1 << 18


def test_conjugate_subgroup_examples(hol4):
    H = closure(hol4, [hol4.element([1], [[3]])])
    assert H.order == 2
    x = hol4.translation([1])
    K = conjugate_subgroup(x, H)
    assert K.order == 2
    assert conjugate_subgroup(hol4.identity, H) == H
    # a regular subgroup stays regular under conjugation
    klein = closure(hol4, [hol4.element([1], [[3]]), hol4.translation([2])])
    assert is_regular(klein)
    assert is_regular(conjugate_subgroup(x, klein))


def test_hol_conjugation_reduces_to_aut(hol4):
    """Any conjugate of a regular subgroup equals some Aut-conjugate."""
    klein = closure(hol4, [hol4.element([1], [[3]]), hol4.translation([2])])
    auts = autgroup.matrix_closure(hol4.spec, autgroup.aut_generators(hol4.spec))
    S = closure(hol4, sylow_p_hol_generators(hol4, 2))
    for x in S.elements:
        conj = conjugate_subgroup(x, klein)
        assert any(
            conj == conjugate_subgroup(hol4.from_aut(beta), klein) for beta in auts
        )


def test_element_text_roundtrip():
    hol = Hol(GroupSpec((4, 4, 4)))
    x = hol.element([1, 2, 3], np.eye(3, dtype=int))
    text = hol.element_text(x)
    assert text == "1,2,3 | 1,0,0;0,1,0;0,0,1"
    assert np.array_equal(hol.parse_element(text), x)


def test_subgroup_canonical_encoding(hol4):
    rows = np.array([hol4.element([1], [[3]]), hol4.identity])
    sub = Subgroup(hol4, rows)
    sub2 = Subgroup(hol4, rows[::-1])
    assert sub == sub2 and sub.key == sub2.key
    with pytest.raises(ShapeError):
        Subgroup(hol4, np.zeros((2, 3), dtype=np.int64))


def test_spec_mismatch_raises(hol4):
    h22 = Hol(GroupSpec((2, 2)))
    with pytest.raises(ShapeError):
        hol4.mul(hol4.identity, h22.identity)


def test_aut_conjugator_rows(hol4):
    rows = aut_conjugator_rows(hol4)
    assert all(np.all(hol4.g_part(r) == 0) for r in rows)
