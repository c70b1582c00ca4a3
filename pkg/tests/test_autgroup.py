import numpy as np
import pytest

from braceforge import abelian, autgroup
from braceforge.abelian import GroupSpec
from braceforge.errors import ValidityError


def test_apply_examples():
    assert autgroup.apply(GroupSpec((4,)), [[3]], [2]).tolist() == [2]
    assert autgroup.apply(GroupSpec((4, 4)), np.eye(2, dtype=int), [1, 2]).tolist() == [1, 2]
    swap = [[0, 1], [1, 0]]
    assert autgroup.apply(GroupSpec((2, 2)), swap, [1, 0]).tolist() == [0, 1]


def test_compose_examples():
    s4 = GroupSpec((4,))
    assert autgroup.compose(s4, [[3]], [[3]]).tolist() == [[1]]
    swap = [[0, 1], [1, 0]]
    s22 = GroupSpec((2, 2))
    assert autgroup.compose(s22, swap, swap).tolist() == [[1, 0], [0, 1]]
    m = [[1, 1], [0, 1]]
    s44 = GroupSpec((4, 4))
    assert autgroup.compose(s44, np.eye(2, dtype=int), m).tolist() == [[1, 1], [0, 1]]


def test_invert_examples():
    s4 = GroupSpec((4,))
    assert autgroup.invert(s4, [[3]]).tolist() == [[3]]
    assert autgroup.invert(s4, [[1]]).tolist() == [[1]]
    s44 = GroupSpec((4, 4))
    assert autgroup.invert(s44, [[1, 1], [0, 1]]).tolist() == [[1, 3], [0, 1]]
    with pytest.raises(ValidityError):
        autgroup.invert(s4, [[2]])


def test_is_automorphism_examples():
    assert not autgroup.is_automorphism(GroupSpec((4,)), [[2]])
    assert autgroup.is_automorphism(GroupSpec((4,)), [[3]])
    # well-definedness on C2 x C4 requires the (2,1) entry to be even
    assert not autgroup.is_automorphism(GroupSpec((2, 4)), [[1, 0], [1, 1]])
    assert autgroup.is_automorphism(GroupSpec((2, 4)), [[1, 0], [2, 1]])


def test_aut_group_orders():
    assert autgroup.aut_order(GroupSpec((4,))) == 2
    assert autgroup.aut_order(GroupSpec((2, 2, 2))) == 168
    assert autgroup.aut_order(GroupSpec((4, 4))) == 96


def test_sylow_orders():
    s4 = GroupSpec((4,))
    assert len(autgroup.matrix_closure(s4, autgroup.sylow_p_aut_generators(s4, 2))) == 2
    s222 = GroupSpec((2, 2, 2))
    assert len(autgroup.matrix_closure(s222, autgroup.sylow_p_aut_generators(s222, 2))) == 8
    s444 = GroupSpec((4, 4, 4))
    assert len(autgroup.matrix_closure(s444, autgroup.sylow_p_aut_generators(s444, 2))) == 4096


@pytest.mark.parametrize("factors,p", [((4,), 2), ((2, 2), 2), ((2, 4), 2), ((8,), 2), ((9,), 3), ((2, 2, 2), 2)])
def test_sylow_is_p_part_of_aut(factors, p):
    spec = GroupSpec(factors)
    total = len(autgroup.brute_force_automorphisms(spec))
    p_part = 1
    while total % p == 0:
        total //= p
        p_part *= p
    sylow = autgroup.matrix_closure(spec, autgroup.sylow_p_aut_generators(spec, p))
    assert len(sylow) == p_part


@pytest.mark.parametrize("factors", [(4,), (2, 4), (2, 2, 2), (8,), (3, 3)])
def test_generated_automorphisms_are_additive(factors):
    spec = GroupSpec(factors)
    elems = abelian.enumerate_elements(spec)
    for mat in autgroup.matrix_closure(spec, autgroup.aut_generators(spec)):
        imgs = (elems @ mat.T) % spec.factor_array()
        for i in range(0, spec.order, 3):
            for j in range(0, spec.order, 3):
                s = abelian.add(spec, elems[i], elems[j])
                expect = abelian.add(spec, imgs[i], imgs[j])
                assert np.array_equal(autgroup.apply(spec, mat, s), expect)
        assert np.array_equal(autgroup.apply(spec, mat, abelian.zero_element(spec)), abelian.zero_element(spec))


def test_group_axioms_on_closure():
    spec = GroupSpec((2, 4))
    group = autgroup.matrix_closure(spec, autgroup.aut_generators(spec))
    ident = autgroup.identity_matrix(spec)
    for m in group:
        inv = autgroup.invert(spec, m)
        assert np.array_equal(autgroup.compose(spec, m, inv), ident)
        assert any(np.array_equal(autgroup.compose(spec, m, g), h) for g in group[:3] for h in group)


def test_matrix_text_roundtrip():
    spec = GroupSpec((4, 4))
    m = autgroup.normalize_matrix(spec, [[1, 1], [0, 1]])
    assert autgroup.matrix_text(m) == "1,1;0,1"
    assert np.array_equal(autgroup.parse_matrix(spec, "1,1;0,1"), m)
