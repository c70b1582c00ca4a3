import numpy as np
import pytest

from braceforge import abelian, autgroup
from braceforge.abelian import GroupSpec
from braceforge.braces import (
    Brace,
    brace_from_regular,
    kernel_of_lambda,
    lambda_table,
    read_brace_record,
    regular_from_brace,
    subgroup_from_lambda,
    trivial_brace,
    verify_brace,
    verify_lambda_cocycle,
    write_brace_record,
)
from braceforge.classify import are_isomorphic
from braceforge.errors import ContractError
from braceforge.grouptable import GroupTable
from braceforge.holomorph import Hol, conjugate_subgroup, translations_subgroup
from braceforge.subgroups import closure, is_regular


@pytest.fixture
def klein_in_hol4():
    hol = Hol(GroupSpec((4,)))
    return closure(hol, [hol.element([1], [[3]]), hol.translation([2])])


def test_lambda_table_of_translations():
    hol = Hol(GroupSpec((4,)))
    R = lambda_table(translations_subgroup(hol))
    ident = autgroup.identity_matrix(hol.spec)
    assert all(np.array_equal(m, ident) for m in R.lambda_mats)


def test_lambda_table_of_klein(klein_in_hol4):
    R = lambda_table(klein_in_hol4)
    assert R.matrix_of([0]).tolist() == [[1]]
    assert R.matrix_of([2]).tolist() == [[1]]
    assert R.matrix_of([1]).tolist() == [[3]]
    assert R.matrix_of([3]).tolist() == [[3]]


def test_lambda_table_requires_regular():
    hol = Hol(GroupSpec((4,)))
    with pytest.raises(ContractError):
        lambda_table(closure(hol, [hol.from_aut([[3]])]))


def test_lambda_zero_is_identity(spec_run):
    for text in ["4", "2,2", "2,4"]:
        for H in spec_run(text).oracle_subs:
            R = lambda_table(H)
            assert np.array_equal(R.matrix_of(abelian.zero_element(R.spec)),
                                  autgroup.identity_matrix(R.spec))


def test_cocycle_identities(klein_in_hol4):
    hol = Hol(GroupSpec((4,)))
    assert verify_lambda_cocycle(lambda_table(translations_subgroup(hol)))
    assert verify_lambda_cocycle(lambda_table(klein_in_hol4))


def test_cocycle_rejects_bad_table():
    spec = GroupSpec((4,))
    mats = np.tile(np.array([[[3]]]), (4, 1, 1))  # lambda_0 != id
    from braceforge.braces import RegularSubgroup

    assert not verify_lambda_cocycle(RegularSubgroup(spec=spec, lambda_mats=mats))


def test_brace_from_regular_trivial():
    spec = GroupSpec((2, 4))
    hol = Hol(spec)
    B = brace_from_regular(lambda_table(translations_subgroup(hol)))
    assert verify_brace(B)
    assert np.array_equal(B.mul, trivial_brace(spec).mul)


def test_brace_from_klein(klein_in_hol4):
    B = brace_from_regular(lambda_table(klein_in_hol4))
    assert verify_brace(B)
    # 1*1 = 1 + 3*1 = 0 mod 4; the multiplicative group is C2 x C2
    assert B.mul[1, 1] == 0
    table = GroupTable(B.mul, 0)
    assert table.exponent() == 2


def test_brace_law_negative():
    spec = GroupSpec((4,))
    shifted = (trivial_brace(spec).mul + 1) % 4  # no identity
    assert not verify_brace(Brace(spec=spec, mul=shifted))


def test_round_trip_bijection(spec_run):
    for text in ["2", "4", "2,2", "8", "2,4", "9", "3,3", "4,4"]:
        run = spec_run(text)
        for H in run.oracle_subs:
            R = lambda_table(H)
            assert verify_lambda_cocycle(R)
            B = brace_from_regular(R)
            assert verify_brace(B)
            R2 = regular_from_brace(B)
            assert np.array_equal(R2.lambda_mats, R.lambda_mats)
            assert subgroup_from_lambda(R2, run.hol) == H


def test_multiplicative_group_isomorphic_to_subgroup(spec_run):
    run = spec_run("4")
    for H in run.oracle_subs:
        B = brace_from_regular(lambda_table(H))
        assert are_isomorphic(GroupTable(B.mul, 0), GroupTable.from_subgroup(H))


def test_regular_from_brace_rejects_invalid():
    spec = GroupSpec((4,))
    shifted = (trivial_brace(spec).mul + 1) % 4
    with pytest.raises(ContractError):
        regular_from_brace(Brace(spec=spec, mul=shifted))


def test_kernel_of_lambda(spec_run, klein_in_hol4):
    hol = Hol(GroupSpec((4,)))
    R = lambda_table(translations_subgroup(hol))
    assert len(kernel_of_lambda(R)) == 4
    K = kernel_of_lambda(lambda_table(klein_in_hol4))
    assert K.ravel().tolist() == [0, 2]
    # kernels are closed under addition for every oracle subgroup up to order 16
    for text in ["2", "4", "2,2", "8", "2,4", "2,2,2", "9", "3,3", "4,4"]:
        run = spec_run(text)
        for H in run.oracle_subs:
            ker = kernel_of_lambda(lambda_table(H))
            members = {tuple(k) for k in ker.tolist()}
            for a in ker:
                for b in ker:
                    assert tuple(abelian.add(run.spec, a, b).tolist()) in members


def test_conjugate_regular_gives_isomorphic_brace(spec_run):
    from braceforge.classify import braces_isomorphic

    run = spec_run("2,4")
    rng = np.random.default_rng(0)
    auts = autgroup.matrix_closure(run.spec, autgroup.aut_generators(run.spec))
    for H in run.oracle_subs[:6]:
        beta = auts[rng.integers(len(auts))]
        conj = conjugate_subgroup(run.hol.from_aut(beta), H)
        assert braces_isomorphic(H, conj)


def test_brace_record_roundtrip(tmp_path, klein_in_hol4):
    R = lambda_table(klein_in_hol4)
    path = tmp_path / "klein.brace"
    write_brace_record(R, path)
    text = path.read_text().splitlines()
    assert text[0] == "4"
    assert text[1] == "0 -> 1"
    back = read_brace_record(path)
    assert np.array_equal(back.lambda_mats, R.lambda_mats)
