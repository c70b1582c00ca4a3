"""Left braces on (G,+) and their regular-subgroup form.

A regular subgroup H of Hol(G) pairs each g in G with a unique
automorphism lambda_g; the induced multiplication a*b = a + lambda_a(b)
makes (G, +, *) a left brace, and the construction inverts via
lambda_a(b) = -a + a*b.  Tables are indexed by the lexicographic element
rank so that every structure on G of order m lives in plain (m, ...)
arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import abelian, autgroup
from .abelian import GroupSpec
from .errors import ContractError, IntegrityError, ValidityError
from .holomorph import Hol, Subgroup
from .subgroups import is_regular


@dataclass
class RegularSubgroup:
    """A regular subgroup as its total map g -> lambda_g (one matrix per rank)."""

    spec: GroupSpec
    lambda_mats: np.ndarray  # (order, n, n), row index = element rank

    @property
    def order(self) -> int:
        return self.lambda_mats.shape[0]

    def matrix_of(self, g) -> np.ndarray:
        return self.lambda_mats[abelian.element_rank(self.spec, g)]


@dataclass
class Brace:
    """Addition inherited from the spec; multiplication as a rank table."""

    spec: GroupSpec
    mul: np.ndarray  # (order, order) int32, mul[a, b] = rank of a*b


@lru_cache(maxsize=64)
def _index_tables(spec: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    """(add, neg) rank tables of (G,+)."""
    elems = abelian.enumerate_elements(spec)
    m = spec.order
    sums = (elems[:, None, :] + elems[None, :, :]) % spec.factor_array()
    add = abelian.rank_rows(spec, sums.reshape(m * m, -1)).reshape(m, m).astype(np.int32)
    neg = abelian.rank_rows(spec, (-elems) % spec.factor_array()).astype(np.int32)
    return add, neg


def lambda_table(H: Subgroup) -> RegularSubgroup:
    """The map g -> lambda_g of a regular subgroup."""
    if not is_regular(H):
        raise ContractError("lambda table requires a regular subgroup")
    spec = H.hol.spec
    ranks = abelian.rank_rows(spec, H.hol.g_part(H.elements))
    mats = np.zeros((spec.order, spec.rank, spec.rank), dtype=np.int64)
    mats[ranks] = H.hol.mat_part(H.elements)
    return RegularSubgroup(spec=spec, lambda_mats=mats)


def subgroup_from_lambda(R: RegularSubgroup, hol: Hol | None = None) -> Subgroup:
    """The packed subgroup {(g, lambda_g)}."""
    hol = hol or Hol(R.spec)
    elems = abelian.enumerate_elements(R.spec)
    rows = np.concatenate([elems, R.lambda_mats.reshape(R.order, -1)], axis=1)
    return Subgroup(hol, rows)


def verify_lambda_cocycle(R: RegularSubgroup) -> bool:
    """Both lambda identities, over every pair of group elements.

    Checks lambda_{g + lambda_g(k)} = lambda_g o lambda_k and
    lambda_g^{-1} = lambda_{lambda_g^{-1}(-g)}; matrices must be honest
    automorphisms for the inverse identity to make sense.
    """
    spec = R.spec
    elems = abelian.enumerate_elements(spec)
    factors = spec.factor_array()
    mats = R.lambda_mats
    for g_rank in range(spec.order):
        lam_g = mats[g_rank]
        images = (elems @ lam_g.T) % factors
        targets = (elems[g_rank] + images) % factors
        target_ranks = abelian.rank_rows(spec, targets)
        composed = np.einsum("ij,kjl->kil", lam_g, mats) % factors[None, :, None]
        if not np.array_equal(mats[target_ranks], composed):
            return False
    for g_rank in range(spec.order):
        try:
            inv = autgroup.invert(spec, mats[g_rank])
        except ValidityError:
            return False
        arg = autgroup.apply(spec, inv, abelian.negate(spec, elems[g_rank]))
        if not np.array_equal(R.matrix_of(arg), inv):
            return False
    return True


def brace_from_regular(R: RegularSubgroup) -> Brace:
    """Multiplication a*b = a + lambda_a(b)."""
    spec = R.spec
    elems = abelian.enumerate_elements(spec)
    factors = spec.factor_array()
    mul = np.empty((spec.order, spec.order), dtype=np.int32)
    for a in range(spec.order):
        images = (elems @ R.lambda_mats[a].T) % factors
        mul[a] = abelian.rank_rows(spec, (elems[a] + images) % factors)
    return Brace(spec=spec, mul=mul)


def regular_from_brace(B: Brace) -> RegularSubgroup:
    """Recover lambda_a(b) = -a + a*b from a verified brace."""
    if not verify_brace(B):
        raise ContractError("not a valid brace")
    spec = B.spec
    add, neg = _index_tables(spec)
    elems = abelian.enumerate_elements(spec)
    factors = spec.factor_array()
    mats = np.empty((spec.order, spec.rank, spec.rank), dtype=np.int64)
    gen_ranks = []
    for j in range(spec.rank):
        e = np.zeros(spec.rank, dtype=np.int64)
        e[j] = 1
        gen_ranks.append(abelian.element_rank(spec, e))
    for a in range(spec.order):
        perm = add[neg[a], B.mul[a]]
        for j, gr in enumerate(gen_ranks):
            mats[a, :, j] = elems[perm[gr]]
        mats[a] %= factors[:, None]
        # the matrix must reproduce the permutation, i.e. lambda_a is additive
        images = (elems @ mats[a].T) % factors
        if not np.array_equal(abelian.rank_rows(spec, images), perm):
            raise ContractError("lambda map of the brace is not additive")
    return RegularSubgroup(spec=spec, lambda_mats=mats)


def verify_brace(B: Brace) -> bool:
    """(B,*) is a group sharing identity 0 with (B,+), and a(b+c) = ab - a + ac."""
    spec = B.spec
    m = spec.order
    mul = B.mul
    if mul.shape != (m, m) or np.any(mul < 0) or np.any(mul >= m):
        return False
    idx = np.arange(m)
    if not np.array_equal(mul[0], idx) or not np.array_equal(mul[:, 0], idx):
        return False
    for row in mul:
        if np.unique(row).size != m:
            return False
    for col in mul.T:
        if np.unique(col).size != m:
            return False
    # associativity: (xy)z == x(yz), fully vectorized
    if not np.array_equal(mul[mul, :], mul[:, mul]):
        return False
    add, neg = _index_tables(spec)
    lhs = mul[:, add]  # a * (b + c)
    ab = mul[:, :, None]
    ac = mul[:, None, :]
    rhs = add[add[ab, neg[:, None, None]], ac]  # (ab - a) + ac
    return bool(np.array_equal(lhs, rhs))


def kernel_of_lambda(R: RegularSubgroup) -> np.ndarray:
    """{g : lambda_g = id}, as sorted element coordinates.

    This is the intersection of the regular subgroup with the translation
    subgroup, transported to G; it is closed under addition.
    """
    spec = R.spec
    ident = autgroup.identity_matrix(spec)
    mask = np.all(R.lambda_mats == ident, axis=(1, 2))
    elems = abelian.enumerate_elements(spec)
    return elems[mask]


def trivial_brace(spec: GroupSpec) -> Brace:
    add, _neg = _index_tables(spec)
    return Brace(spec=spec, mul=add.copy())


# -- serialization -------------------------------------------------------------


def write_brace_record(R: RegularSubgroup, path: str | Path) -> None:
    """Group spec header plus one ``g -> matrix`` line per element."""
    elems = abelian.enumerate_elements(R.spec)
    lines = [R.spec.text()]
    for g, mat in zip(elems, R.lambda_mats):
        lines.append(f"{abelian.element_text(g)} -> {autgroup.matrix_text(mat)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_brace_record(path: str | Path) -> RegularSubgroup:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise IntegrityError(f"empty brace record {path}")
    spec = GroupSpec.parse(lines[0])
    mats = np.zeros((spec.order, spec.rank, spec.rank), dtype=np.int64)
    seen = np.zeros(spec.order, dtype=bool)
    for line in lines[1:]:
        if not line.strip():
            continue
        try:
            left, right = line.split("->")
        except ValueError as exc:
            raise IntegrityError(f"malformed brace line {line!r}") from exc
        g = abelian.parse_element(spec, left.strip())
        rank = abelian.element_rank(spec, g)
        mats[rank] = autgroup.parse_matrix(spec, right.strip())
        seen[rank] = True
    if not seen.all():
        raise IntegrityError(f"brace record {path} is missing elements")
    return RegularSubgroup(spec=spec, lambda_mats=mats)
