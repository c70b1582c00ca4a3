"""The holomorph Hol(G,+) = G x| Aut(G,+) and its packed element encoding.

An element (g, alpha) is packed into a single int64 row ``[g | alpha]`` of
length ``n + n*n``; the canonical encoding of an element is that row, the
canonical encoding of a subgroup is the lexicographically sorted array of
its rows.  Canonical byte keys use big-endian uint16 so that byte order
agrees with numeric lexicographic order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import abelian, autgroup, kernels
from .abelian import GroupSpec
from .errors import CapacityError, ShapeError, ValidityError

DEFAULT_CLOSURE_BOUND = 1 << 20


def rows_to_keys(rows: np.ndarray) -> np.ndarray:
    """Per-row byte keys whose memcmp order equals numeric lex order."""
    arr = np.ascontiguousarray(np.asarray(rows, dtype=np.int64).astype(">u2"))
    return arr.view(f"S{2 * rows.shape[1]}").ravel()


def sort_rows(rows: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically with duplicates removed."""
    keys = rows_to_keys(rows)
    order = np.argsort(keys, kind="stable")
    sorted_rows = rows[order]
    if len(sorted_rows) > 1:
        keep = np.empty(len(sorted_rows), dtype=bool)
        keep[0] = True
        keep[1:] = keys[order][1:] != keys[order][:-1]
        sorted_rows = sorted_rows[keep]
    return np.ascontiguousarray(sorted_rows)


class Hol:
    """Arithmetic context for Hol(G,+) over one group spec."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.n = spec.rank
        self.width = self.n + self.n * self.n
        self.factors = spec.factor_array()
        self.identity = self.element(abelian.zero_element(spec), autgroup.identity_matrix(spec))

    # -- packing ------------------------------------------------------------

    def element(self, g, mat) -> np.ndarray:
        """Pack a translation part and an automorphism matrix into one row."""
        gv = abelian.as_element(self.spec, g)
        mv = autgroup.normalize_matrix(self.spec, mat)
        return np.concatenate([gv, mv.ravel()])

    def translation(self, g) -> np.ndarray:
        return self.element(g, autgroup.identity_matrix(self.spec))

    def from_aut(self, mat) -> np.ndarray:
        return self.element(abelian.zero_element(self.spec), mat)

    def g_part(self, row: np.ndarray) -> np.ndarray:
        return np.asarray(row)[..., : self.n]

    def mat_part(self, row: np.ndarray) -> np.ndarray:
        flat = np.asarray(row)[..., self.n :]
        return flat.reshape(*flat.shape[:-1], self.n, self.n)

    def _check(self, row: np.ndarray) -> np.ndarray:
        arr = np.asarray(row, dtype=np.int64)
        if arr.shape[-1] != self.width:
            raise ShapeError(f"element width {arr.shape} for spec {self.spec}")
        return arr

    # -- single-element arithmetic -------------------------------------------

    def mul(self, x, y) -> np.ndarray:
        """(g,a)(h,b) = (g + a(h), a o b)."""
        xr = self._check(x)[None, :]
        yr = self._check(y)[None, :]
        g, m = kernels.mul_rows(
            self.g_part(xr), self.mat_part(xr), self.g_part(yr), self.mat_part(yr), self.factors
        )
        return np.concatenate([g[0], m[0].ravel()])

    def inv(self, x) -> np.ndarray:
        """(g,a)^-1 = (-a^-1(g), a^-1)."""
        xr = self._check(x)
        ainv = autgroup.invert(self.spec, self.mat_part(xr))
        g = abelian.negate(self.spec, autgroup.apply(self.spec, ainv, self.g_part(xr)))
        return self.element(g, ainv)

    def act(self, x, h) -> np.ndarray:
        """Affine action (g,a)*h = g + a(h)."""
        xr = self._check(x)[None, :]
        hv = abelian.as_element(self.spec, h)
        return kernels.act_rows(self.g_part(xr), self.mat_part(xr), hv, self.factors)[0]

    def projection(self, x) -> np.ndarray:
        """Translation part of an element; equals x * 0, not a homomorphism."""
        return self.g_part(self._check(x)).copy()

    # -- batched arithmetic ----------------------------------------------------

    def mul_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Row-wise products of two aligned (m, width) arrays."""
        xs = np.ascontiguousarray(self._check(xs))
        ys = np.ascontiguousarray(self._check(ys))
        g, m = kernels.mul_rows(
            self.g_part(xs), self.mat_part(xs), self.g_part(ys), self.mat_part(ys), self.factors
        )
        return np.concatenate([g, m.reshape(len(g), -1)], axis=1)

    def mul_cross(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """All pairwise products; row a*len(ys)+b is xs[a] * ys[b]."""
        xs = np.ascontiguousarray(np.atleast_2d(self._check(xs)))
        ys = np.ascontiguousarray(np.atleast_2d(self._check(ys)))
        g, m = kernels.mul_cross(
            self.g_part(xs), self.mat_part(xs), self.g_part(ys), self.mat_part(ys), self.factors
        )
        return np.concatenate([g, m.reshape(len(g), -1)], axis=1)

    def conjugate_rows(self, x, rows: np.ndarray) -> np.ndarray:
        """x * rows[i] * x^-1 for every row."""
        xr = np.atleast_2d(self._check(x))
        left = self.mul_cross(xr, rows)
        return self.mul_cross(left, np.atleast_2d(self.inv(x)))

    # -- text syntax -------------------------------------------------------------

    def element_text(self, row: np.ndarray) -> str:
        xr = self._check(row)
        return (
            abelian.element_text(self.g_part(xr))
            + " | "
            + autgroup.matrix_text(self.mat_part(xr))
        )

    def parse_element(self, text: str) -> np.ndarray:
        parts = text.split("|")
        if len(parts) != 2:
            raise ValidityError(f"bad holomorph element text {text!r}")
        g = abelian.parse_element(self.spec, parts[0].strip())
        m = autgroup.parse_matrix(self.spec, parts[1].strip())
        return self.element(g, m)


class Subgroup:
    """A subgroup of Hol(G) held as its canonical sorted element array."""

    __slots__ = ("hol", "elements", "_key")

    def __init__(self, hol: Hol, elements: np.ndarray, *, canonical: bool = False):
        arr = np.asarray(elements, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != hol.width:
            raise ShapeError(f"element array of shape {arr.shape} for spec {hol.spec}")
        if not canonical:
            arr = sort_rows(arr)
        else:
            arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.hol = hol
        self.elements = arr
        self._key: bytes | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def key(self) -> bytes:
        """Canonical byte encoding; equal keys iff equal subgroups."""
        if self._key is None:
            self._key = np.ascontiguousarray(self.elements.astype(">u2")).tobytes()
        return self._key

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.hol.spec == other.hol.spec
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return hash((self.hol.spec, self.key))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, spec={self.hol.spec})"

    def contains_row(self, row: np.ndarray) -> bool:
        keys = rows_to_keys(self.elements)
        q = rows_to_keys(np.atleast_2d(np.asarray(row, dtype=np.int64)))[0]
        pos = int(np.searchsorted(keys, q))
        return pos < len(keys) and keys[pos] == q

    def contains_all(self, other: "Subgroup") -> bool:
        keys = rows_to_keys(self.elements)
        qs = rows_to_keys(other.elements)
        pos = np.searchsorted(keys, qs)
        pos = np.minimum(pos, len(keys) - 1)
        return bool(np.all(keys[pos] == qs))

    def is_closed(self) -> bool:
        """Closure under products and presence of the identity."""
        if not self.contains_row(self.hol.identity):
            return False
        prods = self.hol.mul_cross(self.elements, self.elements)
        keys = rows_to_keys(self.elements)
        qs = rows_to_keys(prods)
        pos = np.searchsorted(keys, qs)
        pos = np.minimum(pos, len(keys) - 1)
        return bool(np.all(keys[pos] == qs))

    def generating_set(self) -> np.ndarray:
        """Greedy small generating set, deterministic in canonical order."""
        from .subgroups import closure  # local import to avoid a cycle

        gens: list[np.ndarray] = []
        have = Subgroup(self.hol, self.hol.identity[None, :])
        for row in self.elements:
            if not have.contains_row(row):
                gens.append(row)
                have = closure(self.hol, gens, bound=self.order)
                if have.order == self.order:
                    break
        if not gens:
            gens = [self.hol.identity]
        return np.array(gens, dtype=np.int64)


def translations_subgroup(hol: Hol, bound: int = DEFAULT_CLOSURE_BOUND) -> Subgroup:
    """T = {(g, id)}: the regular subgroup of all left translations."""
    if hol.spec.order > bound:
        raise CapacityError(f"|G| = {hol.spec.order} exceeds bound {bound}")
    elems = abelian.enumerate_elements(hol.spec, bound)
    ident = autgroup.identity_matrix(hol.spec).ravel()
    rows = np.concatenate([elems, np.tile(ident, (len(elems), 1))], axis=1)
    return Subgroup(hol, rows)


def sylow_p_hol_generators(hol: Hol, p: int) -> np.ndarray:
    """Generators of T x| (Sylow p of Aut), a Sylow p-subgroup for p-groups G."""
    ok, spec_p = hol.spec.is_p_group()
    if not ok or spec_p != p:
        raise ValidityError(f"spec {hol.spec} is not a {p}-group")
    rows = []
    for i in range(hol.n):
        e_i = np.zeros(hol.n, dtype=np.int64)
        e_i[i] = 1
        rows.append(hol.translation(e_i))
    for m in autgroup.sylow_p_aut_generators(hol.spec, p):
        rows.append(hol.from_aut(m))
    return np.array(rows, dtype=np.int64)


def conjugate_subgroup(x, H: Subgroup) -> Subgroup:
    """x H x^-1 in canonical encoding."""
    rows = H.hol.conjugate_rows(x, H.elements)
    return Subgroup(H.hol, rows)


def aut_conjugator_rows(hol: Hol) -> np.ndarray:
    """Generators of Aut(G,+) embedded as (0, beta) rows."""
    mats = autgroup.aut_generators(hol.spec)
    if not mats:
        return hol.identity[None, :].copy()
    return np.array([hol.from_aut(m) for m in mats], dtype=np.int64)
