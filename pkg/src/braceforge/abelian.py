"""Finite abelian groups as direct products of cyclic groups.

A group is described by the orders of its cyclic direct factors
(e.g. ``[4, 4, 4]``); elements are vectors of residues, one per factor.
All element-level helpers accept sequences or numpy arrays and return
int64 numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ShapeError, ValidityError

# Residues must fit the big-endian uint16 packing used for canonical keys.
MAX_FACTOR = 1 << 15

DEFAULT_ENUMERATION_BOUND = 1 << 20


@dataclass(frozen=True)
class GroupSpec:
    """Orders of the cyclic direct factors of a finite abelian group."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValidityError("a group spec needs at least one factor")
        for f in self.factors:
            if f < 2:
                raise ValidityError(f"factor {f} < 2")
            if f > MAX_FACTOR:
                raise CapacityError(f"factor {f} exceeds the supported bound {MAX_FACTOR}")
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.factors)

    def factor_array(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    def is_p_group(self) -> tuple[bool, int]:
        """Return (True, p) when the order is a prime power, else (False, 0)."""
        m = self.order
        p = _smallest_prime_factor(m)
        while m % p == 0:
            m //= p
        return (m == 1, p if m == 1 else 0)

    def is_homocyclic(self) -> bool:
        return len(set(self.factors)) == 1

    def canonicalized(self) -> "GroupSpec":
        """Invariant-factor form: factors ascending, each dividing the next."""
        by_prime: dict[int, list[int]] = {}
        for f in self.factors:
            for p, e in _factorize(f).items():
                by_prime.setdefault(p, []).append(p**e)
        for powers in by_prime.values():
            powers.sort(reverse=True)
        depth = max(len(v) for v in by_prime.values())
        invariant = []
        for i in range(depth):
            d = 1
            for powers in by_prime.values():
                if i < len(powers):
                    d *= powers[i]
            invariant.append(d)
        invariant.reverse()
        return GroupSpec(tuple(invariant))

    def text(self) -> str:
        return ",".join(str(f) for f in self.factors)

    @staticmethod
    def parse(text: str) -> "GroupSpec":
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValidityError(f"empty group spec {text!r}")
        try:
            return GroupSpec(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ValidityError(f"bad group spec {text!r}") from exc

    def __str__(self) -> str:
        return self.text()


def _smallest_prime_factor(m: int) -> int:
    if m % 2 == 0:
        return 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return d
        d += 2
    return m


def _factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    while m > 1:
        p = _smallest_prime_factor(m)
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out[p] = e
    return out


def as_element(spec: GroupSpec, a: Iterable[int] | np.ndarray) -> np.ndarray:
    """Validate and reduce a coordinate vector for ``spec``."""
    arr = np.asarray(a, dtype=np.int64)
    if arr.shape != (spec.rank,):
        raise ShapeError(f"element of length {arr.shape} for spec {spec}")
    return arr % spec.factor_array()


def zero_element(spec: GroupSpec) -> np.ndarray:
    return np.zeros(spec.rank, dtype=np.int64)


def add(spec: GroupSpec, a, b) -> np.ndarray:
    """Component-wise sum modulo the factor orders."""
    return (as_element(spec, a) + as_element(spec, b)) % spec.factor_array()


def negate(spec: GroupSpec, a) -> np.ndarray:
    return (-as_element(spec, a)) % spec.factor_array()


def element_order(spec: GroupSpec, a) -> int:
    """Least n >= 1 with n*a = 0; the lcm of the per-coordinate orders."""
    arr = as_element(spec, a)
    n = 1
    for residue, f in zip(arr.tolist(), spec.factors):
        n = math.lcm(n, f // math.gcd(int(residue), f))
    return n


def enumerate_elements(spec: GroupSpec, bound: int = DEFAULT_ENUMERATION_BOUND) -> np.ndarray:
    """All elements in lexicographic order, as an (order, rank) array."""
    if spec.order > bound:
        raise CapacityError(f"group of order {spec.order} exceeds enumeration bound {bound}")
    ranks = np.arange(spec.order, dtype=np.int64)
    return unrank_elements(spec, ranks)


def element_rank(spec: GroupSpec, a) -> int:
    """Position of ``a`` in the lexicographic enumeration (mixed-radix rank)."""
    arr = as_element(spec, a)
    r = 0
    for residue, f in zip(arr.tolist(), spec.factors):
        r = r * f + int(residue)
    return r


def rank_rows(spec: GroupSpec, rows: np.ndarray) -> np.ndarray:
    """Vectorized mixed-radix rank of an (m, rank) coordinate array."""
    r = np.zeros(rows.shape[0], dtype=np.int64)
    for i, f in enumerate(spec.factors):
        r = r * f + rows[:, i]
    return r


def unrank_elements(spec: GroupSpec, ranks: np.ndarray) -> np.ndarray:
    out = np.empty((len(ranks), spec.rank), dtype=np.int64)
    r = np.asarray(ranks, dtype=np.int64).copy()
    for i in range(spec.rank - 1, -1, -1):
        f = spec.factors[i]
        out[:, i] = r % f
        r //= f
    return out


def element_text(a: np.ndarray | Sequence[int]) -> str:
    return ",".join(str(int(x)) for x in a)


def parse_element(spec: GroupSpec, text: str) -> np.ndarray:
    try:
        vals = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise ValidityError(f"bad element text {text!r}") from exc
    return as_element(spec, vals)
