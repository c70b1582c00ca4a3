"""Finite groups as explicit multiplication tables on 0..m-1.

Used wherever a subgroup of the holomorph (or one of its quotients) has to
be treated as an abstract group: isomorphism fingerprints, quotient
construction, and the cocycle setup for complement computation.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from . import kernels
from .errors import CapacityError, ContractError
from .holomorph import Subgroup, rows_to_keys

DEFAULT_TABLE_BOUND = 1 << 12


class GroupTable:
    """A finite group given by its multiplication table."""

    __slots__ = ("table", "id_idx", "inv", "_orders")

    def __init__(self, table: np.ndarray, id_idx: int, validate: bool = False):
        self.table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        self.id_idx = int(id_idx)
        m = self.table.shape[0]
        if self.table.shape != (m, m):
            raise ContractError(f"multiplication table must be square, got {self.table.shape}")
        if validate and not self._is_group():
            raise ContractError("table does not define a group")
        self.inv = np.argmax(self.table == self.id_idx, axis=1).astype(np.int32)
        self._orders: np.ndarray | None = None

    def _is_group(self) -> bool:
        m = self.order
        t = self.table
        if np.any(t < 0) or np.any(t >= m):
            return False
        if not (np.array_equal(t[self.id_idx], np.arange(m)) and np.array_equal(t[:, self.id_idx], np.arange(m))):
            return False
        for row in t:
            if np.unique(row).size != m:
                return False
        if np.unique(t[self.id_idx]).size != m:
            return False
        # associativity, fully vectorized: (xy)z == x(yz)
        return bool(np.array_equal(t[t, :][:, :, :], t[:, t][:, :, :])) if m <= 128 else self._assoc_chunked()

    def _assoc_chunked(self) -> bool:
        m = self.order
        t = self.table
        for x in range(m):
            if not np.array_equal(t[t[x], :], t[x, t]):
                return False
        return True

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @staticmethod
    def from_subgroup(H: Subgroup, bound: int = DEFAULT_TABLE_BOUND) -> "GroupTable":
        """Table of a packed holomorph subgroup under its product."""
        m = H.order
        if m > bound:
            raise CapacityError(f"group table of order {m} exceeds bound {bound}")
        prods = H.hol.mul_cross(H.elements, H.elements)
        keys = rows_to_keys(H.elements)
        qs = rows_to_keys(prods)
        pos = np.searchsorted(keys, qs)
        if np.any(keys[np.minimum(pos, m - 1)] != qs):
            raise ContractError("element set is not closed under the product")
        table = pos.reshape(m, m)
        id_pos = int(np.searchsorted(keys, rows_to_keys(H.hol.identity[None, :])))
        return GroupTable(table, id_pos)

    @staticmethod
    def from_index_table(table: np.ndarray, id_idx: int) -> "GroupTable":
        return GroupTable(table, id_idx)

    # -- structural invariants ------------------------------------------------

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            m = self.order
            orders = np.zeros(m, dtype=np.int64)
            cur = np.arange(m)
            k = 1
            remaining = m
            while remaining:
                done = (cur == self.id_idx) & (orders == 0)
                orders[done] = k
                remaining -= int(done.sum())
                cur = self.table[cur, np.arange(m)]
                k += 1
            self._orders = orders
        return self._orders

    def exponent(self) -> int:
        return reduce(math.lcm, self.element_orders().tolist())

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def center_size(self) -> int:
        return int(np.sum(np.all(self.table == self.table.T, axis=1)))

    def conjugacy_class_sizes(self) -> tuple[int, ...]:
        m = self.order
        seen = np.zeros(m, dtype=bool)
        sizes = []
        all_ids = np.arange(m)
        for x in range(m):
            if seen[x]:
                continue
            cls = np.unique(self.table[self.table[all_ids, x], self.inv[all_ids]])
            seen[cls] = True
            sizes.append(len(cls))
        return tuple(sorted(sizes))

    def subgroup_closure(self, gens) -> np.ndarray:
        gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
        out = kernels.closure_table(self.table, gens, self.id_idx, self.order)
        if out.size == 0:
            raise CapacityError("closure exceeded the group order; table is inconsistent")
        return out

    def derived_ids(self) -> np.ndarray:
        m = self.order
        xs = np.repeat(np.arange(m), m)
        ys = np.tile(np.arange(m), m)
        comms = self.table[self.table[self.inv[xs], self.inv[ys]], self.table[xs, ys]]
        return self.subgroup_closure(np.unique(comms))

    def greedy_generators(self) -> list[int]:
        member = np.zeros(self.order, dtype=bool)
        member[self.id_idx] = True
        gens: list[int] = []
        for x in range(self.order):
            if not member[x]:
                gens.append(x)
                member[:] = False
                member[self.subgroup_closure(gens)] = True
                if member.all():
                    break
        return gens

    def power(self, x: int, k: int) -> int:
        out = self.id_idx
        base = int(x)
        while k:
            if k & 1:
                out = int(self.table[out, base])
            base = int(self.table[base, base])
            k >>= 1
        return out

    def quotient(self, normal_ids) -> "GroupTable":
        """Quotient by a normal subgroup given as a sorted id array."""
        normal_ids = np.asarray(normal_ids, dtype=np.int64)
        rep = np.full(self.order, -1, dtype=np.int64)
        for x in range(self.order):
            if rep[x] < 0:
                rep[self.table[x, normal_ids]] = x
        reps = np.unique(rep)
        local = {int(r): i for i, r in enumerate(reps)}
        qtable = np.empty((len(reps), len(reps)), dtype=np.int32)
        for i, r1 in enumerate(reps):
            qtable[i] = [local[int(rep[self.table[r1, r2]])] for r2 in reps]
        q = GroupTable(qtable, local[int(rep[self.id_idx])])
        return q

    def coset_rep_map(self, sub_ids) -> np.ndarray:
        """rep[x] = least member of the left coset x*sub."""
        sub_ids = np.asarray(sub_ids, dtype=np.int64)
        rep = np.full(self.order, -1, dtype=np.int64)
        for x in range(self.order):
            if rep[x] < 0:
                rep[self.table[x, sub_ids]] = x
        return rep

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors of the abelianization (ascending, each divides next).

        For an abelian p-component the counts n_k = #{x : x^(p^k) = e} satisfy
        log_p(n_k / n_{k-1}) = number of cyclic factors of order >= p^k, which
        is the conjugate of the exponent partition.
        """
        tbl = self if self.is_abelian() else self.quotient(self.derived_ids())
        m = tbl.order
        if m == 1:
            return ()
        orders = tbl.element_orders().tolist()
        by_prime: dict[int, list[int]] = {}
        for p in _prime_divisors(m):
            total_p = sum(1 for o in orders if o == _p_part(o, p))
            conj = []
            prev = 1
            k = 1
            while prev < total_p:
                cur = sum(1 for o in orders if o == _p_part(o, p) and o <= p**k)
                conj.append(round(math.log(cur / prev, p)))
                prev = cur
                k += 1
            lambdas = [sum(1 for c in conj if c >= j) for j in range(1, (conj[0] if conj else 0) + 1)]
            by_prime[p] = lambdas  # descending exponents of the cyclic p-factors
        depth = max((len(v) for v in by_prime.values()), default=0)
        invariant = []
        for i in range(depth):
            dfac = 1
            for p, exps in by_prime.items():
                if i < len(exps):
                    dfac *= p ** exps[i]
            invariant.append(dfac)
        invariant.reverse()
        return tuple(invariant)


def _p_part(order: int, p: int) -> int:
    out = 1
    while order % p == 0:
        out *= p
        order //= p
    return out


def _prime_divisors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out
