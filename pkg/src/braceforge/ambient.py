"""Multiplication-table view of one fixed subgroup of Hol(G).

The layered enumeration and the brute-force search both run inside a single
ambient group (a Sylow p-subgroup of the holomorph).  Precomputing its
multiplication table turns every inner-loop product into an integer lookup;
subgroups become sorted int64 index arrays.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .abelian import rank_rows
from .errors import CapacityError, IntegrityError, ValidityError
from .holomorph import Hol, Subgroup, rows_to_keys

DEFAULT_AMBIENT_BOUND = 1 << 13
_TABLE_CHUNK = 128


def subgroup_key(idx: np.ndarray) -> bytes:
    """Canonical byte key of a sorted index array (ambient-relative)."""
    return np.ascontiguousarray(np.asarray(idx, dtype=np.int64).astype(">u4")).tobytes()


class Ambient:
    """A closed element set of Hol(G) with its full multiplication table."""

    def __init__(self, hol: Hol, elements: np.ndarray, bound: int = DEFAULT_AMBIENT_BOUND):
        self.hol = hol
        elements = np.ascontiguousarray(np.asarray(elements, dtype=np.int64))
        size = len(elements)
        if size > bound:
            raise CapacityError(f"ambient group of order {size} exceeds bound {bound}")
        self.elements = elements
        self.size = size
        self.keys = rows_to_keys(elements)
        if np.any(self.keys[1:] <= self.keys[:-1]):
            raise ValidityError("ambient elements must be canonically sorted and distinct")
        self.table = np.empty((size, size), dtype=np.int32)
        g_all = np.ascontiguousarray(hol.g_part(elements))
        m_all = np.ascontiguousarray(hol.mat_part(elements))
        for lo in range(0, size, _TABLE_CHUNK):
            hi = min(lo + _TABLE_CHUNK, size)
            g, m = kernels.mul_cross(g_all[lo:hi], m_all[lo:hi], g_all, m_all, hol.factors)
            rows = np.concatenate([g, m.reshape(len(g), -1)], axis=1)
            self.table[lo:hi] = self.index_of_rows(rows).reshape(hi - lo, size)
        id_pos = np.searchsorted(self.keys, rows_to_keys(hol.identity[None, :]))
        if id_pos >= size or self.keys[id_pos] != rows_to_keys(hol.identity[None, :])[0]:
            raise ValidityError("ambient set does not contain the identity")
        self.id_idx = int(id_pos)
        self.inv = np.argmax(self.table == self.id_idx, axis=1).astype(np.int32)
        self.proj = rank_rows(hol.spec, hol.g_part(elements))

    # -- conversions -------------------------------------------------------

    def index_of_rows(self, rows: np.ndarray) -> np.ndarray:
        qs = rows_to_keys(rows)
        pos = np.searchsorted(self.keys, qs)
        if np.any(pos >= self.size) or np.any(self.keys[np.minimum(pos, self.size - 1)] != qs):
            raise ValidityError("row outside the ambient group (set not closed?)")
        return pos.astype(np.int64)

    def subgroup(self, idx: np.ndarray) -> Subgroup:
        return Subgroup(self.hol, self.elements[np.asarray(idx, dtype=np.int64)], canonical=True)

    def indices_of_subgroup(self, H: Subgroup) -> np.ndarray:
        try:
            return self.index_of_rows(H.elements)
        except ValidityError as exc:
            raise IntegrityError("subgroup is not contained in the ambient group") from exc

    # -- closures ------------------------------------------------------------

    def closure_idx(self, gens, max_size: int | None = None) -> np.ndarray:
        gens = np.asarray(gens, dtype=np.int64)
        out = kernels.closure_table(
            self.table, gens, self.id_idx, self.size if max_size is None else max_size
        )
        if out.size == 0:
            raise CapacityError("closure exceeded the requested bound")
        return out

    def closure_injective_idx(self, gens) -> np.ndarray | None:
        """Closure that aborts on a repeated translation part; None on abort."""
        gens = np.asarray(gens, dtype=np.int64)
        out = kernels.closure_table_injective(
            self.table, gens, self.id_idx, self.proj, self.hol.spec.order
        )
        return None if out.size == 0 else out

    def greedy_generators_idx(self, idx: np.ndarray) -> np.ndarray:
        """Small generating set of a subgroup, chosen in ascending index order."""
        member = np.zeros(self.size, dtype=bool)
        gens: list[int] = []
        have = np.array([self.id_idx], dtype=np.int64)
        member[self.id_idx] = True
        for e in np.asarray(idx, dtype=np.int64):
            if not member[e]:
                gens.append(int(e))
                have = self.closure_idx(gens, max_size=len(idx))
                member[:] = False
                member[have] = True
                if len(have) == len(idx):
                    break
        if not gens:
            gens = [self.id_idx]
        return np.array(gens, dtype=np.int64)

    # -- conjugation ------------------------------------------------------------

    def conj_idx(self, g: int, idx: np.ndarray) -> np.ndarray:
        """g * idx * g^-1, sorted."""
        out = self.table[self.table[g, np.asarray(idx, dtype=np.int64)], self.inv[g]]
        out = np.asarray(out, dtype=np.int64)
        out.sort()
        return out

    def conjugacy_orbit_idx(self, idx: np.ndarray, conj_gens: np.ndarray) -> dict[bytes, np.ndarray]:
        idx = np.asarray(idx, dtype=np.int64)
        orbit = {subgroup_key(idx): idx}
        frontier = [idx]
        while frontier:
            nxt = []
            for cur in frontier:
                for g in conj_gens:
                    img = self.conj_idx(int(g), cur)
                    k = subgroup_key(img)
                    if k not in orbit:
                        orbit[k] = img
                        nxt.append(img)
            frontier = nxt
        return orbit

    def dedup_conjugacy_idx(
        self, subs: list[np.ndarray], conj_gens: np.ndarray
    ) -> list[np.ndarray]:
        """One representative (least canonical key) per conjugacy orbit, sorted."""
        seen: set[bytes] = set()
        reps: dict[bytes, np.ndarray] = {}
        for idx in subs:
            k = subgroup_key(idx)
            if k in seen:
                continue
            orbit = self.conjugacy_orbit_idx(idx, conj_gens)
            seen.update(orbit.keys())
            rep_key = min(orbit.keys())
            reps[rep_key] = orbit[rep_key]
        return [reps[k] for k in sorted(reps)]

    # -- cosets -----------------------------------------------------------------

    def coset_rep_map(self, sub_idx: np.ndarray, within_idx: np.ndarray) -> np.ndarray:
        """Minimal-representative map for left cosets x*sub inside ``within``.

        Returns a full-size array ``rep`` with ``rep[x]`` the least element of
        x's coset for x in ``within`` and -1 elsewhere.
        """
        rep = np.full(self.size, -1, dtype=np.int64)
        sub_idx = np.asarray(sub_idx, dtype=np.int64)
        for x in np.asarray(within_idx, dtype=np.int64):
            if rep[x] < 0:
                coset = self.table[x, sub_idx]
                rep[coset] = x
        return rep

    def power_idx(self, x: int, k: int) -> int:
        out = self.id_idx
        base = int(x)
        while k:
            if k & 1:
                out = int(self.table[out, base])
            base = int(self.table[base, base])
            k >>= 1
        return out

    def element_order_idx(self, x: int) -> int:
        k = 1
        cur = int(x)
        while cur != self.id_idx:
            cur = int(self.table[cur, x])
            k += 1
        return k
