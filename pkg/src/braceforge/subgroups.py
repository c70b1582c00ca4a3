"""Subgroup predicates and conjugation-orbit utilities on packed encodings.

The table-driven enumeration engine lives in :mod:`braceforge.ambient` and
:mod:`braceforge.layered`; this module holds the representation-independent
operations: closure of generators, the regularity predicates, the two
pruning filters, and deduplication of subgroup lists under a conjugation
group.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .abelian import rank_rows
from .errors import CapacityError, ShapeError
from .holomorph import Hol, Subgroup, rows_to_keys, sort_rows

DEFAULT_CLOSURE_BOUND = 1 << 16
DEFAULT_ORBIT_BOUND = 1 << 22


def closure(hol: Hol, gens: Sequence[np.ndarray] | np.ndarray, bound: int = DEFAULT_CLOSURE_BOUND) -> Subgroup:
    """Smallest subgroup containing the generators.

    Breadth-first product saturation: starting from the identity, multiply
    frontier elements by the generators on the right.  Finiteness makes the
    generated submonoid a subgroup, so inverses are never needed.
    """
    gen_rows = np.atleast_2d(np.asarray(gens, dtype=np.int64)) if len(gens) else np.empty((0, hol.width), dtype=np.int64)
    if gen_rows.size and gen_rows.shape[1] != hol.width:
        raise ShapeError(f"generator width {gen_rows.shape} for spec {hol.spec}")
    known: dict[bytes, np.ndarray] = {rows_to_keys(hol.identity[None, :])[0].tobytes(): hol.identity}
    frontier = hol.identity[None, :]
    if gen_rows.size == 0:
        return Subgroup(hol, hol.identity[None, :])
    while len(frontier):
        prods = hol.mul_cross(frontier, gen_rows)
        keys = rows_to_keys(prods)
        fresh = []
        for row, key in zip(prods, keys):
            kb = key.tobytes()
            if kb not in known:
                known[kb] = row
                fresh.append(row)
                if len(known) > bound:
                    raise CapacityError(f"closure exceeds bound {bound}")
        frontier = np.array(fresh, dtype=np.int64) if fresh else np.empty((0, hol.width), dtype=np.int64)
    return Subgroup(hol, np.array(list(known.values()), dtype=np.int64))


def orbit_of_zero(H: Subgroup) -> np.ndarray:
    """The orbit of 0 under H: exactly the set of translation parts."""
    g_parts = H.hol.g_part(H.elements)
    ranks = np.unique(rank_rows(H.hol.spec, g_parts))
    from .abelian import unrank_elements

    return unrank_elements(H.hol.spec, ranks)


def stabilizer_of_zero(H: Subgroup) -> Subgroup:
    """{x in H : x * 0 = 0}, i.e. the elements with zero translation part."""
    g_parts = H.hol.g_part(H.elements)
    mask = np.all(g_parts == 0, axis=1)
    return Subgroup(H.hol, H.elements[mask], canonical=True)


def is_regular(H: Subgroup) -> bool:
    """|H| = |G| with trivial stabiliser of 0 (surjectivity then follows)."""
    if H.order != H.hol.spec.order:
        return False
    return stabilizer_of_zero(H).order == 1


def transitive_preimage_filter(V: Subgroup) -> bool:
    """True iff the orbit of 0 under V is all of G.

    Applied to the full preimage of an intermediate-layer subgroup this is a
    sound pruning test: a regular subgroup below V would put all of G in V's
    orbit of 0, so a failing V cannot sit above any regular subgroup.
    """
    g_parts = V.hol.g_part(V.elements)
    return np.unique(rank_rows(V.hol.spec, g_parts)).size == V.hol.spec.order


def size_filter(candidate_order: int, remaining_kernel_order: int, target: int) -> bool:
    """Can a subgroup of order ``target`` still project onto this candidate?

    The image of an order-``target`` subgroup modulo a kernel of order
    ``remaining_kernel_order`` has order dividing ``target`` and at least
    ``target / remaining_kernel_order``.
    """
    if candidate_order <= 0 or remaining_kernel_order <= 0 or target <= 0:
        raise ShapeError("size_filter arguments must be positive")
    return target % candidate_order == 0 and candidate_order * remaining_kernel_order >= target


def conjugation_orbit(
    H: Subgroup,
    conjugators: np.ndarray,
    bound: int = DEFAULT_ORBIT_BOUND,
) -> dict[bytes, Subgroup]:
    """Orbit of a subgroup under conjugation by the given generator rows.

    Returns a mapping from canonical keys to subgroups; BFS order is
    deterministic but the mapping should be consumed by key.
    """
    from .holomorph import conjugate_subgroup

    conj_rows = np.atleast_2d(np.asarray(conjugators, dtype=np.int64))
    orbit = {H.key: H}
    frontier = [H]
    while frontier:
        nxt = []
        for sub in frontier:
            for row in conj_rows:
                img = conjugate_subgroup(row, sub)
                if img.key not in orbit:
                    if len(orbit) >= bound:
                        raise CapacityError(f"conjugation orbit exceeds bound {bound}")
                    orbit[img.key] = img
                    nxt.append(img)
        frontier = nxt
    return orbit


def dedup_under_group(
    subgroups: Iterable[Subgroup],
    conjugators: np.ndarray,
    bound: int = DEFAULT_ORBIT_BOUND,
) -> list[Subgroup]:
    """One representative per conjugation orbit.

    The representative of an orbit is the subgroup with lexicographically
    least canonical encoding; the output is sorted by that encoding, so the
    result is independent of input order.
    """
    seen: set[bytes] = set()
    reps: dict[bytes, Subgroup] = {}
    for sub in subgroups:
        if sub.key in seen:
            continue
        orbit = conjugation_orbit(sub, conjugators, bound)
        seen.update(orbit.keys())
        rep_key = min(orbit.keys())
        reps[rep_key] = orbit[rep_key]
    return [reps[k] for k in sorted(reps)]


def merge_deduped(
    first: Sequence[Subgroup],
    second: Sequence[Subgroup],
    conjugators: np.ndarray,
    bound: int = DEFAULT_ORBIT_BOUND,
) -> list[Subgroup]:
    """Merge two lists that are each conjugacy-free into one such list.

    Mirrors the two-list parallel merge step: the union is deduplicated, and
    because each input is already free of conjugate pairs only cross-list
    collisions can occur.
    """
    return dedup_under_group(list(first) + list(second), conjugators, bound)
