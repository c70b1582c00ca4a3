"""Pure-numpy reference implementations of the hot kernels.

Semantics are shared with the numba backend; both must return identical
(sorted) results for all inputs.  An element of the holomorph is packed as
an int64 row ``[g | M]`` with ``g`` the translation part (n entries) and
``M`` the automorphism matrix (n*n entries, row-major); row ``i`` of ``M``
and coordinate ``i`` of ``g`` live modulo ``factors[i]``.
"""

from __future__ import annotations

import numpy as np


def mul_rows(ga, ma, gb, mb, factors):
    """Row-wise holomorph product (g_a + M_a g_b, M_a M_b) of aligned batches."""
    g = (ga + np.einsum("rij,rj->ri", ma, gb)) % factors
    m = np.einsum("rik,rkj->rij", ma, mb) % factors[None, :, None]
    return g, m


def mul_cross(ga, ma, gb, mb, factors):
    """All-pairs holomorph products; output row a*len(b)+b is x_a * y_b."""
    n = factors.shape[0]
    g = (ga[:, None, :] + np.einsum("aij,bj->abi", ma, gb)) % factors
    m = np.einsum("aik,bkj->abij", ma, mb) % factors[None, None, :, None]
    return g.reshape(-1, n), m.reshape(-1, n, n)


def act_rows(g, m, h, factors):
    """Affine action of packed elements on a single point h."""
    return (g + np.einsum("rij,j->ri", m, h)) % factors


def closure_table(table, gens, id_idx, max_size):
    """Indices of the subgroup generated by ``gens`` inside a multiplication table.

    Breadth-first product saturation starting from the identity, multiplying
    on the right by generators.  Returns a sorted index array, or an empty
    array when the closure would exceed ``max_size``.
    """
    n = table.shape[0]
    member = np.zeros(n, dtype=bool)
    member[id_idx] = True
    count = 1
    frontier = np.array([id_idx], dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return np.array([id_idx], dtype=np.int64)
    while frontier.size:
        prods = np.unique(table[np.ix_(frontier, gens)].ravel())
        new = prods[~member[prods]]
        if new.size:
            count += new.size
            if count > max_size:
                return np.empty(0, dtype=np.int64)
            member[new] = True
        frontier = new
    return np.flatnonzero(member).astype(np.int64)


def closure_table_injective(table, gens, id_idx, proj, n_proj):
    """Closure as above, aborting as soon as two members share a translation part.

    ``proj[i]`` is the rank of element i's translation part.  Two distinct
    members with equal translation part force a non-trivial stabiliser of 0
    in the generated subgroup, so the search gives up early and returns an
    empty array.  A completed closure therefore has at most ``n_proj``
    elements and acts freely on 0's orbit.
    """
    n = table.shape[0]
    member = np.zeros(n, dtype=bool)
    seen_proj = np.full(n_proj, -1, dtype=np.int64)
    member[id_idx] = True
    seen_proj[proj[id_idx]] = id_idx
    frontier = np.array([id_idx], dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return np.array([id_idx], dtype=np.int64)
    while frontier.size:
        prods = np.unique(table[np.ix_(frontier, gens)].ravel())
        new = prods[~member[prods]]
        if new.size:
            qs = proj[new]
            if np.unique(qs).size != qs.size or np.any(seen_proj[qs] >= 0):
                return np.empty(0, dtype=np.int64)
            seen_proj[qs] = new
            member[new] = True
        frontier = new
    return np.flatnonzero(member).astype(np.int64)
