"""Complements of an elementary abelian section N/B inside A/B.

Given B <= N <= A with B and N normal in A and N/B elementary abelian, a
complement is a subgroup U with U*N = A and U cap N = B.  Writing elements
of a candidate as t(q)*v(q) over a transversal t of Q = A/N, closure under
right multiplication by a generating set of Q is an inhomogeneous linear
system over GF(p) in the correction vectors v(q); its solutions are exactly
the complements (the homogeneous part is the 1-cocycle space, coboundaries
giving the N-conjugates).  A pruned brute-force search over closures serves
as an independent cross-check.
"""

from __future__ import annotations

from itertools import product as iter_product

import numpy as np

from .ambient import Ambient, subgroup_key
from .errors import CapacityError, ContractError, IntegrityError
from .grouptable import GroupTable
from .holomorph import Subgroup

DEFAULT_SOLUTION_BOUND = 1 << 20


def _mask_of(size: int, idx: np.ndarray) -> np.ndarray:
    m = np.zeros(size, dtype=bool)
    m[idx] = True
    return m


def _is_subset(inner: np.ndarray, outer_mask: np.ndarray) -> bool:
    return bool(np.all(outer_mask[inner]))


def _is_normal_under(amb: Ambient, sub_idx: np.ndarray, gens: np.ndarray) -> bool:
    mask = _mask_of(amb.size, sub_idx)
    for g in gens:
        if not np.all(mask[amb.conj_idx(int(g), sub_idx)]):
            return False
    return True


def _prime_power(m: int) -> tuple[int, int]:
    p = 2
    while m % p != 0:
        p += 1
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise ContractError("section is not elementary abelian (order not a prime power)")
    return p, e


def _validate_triple(amb: Ambient, A_idx, N_idx, B_idx) -> None:
    A_mask = _mask_of(amb.size, A_idx)
    N_mask = _mask_of(amb.size, N_idx)
    if not _is_subset(B_idx, N_mask) or not _is_subset(N_idx, A_mask):
        raise ContractError("expected B <= N <= A")
    A_gens = amb.greedy_generators_idx(A_idx)
    if not _is_normal_under(amb, B_idx, A_gens):
        raise ContractError("B must be normal in A")
    if not _is_normal_under(amb, N_idx, A_gens):
        raise ContractError("N must be normal in A")
    if len(N_idx) % len(B_idx) != 0:
        raise ContractError("B must be a subgroup of N")
    section = len(N_idx) // len(B_idx)
    if section > 1:
        p, _ = _prime_power(section)
        rep = amb.coset_rep_map(B_idx, N_idx)
        reps = np.unique(rep[N_idx])
        B_mask = _mask_of(amb.size, B_idx)
        for r in reps:
            if not B_mask[amb.power_idx(int(r), p)]:
                raise ContractError("N/B has an element of order > p")
        for r1 in reps:
            for r2 in reps:
                comm = amb.table[
                    amb.table[amb.table[amb.inv[r1], amb.inv[r2]], r1], r2
                ]
                if not B_mask[comm]:
                    raise ContractError("N/B is not abelian")


def _local_table(amb: Ambient, members: np.ndarray, sub_idx: np.ndarray):
    """Quotient members/sub as a GroupTable plus bookkeeping arrays.

    Returns (table group, reps, local_of_rep dict, rep_of full-size array).
    """
    rep_of = amb.coset_rep_map(sub_idx, members)
    reps = np.unique(rep_of[members])
    local = {int(r): i for i, r in enumerate(reps)}
    tbl = np.empty((len(reps), len(reps)), dtype=np.int32)
    for i, r1 in enumerate(reps):
        prods = rep_of[amb.table[r1, reps]]
        tbl[i] = [local[int(x)] for x in prods]
    id_local = local[int(rep_of[amb.id_idx])]
    return GroupTable(tbl, id_local), reps, local, rep_of


def _elementary_vector_space(H: GroupTable, V_ids: list[int], p: int):
    """Basis and discrete-log map of an elementary abelian subgroup of H."""
    span = {H.id_idx}
    basis: list[int] = []
    for v in sorted(V_ids):
        if v not in span:
            basis.append(v)
            new_span = set()
            for x in span:
                cur = x
                for _ in range(p):
                    new_span.add(cur)
                    cur = int(H.table[cur, v])
            span = new_span
    d = len(basis)
    vec_of: dict[int, tuple[int, ...]] = {}
    for coords in iter_product(range(p), repeat=d):
        x = H.id_idx
        for b, c in zip(basis, coords):
            for _ in range(c):
                x = int(H.table[x, b])
        vec_of[x] = coords
    elem_of = {v: k for k, v in vec_of.items()}
    return basis, vec_of, elem_of, d


def solve_gfp(A: np.ndarray, b: np.ndarray, p: int):
    """Solve A x = b over GF(p); returns (particular, nullspace basis) or None."""
    A = A.astype(np.int64) % p
    b = b.astype(np.int64) % p
    rows, cols = A.shape
    aug = np.concatenate([A, b[:, None]], axis=1)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_rows = np.nonzero(aug[r:, c])[0]
        if pivot_rows.size == 0:
            continue
        pr = r + int(pivot_rows[0])
        if pr != r:
            aug[[r, pr]] = aug[[pr, r]]
        inv = pow(int(aug[r, c]), -1, p)
        aug[r] = (aug[r] * inv) % p
        nz = np.nonzero(aug[:, c])[0]
        nz = nz[nz != r]
        if nz.size:
            aug[nz] = (aug[nz] - np.outer(aug[nz, c], aug[r])) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if np.any(aug[r:, cols] % p != 0):
        return None
    particular = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        particular[c] = aug[i, cols]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        vec = np.zeros(cols, dtype=np.int64)
        vec[fc] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-aug[i, fc]) % p
        basis.append(vec)
    return particular, basis


def complements_idx(
    amb: Ambient,
    A_idx: np.ndarray,
    N_idx: np.ndarray,
    B_idx: np.ndarray,
    validate: bool = True,
    solution_bound: int = DEFAULT_SOLUTION_BOUND,
) -> list[np.ndarray]:
    """All complements of N/B in A/B, as sorted ambient index arrays."""
    A_idx = np.asarray(A_idx, dtype=np.int64)
    N_idx = np.asarray(N_idx, dtype=np.int64)
    B_idx = np.asarray(B_idx, dtype=np.int64)
    if validate:
        _validate_triple(amb, A_idx, N_idx, B_idx)
    if len(N_idx) == len(B_idx):
        return [np.array(sorted(A_idx), dtype=np.int64)]
    p, _ = _prime_power(len(N_idx) // len(B_idx))

    H, reps, local, rep_of = _local_table(amb, A_idx, B_idx)
    V_ids = sorted({local[int(rep_of[x])] for x in N_idx})
    basis, vec_of, elem_of, d = _elementary_vector_space(H, V_ids, p)

    Q = H.quotient(np.asarray(V_ids, dtype=np.int64))
    v_rep_of = H.coset_rep_map(np.asarray(V_ids, dtype=np.int64))
    q_reps = np.unique(v_rep_of)
    q_local = {int(r): i for i, r in enumerate(q_reps)}
    # transversal Q -> H, normalised so the identity coset maps to the identity
    transversal = [int(r) for r in q_reps]
    q_id = q_local[int(v_rep_of[H.id_idx])]
    transversal[q_id] = H.id_idx
    nq = len(q_reps)

    gens = Q.greedy_generators()
    # conjugation action of t(s) on V, as (d, d) matrices over GF(p)
    act = {}
    for s in gens:
        ts = transversal[s]
        ts_inv = int(H.inv[ts])
        mat = np.zeros((d, d), dtype=np.int64)
        for i, bvec in enumerate(basis):
            img = int(H.table[int(H.table[ts_inv, bvec]), ts])
            mat[i] = vec_of[img]
        act[s] = mat

    def factor_vec(q: int, s: int) -> np.ndarray:
        """dlog of t(qs)^-1 t(q) t(s)."""
        qs = int(Q.table[q, s])
        val = int(H.table[int(H.table[int(H.inv[transversal[qs]]), transversal[q]]), transversal[s]])
        return np.array(vec_of[val], dtype=np.int64)

    # unknowns: one GF(p)^d block per q != q_id
    unknown_pos = {q: i for i, q in enumerate(qi for qi in range(nq) if qi != q_id)}
    ncols = len(unknown_pos) * d
    rows: list[np.ndarray] = []
    rhs: list[int] = []
    for q in range(nq):
        for s in gens:
            qs = int(Q.table[q, s])
            cvec = factor_vec(q, s)
            for comp in range(d):
                row = np.zeros(ncols, dtype=np.int64)
                if qs != q_id:
                    row[unknown_pos[qs] * d + comp] += 1
                if q != q_id:
                    base = unknown_pos[q] * d
                    row[base : base + d] = (row[base : base + d] - act[s][:, comp]) % p
                if s != q_id:
                    row[unknown_pos[s] * d + comp] = (row[unknown_pos[s] * d + comp] - 1) % p
                rows.append(row % p)
                rhs.append(int(cvec[comp]) % p)
    if ncols == 0:
        # Q is trivial: no equations either, and the sole candidate is B itself
        particular, null_basis = np.zeros(0, dtype=np.int64), []
    else:
        solution = solve_gfp(np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64), p)
        if solution is None:
            return []
        particular, null_basis = solution
    count = p ** len(null_basis)
    if count > solution_bound:
        raise CapacityError(f"{count} complements exceed bound {solution_bound}")

    # expand each local H element back to its B-coset inside the ambient group
    coset_members = {i: np.sort(amb.table[int(r), B_idx]) for i, r in enumerate(reps)}
    out = []
    for coeffs in iter_product(range(p), repeat=len(null_basis)):
        sol = particular.copy()
        for c, vec in zip(coeffs, null_basis):
            sol = (sol + c * vec) % p
        members = []
        ok = True
        for q in range(nq):
            if q == q_id:
                vecq = (0,) * d
            else:
                base = unknown_pos[q] * d
                vecq = tuple(int(x) for x in sol[base : base + d])
            h = int(H.table[transversal[q], elem_of[vecq]])
            members.append(coset_members[h])
        U = np.sort(np.concatenate(members))
        out.append(U)
    out.sort(key=subgroup_key)
    if validate:
        N_mask = _mask_of(amb.size, N_idx)
        B_sorted = np.sort(B_idx)
        for U in out:
            inter = U[N_mask[U]]
            if not np.array_equal(inter, B_sorted):
                raise ContractError("complement validation failed: U cap N != B")
    return out


def brute_force_complements_idx(
    amb: Ambient, A_idx: np.ndarray, N_idx: np.ndarray, B_idx: np.ndarray
) -> list[np.ndarray]:
    """Complements by pruned exhaustive closure, independent of the cocycle path.

    Grows subgroups from B by one generator at a time, discarding closures
    that leave A, exceed the complement order, or meet N outside B (any
    subgroup of a complement intersects N in exactly B).
    """
    A_idx = np.asarray(A_idx, dtype=np.int64)
    N_idx = np.asarray(N_idx, dtype=np.int64)
    B_idx = np.asarray(B_idx, dtype=np.int64)
    target = len(B_idx) * len(A_idx) // len(N_idx)
    N_mask = _mask_of(amb.size, N_idx)
    A_mask = _mask_of(amb.size, A_idx)
    B_sorted = np.sort(B_idx)

    def n_part_is_B(idx: np.ndarray) -> bool:
        return np.array_equal(idx[N_mask[idx]], B_sorted)

    B_gens = amb.greedy_generators_idx(B_idx)
    start = np.sort(B_idx)
    nodes = {subgroup_key(start): (start, [int(g) for g in B_gens])}
    queue = [(start, [int(g) for g in B_gens])]
    results: dict[bytes, np.ndarray] = {}
    if len(start) == target and n_part_is_B(start):
        results[subgroup_key(start)] = start
    while queue:
        idx, gens = queue.pop(0)
        if len(idx) >= target:
            continue
        member = _mask_of(amb.size, idx)
        reps = np.unique(amb.table[:, idx].min(axis=1)[A_mask & ~member & ~N_mask])
        for x in reps:
            try:
                ext = amb.closure_idx(gens + [int(x)], max_size=target)
            except CapacityError:
                continue
            if not np.all(A_mask[ext]) or not n_part_is_B(ext):
                continue
            k = subgroup_key(ext)
            if k in nodes:
                continue
            nodes[k] = (ext, gens + [int(x)])
            queue.append((ext, gens + [int(x)]))
            if len(ext) == target:
                results[k] = ext
    return [results[k] for k in sorted(results)]


def _triple_ambient(A: Subgroup, N: Subgroup, B: Subgroup):
    if not (A.hol.spec == N.hol.spec == B.hol.spec):
        raise ContractError("A, N, B must live in the same holomorph")
    amb = Ambient(A.hol, A.elements, bound=1 << 13)
    try:
        return amb, amb.indices_of_subgroup(A), amb.indices_of_subgroup(N), amb.indices_of_subgroup(B)
    except IntegrityError as exc:
        raise ContractError("expected B <= N <= A") from exc


def complements(A: Subgroup, N: Subgroup, B: Subgroup) -> list[Subgroup]:
    """All subgroups U of A with U*N = A and U cap N = B (cocycle method)."""
    amb, ai, ni, bi = _triple_ambient(A, N, B)
    return [amb.subgroup(u) for u in complements_idx(amb, ai, ni, bi)]


def complements_brute_force(A: Subgroup, N: Subgroup, B: Subgroup) -> list[Subgroup]:
    """Cross-check oracle for :func:`complements`."""
    amb, ai, ni, bi = _triple_ambient(A, N, B)
    _validate_triple(amb, ai, ni, bi)
    return [amb.subgroup(u) for u in brute_force_complements_idx(amb, ai, ni, bi)]
