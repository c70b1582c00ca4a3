"""Layered subgroup enumeration of a soluble (here: finite p-) group.

The engine walks a normal series S = N_0 >= N_1 >= ... >= N_r = 1 with
elementary abelian factors, carrying at layer i the S-conjugacy classes of
subgroups of S/N_i (stored as their full preimages in S).  A subgroup at
the next layer either (a) contains N_i and is a previous-layer preimage,
(b) lies inside N_i and is a subspace of the factor N_i/N_{i+1}, or (c)
arises as a complement of N_i/B in A/B for a previous-layer subgroup A and
an A-normal proper subspace B.  Two pruning filters run at every layer:
an exact-size divisibility test and the surjective-projection test; the
final layer is re-verified explicitly.

A brute-force search over pruned closures provides the independent oracle
used by the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iter_product
from pathlib import Path

import numpy as np

from .abelian import GroupSpec
from .ambient import Ambient, subgroup_key
from .checkpoint import LayerState, checkpoint_save, latest_checkpoint
from .complements import complements_idx
from .errors import BraceforgeError, CapacityError, ContractError, DomainError, IntegrityError
from .holomorph import Hol, Subgroup, aut_conjugator_rows, sylow_p_hol_generators
from .subgroups import closure, conjugation_orbit, is_regular, size_filter

DEFAULT_ORACLE_BOUND = 1 << 12
DEFAULT_SUBSPACE_DIM_BOUND = 14


class EnumerationPaused(BraceforgeError):
    """Raised when a run stops at a requested layer (after checkpointing it)."""


@dataclass
class NormalSeries:
    """Descending chain S = N_0 >= ... >= N_r = 1, each term normal in S."""

    terms: list[Subgroup]

    def __post_init__(self) -> None:
        if not self.terms or self.terms[-1].order != 1:
            raise ContractError("normal series must end with the trivial subgroup")

    def __len__(self) -> int:
        return len(self.terms)


def _prime_of_order(order: int) -> int:
    if order == 1:
        return 2
    p = 2
    while order % p != 0:
        p += 1
    m = order
    while m % p == 0:
        m //= p
    if m != 1:
        raise DomainError(f"group of order {order} is not a p-group")
    return p


def _p_central_series_idx(amb: Ambient, p: int, s_gens: np.ndarray) -> list[np.ndarray]:
    """Lower p-central series N_{i+1} = [N_i, S] * N_i^p as index arrays."""
    full = np.arange(amb.size, dtype=np.int64)
    series = [full]
    cur = full
    while len(cur) > 1:
        gen_set: set[int] = set()
        for s in s_gens:
            t1 = amb.table[amb.inv[cur], amb.inv[int(s)]]
            t2 = amb.table[t1, cur]
            t3 = amb.table[t2, int(s)]
            gen_set.update(int(x) for x in t3)
        pw = cur.copy()
        for _ in range(p - 1):
            pw = amb.table[pw, cur].astype(np.int64)
        gen_set.update(int(x) for x in pw)
        gen_set.discard(amb.id_idx)
        if not gen_set:
            nxt = np.array([amb.id_idx], dtype=np.int64)
        else:
            nxt = amb.closure_idx(sorted(gen_set))
            # saturate to the normal closure (a no-op for a genuine p-central step)
            while True:
                member = np.zeros(amb.size, dtype=bool)
                member[nxt] = True
                extra: set[int] = set()
                for s in s_gens:
                    img = amb.conj_idx(int(s), nxt)
                    extra.update(int(x) for x in img[~member[img]])
                if not extra:
                    break
                nxt = amb.closure_idx(sorted(set(int(x) for x in nxt) | extra))
        if len(nxt) >= len(cur):
            raise DomainError("series does not descend; input is not a p-group")
        series.append(nxt)
        cur = nxt
    return series


def elementary_abelian_series(S: Subgroup) -> NormalSeries:
    """The lower p-central series of a finite p-group S."""
    if S.order == 1:
        return NormalSeries([S])
    p = _prime_of_order(S.order)
    amb = Ambient(S.hol, S.elements)
    s_gens = amb.greedy_generators_idx(np.arange(amb.size, dtype=np.int64))
    series = _p_central_series_idx(amb, p, s_gens)
    return NormalSeries([amb.subgroup(t) for t in series])


def validate_normal_series(series: NormalSeries) -> bool:
    """Check the elementary-abelian-factors invariant of a series."""
    S = series.terms[0]
    amb = Ambient(S.hol, S.elements)
    s_gens = amb.greedy_generators_idx(np.arange(amb.size, dtype=np.int64))
    idx_terms = [amb.indices_of_subgroup(t) for t in series.terms]
    for i in range(len(idx_terms) - 1):
        n_idx, m_idx = idx_terms[i], idx_terms[i + 1]
        if len(n_idx) % len(m_idx) != 0 or len(n_idx) <= len(m_idx) - 1:
            return False
        member = np.zeros(amb.size, dtype=bool)
        member[m_idx] = True
        big = np.zeros(amb.size, dtype=bool)
        big[n_idx] = True
        for s in s_gens:
            if not np.all(big[amb.conj_idx(int(s), n_idx)]):
                return False
        if len(n_idx) == len(m_idx):
            continue
        p = _prime_of_order(len(n_idx) // len(m_idx))
        for x in n_idx:
            if not member[amb.power_idx(int(x), p)]:
                return False
        for x in n_idx:
            for y in n_idx:
                comm = amb.table[amb.table[amb.table[amb.inv[x], amb.inv[y]], x], y]
                if not member[comm]:
                    return False
    return True


def _subspace_preimages(
    amb: Ambient, N_idx: np.ndarray, M_idx: np.ndarray, p: int
) -> list[np.ndarray]:
    """All subgroups between M and N, i.e. subspaces of the factor N/M.

    Returned as sorted ambient index arrays (preimages), deterministically
    ordered; includes the trivial subspace (M itself) and the full one (N).
    """
    section = len(N_idx) // len(M_idx)
    if section == 1:
        return [np.sort(M_idx)]
    rep_of = amb.coset_rep_map(M_idx, N_idx)
    reps = np.unique(rep_of[N_idx])
    # greedy basis of the factor, with coordinate map built breadth-first
    basis: list[int] = []
    vec_of: dict[int, tuple[int, ...]] = {int(rep_of[amb.id_idx]): ()}
    for r in reps:
        r = int(r)
        if r not in vec_of:
            basis.append(r)
            new_vec: dict[int, tuple[int, ...]] = {}
            for x, v in vec_of.items():
                cur = x
                for t in range(p):
                    new_vec[cur] = v + (t,)
                    cur = int(rep_of[amb.table[cur, r]])
            vec_of = new_vec
    d = len(basis)
    if d > DEFAULT_SUBSPACE_DIM_BOUND:
        raise CapacityError(f"elementary abelian factor of rank {d} exceeds bound")
    elem_of = {v: k for k, v in vec_of.items()}
    coset_of = {int(r): np.sort(amb.table[int(r), M_idx]) for r in reps}

    out: list[np.ndarray] = []
    for rank in range(d + 1):
        for rows in _rref_matrices(d, rank, p):
            members = [elem_of[tuple(int(c) for c in vec)] for vec in _span(rows, p)]
            U = np.sort(np.concatenate([coset_of[x] for x in members]))
            out.append(U)
    out.sort(key=subgroup_key)
    return out


def _rref_matrices(d: int, rank: int, p: int):
    """All reduced row-echelon forms of the given rank over GF(p)^d."""
    if rank == 0:
        yield np.zeros((0, d), dtype=np.int64)
        return
    for pivots in combinations(range(d), rank):
        free_pos = [
            (i, j)
            for i in range(rank)
            for j in range(d)
            if j > pivots[i] and j not in pivots
        ]
        for values in iter_product(range(p), repeat=len(free_pos)):
            m = np.zeros((rank, d), dtype=np.int64)
            for i, c in enumerate(pivots):
                m[i, c] = 1
            for (i, j), v in zip(free_pos, values):
                m[i, j] = v
            yield m


def _span(rows: np.ndarray, p: int):
    if rows.shape[0] == 0:
        yield np.zeros(rows.shape[1], dtype=np.int64)
        return
    for coeffs in iter_product(range(p), repeat=rows.shape[0]):
        yield (np.asarray(coeffs, dtype=np.int64) @ rows) % p


def _passes_filters(amb: Ambient, idx: np.ndarray, kernel_order: int, target: int) -> bool:
    if not size_filter(len(idx) // kernel_order, kernel_order, target):
        return False
    return np.unique(amb.proj[idx]).size == amb.hol.spec.order


def _transition(
    amb: Ambient,
    prev: list[np.ndarray],
    N_idx: np.ndarray,
    M_idx: np.ndarray,
    p: int,
    target: int,
    s_gens: np.ndarray,
    triple_recorder=None,
) -> list[np.ndarray]:
    cand: dict[bytes, np.ndarray] = {}

    def consider(idx: np.ndarray) -> None:
        if _passes_filters(amb, idx, len(M_idx), target):
            cand.setdefault(subgroup_key(idx), idx)

    for A_idx in prev:  # case (a): full preimages from the previous layer
        consider(A_idx)
    subspaces = _subspace_preimages(amb, N_idx, M_idx, p)
    for U in subspaces:  # case (b): subgroups inside the factor
        consider(U)
    proper = [B for B in subspaces if len(B) < len(N_idx)]
    for A_idx in prev:  # case (c): complements of N/B in A/B
        if len(A_idx) <= len(N_idx):
            continue
        a_gens = amb.greedy_generators_idx(A_idx)
        for B_idx in proper:
            u_order = len(B_idx) * len(A_idx) // len(N_idx)
            if not size_filter(u_order // len(M_idx), len(M_idx), target):
                continue
            normal = True
            b_mask = np.zeros(amb.size, dtype=bool)
            b_mask[B_idx] = True
            for g in a_gens:
                if not np.all(b_mask[amb.conj_idx(int(g), B_idx)]):
                    normal = False
                    break
            if not normal:
                continue
            if triple_recorder is not None:
                triple_recorder(amb, A_idx, N_idx, B_idx)
            for U in complements_idx(amb, A_idx, N_idx, B_idx, validate=False):
                consider(U)
    ordered = [cand[k] for k in sorted(cand)]
    return amb.dedup_conjugacy_idx(ordered, s_gens)


def enumerate_layered(
    S: Subgroup,
    target: int,
    checkpoint_dir: str | Path | None = None,
    *,
    resume: bool = False,
    stop_after_layer: int | None = None,
    triple_recorder=None,
) -> list[Subgroup]:
    """All order-``target`` subgroups of S passing the surjectivity filter, up to S-conjugacy.

    Runs the three-case layer recursion over the lower p-central series with
    both pruning filters, optionally checkpointing every finished layer to
    ``checkpoint_dir`` and resuming from the newest valid checkpoint.
    ``triple_recorder(amb, A, N, B)`` is invoked for every complement
    computation, so cross-checks can replay them independently.
    """
    if S.order % target != 0:
        raise ContractError(f"target {target} does not divide |S| = {S.order}")
    p = _prime_of_order(S.order) if S.order > 1 else 2
    amb = Ambient(S.hol, S.elements)
    full = np.arange(amb.size, dtype=np.int64)
    s_gens = amb.greedy_generators_idx(full)
    series = _p_central_series_idx(amb, p, s_gens) if S.order > 1 else [full]
    r = len(series) - 1

    layer = 0
    current: list[np.ndarray] = (
        [full] if _passes_filters(amb, full, len(series[0]), target) else []
    )
    ckpt_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None
    if ckpt_dir is not None:
        if resume:
            state = latest_checkpoint(ckpt_dir)
            if state is not None:
                if state.spec != S.hol.spec:
                    raise IntegrityError(
                        f"checkpoint spec {state.spec} does not match run spec {S.hol.spec}"
                    )
                if state.layer_index > r:
                    raise IntegrityError(
                        f"checkpoint layer {state.layer_index} beyond series length {r}"
                    )
                layer = state.layer_index
                current = [amb.indices_of_subgroup(sub) for sub, _norm in state.classes]
        else:
            for old in sorted(ckpt_dir.glob("layer_*.ckpt")) if ckpt_dir.exists() else []:
                old.unlink()
        if layer == 0:
            _save_layer(amb, S.hol.spec, 0, current, ckpt_dir)

    while layer < r:
        N_idx, M_idx = series[layer], series[layer + 1]
        current = _transition(amb, current, N_idx, M_idx, p, target, s_gens, triple_recorder)
        layer += 1
        if ckpt_dir is not None:
            _save_layer(amb, S.hol.spec, layer, current, ckpt_dir)
        if stop_after_layer is not None and layer >= stop_after_layer and layer < r:
            raise EnumerationPaused(f"paused after layer {layer}")

    # final verification pass: drop anything the filters let through
    out = []
    for idx in current:
        if len(idx) != target:
            continue
        sub = amb.subgroup(idx)
        if np.unique(amb.proj[idx]).size == S.hol.spec.order:
            out.append(sub)
    return out


def _save_layer(
    amb: Ambient, spec: GroupSpec, layer: int, classes: list[np.ndarray], ckpt_dir: Path
) -> None:
    records = []
    for idx in classes:
        gens_idx = amb.greedy_generators_idx(idx)
        gens_rows = amb.elements[gens_idx]
        records.append((amb.subgroup(idx), gens_rows))
    state = LayerState(
        spec=spec,
        layer_index=layer,
        classes=[(sub, None) for sub, _g in records],
    )
    checkpoint_save(state, ckpt_dir, generating_rows=[g for _s, g in records])


def regular_subgroups_of_sylow(S: Subgroup) -> list[Subgroup]:
    """All regular subgroups of S by pruned exhaustive closure (the oracle core).

    Breadth-first search over subgroups generated by extending known ones a
    coset representative at a time; closures abort as soon as the stabiliser
    of 0 is forced to be non-trivial, since subgroups of regular subgroups
    act freely.  Uses only closure and the regularity predicate.
    """
    hol = S.hol
    g_order = hol.spec.order
    amb = Ambient(hol, S.elements)
    trivial = np.array([amb.id_idx], dtype=np.int64)
    nodes: dict[bytes, tuple[np.ndarray, list[int]]] = {subgroup_key(trivial): (trivial, [])}
    queue = [(trivial, [])]
    found: dict[bytes, np.ndarray] = {}
    if len(trivial) == g_order:
        found[subgroup_key(trivial)] = trivial
    head = 0
    while head < len(queue):
        idx, gens = queue[head]
        head += 1
        if len(idx) >= g_order:
            continue
        member = np.zeros(amb.size, dtype=bool)
        member[idx] = True
        coset_rep = amb.table[:, idx].min(axis=1)
        reps = np.unique(coset_rep[~member])
        for x in reps:
            ext = amb.closure_injective_idx(gens + [int(x)])
            if ext is None:
                continue
            k = subgroup_key(ext)
            if k in nodes:
                continue
            nodes[k] = (ext, gens + [int(x)])
            queue.append((ext, gens + [int(x)]))
            if len(ext) == g_order:
                found[k] = ext
    out = []
    for k in sorted(found):
        sub = amb.subgroup(found[k])
        if is_regular(sub):
            out.append(sub)
    return out


def brute_force_regular_oracle(
    spec: GroupSpec, p: int, sylow_bound: int = DEFAULT_ORACLE_BOUND
) -> list[Subgroup]:
    """All regular subgroups of Hol(G), deduplicated by canonical encoding.

    Finds every regular subgroup of a Sylow p-subgroup by exhaustive pruned
    closure, then saturates the list under conjugation by Aut(G,+).  Fully
    independent of the layered engine.
    """
    ok, spec_p = spec.is_p_group()
    if not ok or spec_p != p:
        raise ContractError(f"spec {spec} is not a {p}-group")
    hol = Hol(spec)
    gens = sylow_p_hol_generators(hol, p)
    S = closure(hol, gens, bound=sylow_bound)
    in_sylow = regular_subgroups_of_sylow(S)
    aut_rows = aut_conjugator_rows(hol)
    saturated: dict[bytes, Subgroup] = {}
    for H in in_sylow:
        if H.key in saturated:
            continue
        saturated.update(conjugation_orbit(H, aut_rows))
    return [saturated[k] for k in sorted(saturated)]
