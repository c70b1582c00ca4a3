"""Brace isomorphism classification of regular subgroups.

Two regular subgroups of Hol(G,+) give isomorphic braces exactly when they
are conjugate by an automorphism of (G,+), so classification is orbit
deduplication under Aut-conjugation.  To keep the pairwise work small the
input is first bucketed by conjugation-invariant fingerprints (the
multiplicative group, the kernel of the lambda action, and the quotient by
it), with oversized buckets refined by conjugacy-class length; buckets are
independent and may be processed by parallel workers.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import multiprocessing as mp

import numpy as np

from . import abelian, autgroup
from .abelian import GroupSpec
from .errors import CapacityError, ContractError
from .grouptable import GroupTable
from .holomorph import Hol, Subgroup, aut_conjugator_rows
from .subgroups import conjugation_orbit, is_regular

DEFAULT_REFINE_THRESHOLD = 1000
DEFAULT_ISO_BOUND = 1 << 10


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Isomorphism-invariant profile of a finite group.

    Equal for isomorphic groups; the converse is never assumed.
    """

    order: int
    exponent: int
    abelianization: tuple[int, ...]
    center_order: int
    derived_order: int
    order_histogram: tuple[tuple[int, int], ...]
    class_sizes: tuple[tuple[int, int], ...]

    def text(self) -> str:
        ab = ".".join(str(x) for x in self.abelianization) or "1"
        hist = ",".join(f"{o}x{c}" for o, c in self.order_histogram)
        cls = ",".join(f"{s}x{c}" for s, c in self.class_sizes)
        return (
            f"o{self.order}:e{self.exponent}:ab{ab}:z{self.center_order}"
            f":d{self.derived_order}:h{hist}:c{cls}"
        )


@dataclass(frozen=True, order=True)
class BraceInvariants:
    """Conjugation-invariant bucket key of a regular subgroup."""

    mult_fp: Fingerprint
    kernel_fp: Fingerprint
    quotient_fp: Fingerprint
    class_length: int

    def text(self) -> str:
        return ";".join(
            [self.mult_fp.text(), self.kernel_fp.text(), self.quotient_fp.text(), str(self.class_length)]
        )


def _multiset(values) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for v in values:
        out[int(v)] = out.get(int(v), 0) + 1
    return tuple(sorted(out.items()))


def group_fingerprint(table: GroupTable) -> Fingerprint:
    orders = table.element_orders()
    return Fingerprint(
        order=table.order,
        exponent=table.exponent(),
        abelianization=table.abelian_invariants(),
        center_order=table.center_size(),
        derived_order=int(len(table.derived_ids())),
        order_histogram=_multiset(orders.tolist()),
        class_sizes=_multiset(table.conjugacy_class_sizes()),
    )


def fingerprint_id(fp: Fingerprint) -> str:
    """Short stable identifier used to key report rows."""
    return hashlib.sha256(fp.text().encode()).hexdigest()[:12]


def are_isomorphic(t1: GroupTable, t2: GroupTable, bound: int = DEFAULT_ISO_BOUND) -> bool:
    """Exact isomorphism test by generator-mapping backtracking.

    Seeds candidate images by element order and extends the partial map by
    product closure, so a contradiction is found without building the whole
    bijection.  Intended for fingerprint collisions at small orders.
    """
    if t1.order != t2.order:
        return False
    if t1.order > bound:
        raise CapacityError(f"isomorphism test at order {t1.order} exceeds bound {bound}")
    if group_fingerprint(t1) != group_fingerprint(t2):
        return False
    gens = t1.greedy_generators()
    if not gens:
        return True
    orders1 = t1.element_orders()
    orders2 = t2.element_orders()
    m = t1.order
    candidates = [np.flatnonzero(orders2 == orders1[g]).tolist() for g in gens]

    def extend(mapping: np.ndarray, used: np.ndarray, domain: list[int], g: int, h: int):
        mapping = mapping.copy()
        used = used.copy()
        domain = list(domain)
        pending = [(g, h)]
        while pending:
            a, b = pending.pop()
            if mapping[a] >= 0:
                if mapping[a] != b:
                    return None
                continue
            if used[b]:
                return None
            mapping[a] = b
            used[b] = True
            for x in domain:
                mx = mapping[x]
                pending.append((int(t1.table[x, a]), int(t2.table[mx, b])))
                pending.append((int(t1.table[a, x]), int(t2.table[b, mx])))
            pending.append((int(t1.table[a, a]), int(t2.table[b, b])))
            domain.append(a)
        return mapping, used, domain

    init_map = np.full(m, -1, dtype=np.int64)
    init_used = np.zeros(m, dtype=bool)
    init_map[t1.id_idx] = t2.id_idx
    init_used[t2.id_idx] = True
    state0 = (init_map, init_used, [t1.id_idx])

    def dfs(i: int, state) -> bool:
        if i == len(gens):
            mapping = state[0]
            return bool(np.all(mapping >= 0))
        mapping, used, domain = state
        if mapping[gens[i]] >= 0:
            return dfs(i + 1, state)
        for h in candidates[i]:
            if used[h]:
                continue
            nxt = extend(mapping, used, domain, gens[i], h)
            if nxt is not None and dfs(i + 1, nxt):
                return True
        return False

    return dfs(0, state0)


# -- invariants of a regular subgroup ---------------------------------------------


def _kernel_local_ids(H: Subgroup) -> np.ndarray:
    ident = autgroup.identity_matrix(H.hol.spec)
    mats = H.hol.mat_part(H.elements)
    return np.flatnonzero(np.all(mats == ident, axis=(1, 2)))


def _kernel_table(H: Subgroup) -> GroupTable:
    """The kernel of the lambda action as an abelian group table."""
    spec = H.hol.spec
    kernel_rows = H.hol.g_part(H.elements)[_kernel_local_ids(H)]
    ranks = abelian.rank_rows(spec, kernel_rows)
    local = {int(r): i for i, r in enumerate(ranks)}
    k = len(ranks)
    table = np.empty((k, k), dtype=np.int32)
    factors = spec.factor_array()
    for i in range(k):
        sums = (kernel_rows[i] + kernel_rows) % factors
        table[i] = [local[int(r)] for r in abelian.rank_rows(spec, sums)]
    zero_rank = 0
    return GroupTable(table, local[zero_rank])


def class_length(H: Subgroup, conjugators: np.ndarray | None = None) -> int:
    """Size of the orbit of H under conjugation by Aut(G,+)."""
    if not is_regular(H):
        raise ContractError("class length is defined for regular subgroups")
    if conjugators is None:
        conjugators = aut_conjugator_rows(H.hol)
    return len(conjugation_orbit(H, conjugators))


def brace_invariants(H: Subgroup, conjugators: np.ndarray | None = None) -> BraceInvariants:
    """(multiplicative, kernel, quotient) fingerprints plus the class length."""
    if not is_regular(H):
        raise ContractError("brace invariants require a regular subgroup")
    mult = GroupTable.from_subgroup(H)
    kernel_fp = group_fingerprint(_kernel_table(H))
    quotient_fp = group_fingerprint(mult.quotient(_kernel_local_ids(H)))
    return BraceInvariants(
        mult_fp=group_fingerprint(mult),
        kernel_fp=kernel_fp,
        quotient_fp=quotient_fp,
        class_length=class_length(H, conjugators),
    )


def _bucket_key(H: Subgroup) -> tuple[Fingerprint, Fingerprint, Fingerprint]:
    mult = GroupTable.from_subgroup(H)
    return (
        group_fingerprint(mult),
        group_fingerprint(_kernel_table(H)),
        group_fingerprint(mult.quotient(_kernel_local_ids(H))),
    )


def braces_isomorphic(H1: Subgroup, H2: Subgroup) -> bool:
    """True iff some automorphism of (G,+) conjugates H1 onto H2."""
    if H1.hol.spec != H2.hol.spec:
        raise ContractError("subgroups live in different holomorphs")
    if not (is_regular(H1) and is_regular(H2)):
        raise ContractError("brace isomorphism is defined for regular subgroups")
    if H1.key == H2.key:
        return True
    if _bucket_key(H1) != _bucket_key(H2):
        return False
    orbit = conjugation_orbit(H1, aut_conjugator_rows(H1.hol))
    return H2.key in orbit


# -- bucketed, parallel classification ---------------------------------------------


def _dedup_bucket(
    factors: tuple[int, ...], element_arrays: list[np.ndarray], aut_rows: np.ndarray
) -> list[tuple[np.ndarray, int]]:
    """One bucket: orbit representatives (least key) with their orbit sizes."""
    hol = Hol(GroupSpec(factors))
    subs = [Subgroup(hol, arr, canonical=True) for arr in element_arrays]
    subs.sort(key=lambda s: s.key)
    seen: set[bytes] = set()
    reps: list[tuple[np.ndarray, int]] = []
    for sub in subs:
        if sub.key in seen:
            continue
        orbit = conjugation_orbit(sub, aut_rows)
        seen.update(orbit.keys())
        rep = orbit[min(orbit.keys())]
        reps.append((np.asarray(rep.elements), len(orbit)))
    reps.sort(key=lambda pair: Subgroup(hol, pair[0], canonical=True).key)
    return reps


def classify_braces(
    subgroups: list[Subgroup],
    jobs: int = 1,
    refine_threshold: int = DEFAULT_REFINE_THRESHOLD,
) -> list[tuple[Subgroup, BraceInvariants]]:
    """Partition by invariants, dedup each bucket under Aut-conjugacy.

    Buckets whose size exceeds ``refine_threshold`` are split further by
    conjugacy-class length before the pairwise stage.  Workers handle whole
    buckets; the output is sorted by (invariants, canonical encoding) and
    does not depend on ``jobs``.
    """
    if not subgroups:
        return []
    hol = subgroups[0].hol
    for sub in subgroups:
        if sub.hol.spec != hol.spec:
            raise ContractError("subgroups live in different holomorphs")
        if not is_regular(sub):
            raise ContractError("classification input must be regular subgroups")
    aut_rows = aut_conjugator_rows(hol)

    buckets: dict[tuple, list[Subgroup]] = {}
    for sub in subgroups:
        buckets.setdefault(_bucket_key(sub), []).append(sub)
    refined: dict[tuple, list[Subgroup]] = {}
    for key, members in buckets.items():
        if len(members) > refine_threshold:
            for sub in members:
                refined.setdefault(key + (class_length(sub, aut_rows),), []).append(sub)
        else:
            refined[key] = members

    ordered_keys = sorted(refined.keys(), key=_bucket_sort_key)
    tasks = [
        (hol.spec.factors, [np.asarray(s.elements) for s in refined[k]], aut_rows)
        for k in ordered_keys
    ]
    if jobs <= 1 or len(tasks) <= 1:
        results = [_dedup_bucket(*t) for t in tasks]
    else:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            results = list(pool.map(_dedup_bucket_star, tasks))

    out: list[tuple[Subgroup, BraceInvariants]] = []
    for key, reps in zip(ordered_keys, results):
        mult_fp, kernel_fp, quotient_fp = key[0], key[1], key[2]
        for arr, length in reps:
            rep = Subgroup(hol, arr, canonical=True)
            inv = BraceInvariants(
                mult_fp=mult_fp,
                kernel_fp=kernel_fp,
                quotient_fp=quotient_fp,
                class_length=length,
            )
            out.append((rep, inv))
    out.sort(key=lambda pair: (pair[1], pair[0].key))
    return out


def _bucket_sort_key(key: tuple):
    return tuple(k.text() if isinstance(k, Fingerprint) else k for k in key)


def _dedup_bucket_star(task):
    return _dedup_bucket(*task)
