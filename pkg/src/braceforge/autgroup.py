"""Automorphisms of a finite abelian group as integer matrices.

An automorphism of ``C_{f_1} x ... x C_{f_n}`` is an n x n integer matrix
whose column j holds the coordinates of the image of the j-th standard
generator; entry (i, j) lives modulo ``factors[i]``.  Well-definedness
requires ``factors[i] | m[i][j] * factors[j]``; together with injectivity
this characterises membership in Aut(G,+).
"""

from __future__ import annotations

import math

import numpy as np

from .abelian import GroupSpec, as_element, enumerate_elements, rank_rows
from .errors import CapacityError, ShapeError, ValidityError

DEFAULT_AUT_BRUTE_BOUND = 1 << 22

_INVERSE_CACHE: dict[tuple[tuple[int, ...], bytes], np.ndarray] = {}


def normalize_matrix(spec: GroupSpec, m) -> np.ndarray:
    """Reduce entries row-wise modulo the factor orders; check the shape."""
    arr = np.asarray(m, dtype=np.int64)
    n = spec.rank
    if arr.shape != (n, n):
        raise ShapeError(f"matrix of shape {arr.shape} for spec {spec}")
    return arr % spec.factor_array()[:, None]


def identity_matrix(spec: GroupSpec) -> np.ndarray:
    return np.eye(spec.rank, dtype=np.int64)


def is_well_defined(spec: GroupSpec, m) -> bool:
    """True when the matrix induces a map on the product of cyclic groups."""
    try:
        arr = normalize_matrix(spec, m)
    except ShapeError:
        return False
    for i, fi in enumerate(spec.factors):
        for j, fj in enumerate(spec.factors):
            if arr[i, j] % (fi // math.gcd(fi, fj)) != 0:
                return False
    return True


def apply(spec: GroupSpec, m, a) -> np.ndarray:
    """Image of element ``a`` under the matrix: row-wise modular product."""
    arr = normalize_matrix(spec, m)
    vec = as_element(spec, a)
    return (arr @ vec) % spec.factor_array()


def compose(spec: GroupSpec, m1, m2) -> np.ndarray:
    """Matrix of the composition ``a -> m1(m2(a))``."""
    a1 = normalize_matrix(spec, m1)
    a2 = normalize_matrix(spec, m2)
    return (a1 @ a2) % spec.factor_array()[:, None]


def is_automorphism(spec: GroupSpec, m, bound: int = DEFAULT_AUT_BRUTE_BOUND) -> bool:
    """Well-defined and bijective on the whole group."""
    if not is_well_defined(spec, m):
        return False
    arr = normalize_matrix(spec, m)
    ok, p = spec.is_p_group()
    if ok and spec.is_homocyclic():
        # Over Z/p^e invertibility reduces to the determinant being a unit mod p.
        return _det_mod(arr, p) != 0
    if spec.order > bound:
        raise CapacityError(f"injectivity check over {spec.order} elements exceeds bound")
    elems = enumerate_elements(spec, bound)
    images = (elems @ arr.T) % spec.factor_array()
    return np.unique(rank_rows(spec, images)).size == spec.order


def _det_mod(m: np.ndarray, mod: int) -> int:
    """Determinant modulo a prime, by fraction-free expansion."""
    a = [[int(x) % mod for x in row] for row in m.tolist()]
    n = len(a)
    det = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] % mod != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = (det * a[c][c]) % mod
        inv = pow(a[c][c], -1, mod)
        for r in range(c + 1, n):
            f = (a[r][c] * inv) % mod
            for cc in range(c, n):
                a[r][cc] = (a[r][cc] - f * a[c][cc]) % mod
    return det % mod


def invert(spec: GroupSpec, m) -> np.ndarray:
    """Inverse automorphism matrix.

    Computed from the induced permutation of the group: the inverse's
    column j is the unique preimage of the j-th standard generator.
    Cached per (spec, matrix).
    """
    arr = normalize_matrix(spec, m)
    key = (spec.factors, arr.tobytes())
    hit = _INVERSE_CACHE.get(key)
    if hit is not None:
        return hit
    elems = enumerate_elements(spec)
    images = (elems @ arr.T) % spec.factor_array()
    image_ranks = rank_rows(spec, images)
    lookup = np.full(spec.order, -1, dtype=np.int64)
    lookup[image_ranks] = np.arange(spec.order)
    if np.any(lookup < 0):
        raise ValidityError("matrix is not invertible on the group")
    inv = np.empty((spec.rank, spec.rank), dtype=np.int64)
    for j in range(spec.rank):
        e_j = np.zeros(spec.rank, dtype=np.int64)
        e_j[j] = 1
        inv[:, j] = elems[lookup[int(rank_rows(spec, e_j[None, :])[0])]]
    inv = inv % spec.factor_array()[:, None]
    _INVERSE_CACHE[key] = inv
    return inv


def matrix_text(m: np.ndarray) -> str:
    """Rows separated by ';', entries by ',': e.g. '1,1;0,1'."""
    return ";".join(",".join(str(int(x)) for x in row) for row in np.asarray(m))


def parse_matrix(spec: GroupSpec, text: str) -> np.ndarray:
    try:
        rows = [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise ValidityError(f"bad matrix text {text!r}") from exc
    return normalize_matrix(spec, rows)


def matrix_closure(
    spec: GroupSpec, gens: list[np.ndarray], bound: int = 1 << 16
) -> list[np.ndarray]:
    """All products of the given matrices (a subgroup of Aut at desk scale)."""
    ident = identity_matrix(spec)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    gens = [normalize_matrix(spec, g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(spec, x, g)
                kb = y.tobytes()
                if kb not in seen:
                    if len(seen) >= bound:
                        raise CapacityError(f"matrix closure exceeds bound {bound}")
                    seen[kb] = y
                    nxt.append(y)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


def _reduce_generators(spec: GroupSpec, elements: list[np.ndarray]) -> list[np.ndarray]:
    """Greedy small generating subset of a closed set of matrices."""
    ordered = sorted(elements, key=lambda m: m.tobytes())
    gens: list[np.ndarray] = []
    have = {identity_matrix(spec).tobytes()}
    for m in ordered:
        if m.tobytes() not in have:
            gens.append(m)
            have = {x.tobytes() for x in matrix_closure(spec, gens, bound=len(elements) + 1)}
    return gens


def _unit_group_generators(q: int) -> list[int]:
    """Generators of (Z/q)^* for a prime power q."""
    if q == 1 or q == 2:
        return []
    if q % 2 == 0:
        if q == 4:
            return [3]
        return [3, q - 1]
    phi = q - q // _odd_prime_of(q)
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if _multiplicative_order(g, q, phi) == phi:
            return [g]
    raise ValidityError(f"no primitive root mod {q}")


def _odd_prime_of(q: int) -> int:
    p = 3
    while q % p != 0:
        p += 2
    return p


def _multiplicative_order(g: int, q: int, phi: int) -> int:
    order = phi
    for p in set(_prime_factors(phi)):
        while order % p == 0 and pow(g, order // p, q) == 1:
            order //= p
    return order


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.append(d)
            m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _transvection(spec: GroupSpec, i: int, j: int, value: int) -> np.ndarray:
    m = identity_matrix(spec)
    m[i, j] = value
    return normalize_matrix(spec, m)


def _diagonal_unit(spec: GroupSpec, i: int, value: int) -> np.ndarray:
    m = identity_matrix(spec)
    m[i, i] = value
    return normalize_matrix(spec, m)


def aut_generators(spec: GroupSpec, bound: int = DEFAULT_AUT_BRUTE_BOUND) -> list[np.ndarray]:
    """Generators of the full automorphism group.

    Homocyclic p-groups C_{p^e}^n get the standard generating set of the
    invertible matrices mod p^e (elementary transvections plus diagonal
    unit-group generators).  Other specs fall back to filtering every
    well-defined matrix through :func:`is_automorphism` and greedily
    reducing the survivors to a small generating set.
    """
    ok, _p = spec.is_p_group()
    if ok and spec.is_homocyclic():
        q = spec.factors[0]
        n = spec.rank
        gens = [_transvection(spec, i, j, 1) for i in range(n) for j in range(n) if i != j]
        gens += [_diagonal_unit(spec, 0, u) for u in _unit_group_generators(q)]
        if not gens:
            gens = []
        return gens
    return _reduce_generators(spec, brute_force_automorphisms(spec, bound))


def brute_force_automorphisms(
    spec: GroupSpec, bound: int = DEFAULT_AUT_BRUTE_BOUND
) -> list[np.ndarray]:
    """Every automorphism matrix, by exhausting well-defined matrices."""
    n = spec.rank
    choices: list[list[int]] = []
    total = 1
    for i, fi in enumerate(spec.factors):
        for j, fj in enumerate(spec.factors):
            step = fi // math.gcd(fi, fj)
            vals = list(range(0, fi, step))
            choices.append(vals)
            total *= len(vals)
            if total > bound:
                raise CapacityError(f"{total}+ well-defined matrices exceeds bound {bound}")
    out = []
    m = np.zeros((n, n), dtype=np.int64)

    def fill(pos: int):
        if pos == n * n:
            if is_automorphism(spec, m, bound):
                out.append(m.copy())
            return
        i, j = divmod(pos, n)
        for v in choices[pos]:
            m[i, j] = v
            fill(pos + 1)

    fill(0)
    return out


def aut_order(spec: GroupSpec, bound: int = DEFAULT_AUT_BRUTE_BOUND) -> int:
    """|Aut(G,+)|, via closure of the generators (brute force for small specs)."""
    gens = aut_generators(spec, bound)
    return len(matrix_closure(spec, gens, bound=bound))


def sylow_p_aut_generators(spec: GroupSpec, p: int, bound: int = DEFAULT_AUT_BRUTE_BOUND) -> list[np.ndarray]:
    """Generators of a Sylow p-subgroup of Aut(G,+).

    For a homocyclic p-group C_{p^e}^n this is the full preimage, under
    entry-wise reduction mod p, of the upper unitriangular invertible
    matrices mod p, of order p^((e-1)n^2 + n(n-1)/2).  Other specs use a
    generic normaliser-growth construction inside the brute-forced Aut.
    """
    ok, spec_p = spec.is_p_group()
    if ok and spec.is_homocyclic() and spec_p == p:
        q = spec.factors[0]
        e = q.bit_length() - 1 if p == 2 else round(math.log(q, p))
        n = spec.rank
        gens: list[np.ndarray] = []
        for i in range(n):
            for j in range(i + 1, n):
                gens.append(_transvection(spec, i, j, 1))
        if e > 1:
            for i in range(n):
                for j in range(n):
                    if i > j:
                        gens.append(_transvection(spec, i, j, p))
            units = _unit_group_generators(q) if p == 2 else [1 + p]
            for i in range(n):
                for u in units:
                    gens.append(_diagonal_unit(spec, i, u))
        return _dedup_matrices(gens)
    return _generic_sylow_aut(spec, p, bound)


def _dedup_matrices(mats: list[np.ndarray]) -> list[np.ndarray]:
    seen: dict[bytes, np.ndarray] = {}
    for m in mats:
        seen.setdefault(m.tobytes(), m)
    return list(seen.values())


def _generic_sylow_aut(spec: GroupSpec, p: int, bound: int) -> list[np.ndarray]:
    aut = brute_force_automorphisms(spec, bound)
    aut.sort(key=lambda m: m.tobytes())
    order = len(aut)
    p_part = 1
    while order % p == 0:
        order //= p
        p_part *= p
    gens: list[np.ndarray] = []
    current = {identity_matrix(spec).tobytes()}
    while len(current) < p_part:
        grown = False
        for x in aut:
            if x.tobytes() in current:
                continue
            if not _normalizes(spec, x, current):
                continue
            k = _matrix_order(spec, x)
            m = k
            while m % p == 0:
                m //= p
            y = _matrix_power(spec, x, m)
            if y.tobytes() in current:
                continue
            gens.append(y)
            current = {z.tobytes() for z in matrix_closure(spec, gens, bound=p_part + 1)}
            grown = True
            break
        if not grown:
            raise ValidityError("Sylow construction stalled; inconsistent input")
    return gens


def _normalizes(spec: GroupSpec, x: np.ndarray, members: set[bytes]) -> bool:
    xi = invert(spec, x)
    for mb in members:
        m = np.frombuffer(mb, dtype=np.int64).reshape(spec.rank, spec.rank)
        if compose(spec, compose(spec, x, m), xi).tobytes() not in members:
            return False
    return True


def _matrix_order(spec: GroupSpec, m: np.ndarray) -> int:
    ident = identity_matrix(spec)
    k = 1
    cur = normalize_matrix(spec, m)
    while not np.array_equal(cur, ident):
        cur = compose(spec, cur, m)
        k += 1
        if k > spec.order ** spec.rank:
            raise ValidityError("matrix has no finite order; not an automorphism")
    return k


def _matrix_power(spec: GroupSpec, m: np.ndarray, k: int) -> np.ndarray:
    out = identity_matrix(spec)
    base = normalize_matrix(spec, m)
    while k:
        if k & 1:
            out = compose(spec, out, base)
        base = compose(spec, base, base)
        k >>= 1
    return out
