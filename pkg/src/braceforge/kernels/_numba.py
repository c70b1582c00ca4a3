"""Numba-jitted implementations of the hot kernels.

Mirrors ``_numpy`` exactly; see that module for the packed-row layout and
the output contracts.  Keep the two backends in lockstep.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def mul_rows(ga, ma, gb, mb, factors):
    r, n = ga.shape
    g = np.empty_like(ga)
    m = np.empty_like(ma)
    for t in range(r):
        for i in range(n):
            acc = ga[t, i]
            for j in range(n):
                acc += ma[t, i, j] * gb[t, j]
            g[t, i] = acc % factors[i]
            for j in range(n):
                acc2 = 0
                for kk in range(n):
                    acc2 += ma[t, i, kk] * mb[t, kk, j]
                m[t, i, j] = acc2 % factors[i]
    return g, m


@njit(cache=True)
def mul_cross(ga, ma, gb, mb, factors):
    a = ga.shape[0]
    b = gb.shape[0]
    n = ga.shape[1]
    g = np.empty((a * b, n), dtype=ga.dtype)
    m = np.empty((a * b, n, n), dtype=ma.dtype)
    for s in range(a):
        for t in range(b):
            r = s * b + t
            for i in range(n):
                acc = ga[s, i]
                for j in range(n):
                    acc += ma[s, i, j] * gb[t, j]
                g[r, i] = acc % factors[i]
                for j in range(n):
                    acc2 = 0
                    for kk in range(n):
                        acc2 += ma[s, i, kk] * mb[t, kk, j]
                    m[r, i, j] = acc2 % factors[i]
    return g, m


@njit(cache=True)
def act_rows(g, m, h, factors):
    r, n = g.shape
    out = np.empty((r, n), dtype=g.dtype)
    for t in range(r):
        for i in range(n):
            acc = g[t, i]
            for j in range(n):
                acc += m[t, i, j] * h[j]
            out[t, i] = acc % factors[i]
    return out


@njit(cache=True)
def closure_table(table, gens, id_idx, max_size):
    if gens.shape[0] == 0:
        out = np.empty(1, dtype=np.int64)
        out[0] = id_idx
        return out
    n = table.shape[0]
    member = np.zeros(n, dtype=np.uint8)
    queue = np.empty(max_size + 1, dtype=np.int64)
    member[id_idx] = 1
    queue[0] = id_idx
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for gi in range(gens.shape[0]):
            y = table[x, gens[gi]]
            if member[y] == 0:
                if tail >= max_size:
                    return np.empty(0, dtype=np.int64)
                member[y] = 1
                queue[tail] = y
                tail += 1
    out = queue[:tail].copy()
    out.sort()
    return out


@njit(cache=True)
def closure_table_injective(table, gens, id_idx, proj, n_proj):
    if gens.shape[0] == 0:
        out = np.empty(1, dtype=np.int64)
        out[0] = id_idx
        return out
    n = table.shape[0]
    member = np.zeros(n, dtype=np.uint8)
    seen_proj = np.full(n_proj, -1, dtype=np.int64)
    queue = np.empty(n_proj + 1, dtype=np.int64)
    member[id_idx] = 1
    seen_proj[proj[id_idx]] = id_idx
    queue[0] = id_idx
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for gi in range(gens.shape[0]):
            y = table[x, gens[gi]]
            if member[y] == 0:
                q = proj[y]
                if seen_proj[q] >= 0:
                    return np.empty(0, dtype=np.int64)
                seen_proj[q] = y
                member[y] = 1
                queue[tail] = y
                tail += 1
    out = queue[:tail].copy()
    out.sort()
    return out
