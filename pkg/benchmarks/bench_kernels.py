"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two workloads that dominate real runs: batched holomorph
products (table construction, conjugation orbits) and table-closure BFS
(the subgroup searches).  Both backends are imported directly, so the
BRACEFORGE_BACKEND selection is irrelevant here.

    python3 benchmarks/bench_kernels.py --group 4,4 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from braceforge.abelian import GroupSpec
from braceforge.ambient import Ambient
from braceforge.holomorph import Hol, sylow_p_hol_generators
from braceforge.kernels import _numba, _numpy
from braceforge.subgroups import closure


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mul_cross(amb, backend, repeat):
    g = np.ascontiguousarray(amb.hol.g_part(amb.elements))
    m = np.ascontiguousarray(amb.hol.mat_part(amb.elements))
    block = min(128, amb.size)

    def run():
        backend.mul_cross(g[:block], m[:block], g, m, amb.hol.factors)

    run()  # warm-up (and JIT compile for numba)
    return _time(run, repeat), block * amb.size


def bench_closures(amb, backend, repeat):
    rng = np.random.default_rng(0)
    gen_sets = [
        rng.integers(0, amb.size, size=rng.integers(1, 4)).astype(np.int64)
        for _ in range(500)
    ]

    def run():
        for gens in gen_sets:
            backend.closure_table(amb.table, gens, amb.id_idx, amb.size)

    run()
    return _time(run, repeat), len(gen_sets)


def bench_injective_closures(amb, backend, repeat):
    rng = np.random.default_rng(1)
    n_proj = amb.hol.spec.order
    gen_sets = [
        rng.integers(0, amb.size, size=rng.integers(1, 4)).astype(np.int64)
        for _ in range(500)
    ]

    def run():
        for gens in gen_sets:
            backend.closure_table_injective(amb.table, gens, amb.id_idx, amb.proj, n_proj)

    run()
    return _time(run, repeat), len(gen_sets)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--group", default="4,4", help="group spec, e.g. 4,4")
    parser.add_argument("--prime", type=int, default=None)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    spec = GroupSpec.parse(args.group)
    p = args.prime or spec.is_p_group()[1]
    hol = Hol(spec)
    S = closure(hol, sylow_p_hol_generators(hol, p))
    amb = Ambient(hol, S.elements)
    print(f"group={spec}  |Sylow_{p}(Hol)|={amb.size}")
    print(f"{'benchmark':28s}{'numpy':>12s}{'numba':>12s}{'speedup':>10s}")
    benches = [
        ("mul_cross (block x all)", bench_mul_cross),
        ("closure_table x500", bench_closures),
        ("closure_injective x500", bench_injective_closures),
    ]
    for name, bench in benches:
        t_np, _units = bench(amb, _numpy, args.repeat)
        t_nb, _units = bench(amb, _numba, args.repeat)
        print(f"{name:28s}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
