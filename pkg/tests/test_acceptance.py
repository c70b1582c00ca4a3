"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criteria (exact tolerances):
  1. Layered pipeline equals the brute-force oracle, classified, on ten specs.
  2. Exact class counts at small orders.
  3. Every emitted brace satisfies a(b+c) = ab - a + ac over all triples.
  4. Every emitted lambda table satisfies both cocycle identities on all pairs.
  5. 1000 seeded random subgroups: regularity characterisations + orbit-stabiliser.
  6. Conjugates of oracle subgroups are regular and Aut-conjugate (explicit witness).
  7. Cocycle complements equal brute-force complements on all run triples (order <= 16).
  8. jobs=1 vs jobs=8 byte-identical; killed-and-resumed run byte-identical.
  9. Sum of class lengths equals the number of distinct regular subgroups.
"""

from __future__ import annotations

import signal
import subprocess
import sys
import time

import numpy as np
import pytest

from braceforge import autgroup
from braceforge.abelian import GroupSpec
from braceforge.ambient import Ambient, subgroup_key
from braceforge.braces import brace_from_regular, lambda_table, verify_brace, verify_lambda_cocycle
from braceforge.classify import classify_braces
from braceforge.classlist import write_class_list
from braceforge.cli import main as cli_main
from braceforge.complements import brute_force_complements_idx, complements, complements_brute_force, complements_idx
from braceforge.holomorph import Hol, aut_conjugator_rows, conjugate_subgroup, translations_subgroup
from braceforge.layered import EnumerationPaused, enumerate_layered
from braceforge.subgroups import closure, is_regular, orbit_of_zero, stabilizer_of_zero

from conftest import ORACLE_SPECS


def _report(criterion: int, name: str, detail: str, t0: float) -> None:
    print(f"ACCEPTANCE {criterion} ({name}): PASS [{detail}] {time.time() - t0:.1f}s")


def test_criterion_1_oracle_equivalence(spec_run):
    t0 = time.time()
    details = []
    for text in ORACLE_SPECS:
        t1 = time.time()
        run = spec_run(text)
        pipe_keys = {sub.key for sub, _inv in run.pipeline_rows}
        oracle_keys = {sub.key for sub, _inv in run.oracle_rows}
        assert pipe_keys == oracle_keys, f"pipeline != oracle for {text}"
        details.append(f"{text}:{len(pipe_keys)}cls/{time.time() - t1:.1f}s")
    _report(1, "oracle equivalence", " ".join(details), t0)


def test_criterion_2_small_counts(spec_run):
    t0 = time.time()
    assert len(spec_run("4").pipeline_rows) == 2
    assert len(spec_run("2,2").pipeline_rows) == 2
    total_order_4 = len(spec_run("4").pipeline_rows) + len(spec_run("2,2").pipeline_rows)
    assert total_order_4 == 4
    for prime_spec in ["2", "3", "5", "7"]:
        spec = GroupSpec.parse(prime_spec)
        p = spec.is_p_group()[1]
        hol = Hol(spec)
        from braceforge.holomorph import sylow_p_hol_generators

        S = closure(hol, sylow_p_hol_generators(hol, p))
        assert len(classify_braces(enumerate_layered(S, spec.order))) == 1
    _report(2, "small counts", "C4:2 C2xC2:2 total-order-4:4 primes:1", t0)


def test_criterion_3_brace_axioms(spec_run):
    t0 = time.time()
    checked = 0
    for text in ORACLE_SPECS:
        for rep, _inv in spec_run(text).pipeline_rows:
            brace = brace_from_regular(lambda_table(rep))
            assert verify_brace(brace), f"brace law failed for a class of {text}"
            checked += 1
    _report(3, "brace axioms", f"{checked} braces, all triples", t0)


def test_criterion_4_cocycle_identities(spec_run):
    t0 = time.time()
    checked = 0
    for text in ORACLE_SPECS:
        for rep, _inv in spec_run(text).pipeline_rows:
            assert verify_lambda_cocycle(lambda_table(rep)), f"cocycle failed for {text}"
            checked += 1
    _report(4, "cocycle identities", f"{checked} lambda tables, all pairs", t0)


def test_criterion_5_regularity_characterizations():
    t0 = time.time()
    spec = GroupSpec((2, 4))
    hol = Hol(spec)
    aut_mats = autgroup.matrix_closure(spec, autgroup.aut_generators(spec))
    full_hol = closure(
        hol,
        [hol.translation([1, 0]), hol.translation([0, 1])]
        + [hol.from_aut(m) for m in autgroup.aut_generators(spec)],
    )
    assert full_hol.order == spec.order * len(aut_mats)
    elems = full_hol.elements
    g_order = spec.order
    points = [np.array(c) for c in np.ndindex(*spec.factors)]
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(1, 4))
        H = closure(hol, elems[rng.integers(0, len(elems), size=k)])
        order_ok = H.order == g_order
        stab_ok = stabilizer_of_zero(H).order == 1
        surj_ok = len(orbit_of_zero(H)) == g_order
        # direct transitive-plus-free check, independent of the predicates
        images0 = {tuple(hol.act(x, points[0])) for x in H.elements}
        fixed = sum(
            1
            for x in H.elements
            for h in points
            if tuple(hol.act(x, h)) == tuple(h)
        )
        direct = len(images0) == g_order and fixed == len(points)
        for pair_implies in [
            (order_ok and stab_ok),
            (order_ok and surj_ok),
            (stab_ok and surj_ok),
        ]:
            if pair_implies:
                assert direct and order_ok and stab_ok and surj_ok
        assert H.order == len(orbit_of_zero(H)) * stabilizer_of_zero(H).order
    _report(5, "regularity characterisations", "1000 seeded subgroups of Hol(C2xC4)", t0)


def _orbit_with_witnesses(H, aut_rows):
    """Map orbit-member key -> (0,beta) row with H^beta equal to that member."""
    hol = H.hol
    out = {H.key: hol.identity}
    frontier = [(H, hol.identity)]
    while frontier:
        nxt = []
        for sub, word in frontier:
            for row in aut_rows:
                img = conjugate_subgroup(row, sub)
                if img.key not in out:
                    witness = hol.mul(row, word)
                    out[img.key] = witness
                    nxt.append((img, witness))
        frontier = nxt
    return out


def test_criterion_6_conjugation_properties(spec_run):
    t0 = time.time()
    total = 0
    for text in ORACLE_SPECS:
        run = spec_run(text)
        hol = run.hol
        aut_rows = aut_conjugator_rows(hol)
        aut_mats = autgroup.matrix_closure(run.spec, autgroup.aut_generators(run.spec))
        rng = np.random.default_rng(6)
        for H in run.oracle_subs:
            witnesses = _orbit_with_witnesses(H, aut_rows)
            for _ in range(100):
                g = rng.integers(0, run.spec.factors)
                beta = aut_mats[rng.integers(len(aut_mats))]
                x = hol.element(g, beta)
                K = conjugate_subgroup(x, H)
                assert is_regular(K)
                witness = witnesses.get(K.key)
                assert witness is not None, "conjugate left the Aut-orbit"
                assert np.all(hol.g_part(witness) == 0)
                assert conjugate_subgroup(witness, H) == K
                total += 1
    _report(6, "conjugation properties", f"{total} conjugations with explicit witnesses", t0)


def test_criterion_7_complements_cross_check(spec_run):
    t0 = time.time()
    total = 0
    for text in ORACLE_SPECS:
        run = spec_run(text)
        if run.spec.order > 16:
            continue
        amb = Ambient(run.hol, run.sylow.elements)
        triples = []
        seen = set()

        def record(a, A, N, B):
            key = (subgroup_key(A), subgroup_key(N), subgroup_key(B))
            if key not in seen:
                seen.add(key)
                triples.append((A.copy(), N.copy(), B.copy()))

        enumerate_layered(run.sylow, run.spec.order, triple_recorder=record)
        for A, N, B in triples:
            lin = [subgroup_key(u) for u in complements_idx(amb, A, N, B, validate=False)]
            brute = [subgroup_key(u) for u in brute_force_complements_idx(amb, A, N, B)]
            assert lin == brute, f"complement mismatch on {text}"
        total += len(triples)
    # analytic cases: none for C2 in C4, two for C2 in C2 x C2
    hol4 = Hol(GroupSpec((4,)))
    assert complements(
        translations_subgroup(hol4),
        closure(hol4, [hol4.translation([2])]),
        closure(hol4, []),
    ) == []
    hol22 = Hol(GroupSpec((2, 2)))
    two = complements(
        translations_subgroup(hol22),
        closure(hol22, [hol22.translation([1, 0])]),
        closure(hol22, []),
    )
    assert len(two) == 2
    assert [c.key for c in two] == [
        c.key
        for c in complements_brute_force(
            translations_subgroup(hol22),
            closure(hol22, [hol22.translation([1, 0])]),
            closure(hol22, []),
        )
    ]
    _report(7, "complement cross-check", f"{total} run triples + analytic cases", t0)


def test_criterion_8_determinism_and_resume(tmp_path):
    t0 = time.time()
    # (a) jobs=1 vs jobs=8 classification output, byte for byte
    a, b = tmp_path / "j1.classes", tmp_path / "j8.classes"
    assert cli_main(["enumerate", "--group", "2,4", "--prime", "2", "--jobs", "1", "--out", str(a)]) == 0
    assert cli_main(["enumerate", "--group", "2,4", "--prime", "2", "--jobs", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    # (b) paused mid-run, resumed: byte-identical class list
    spec = GroupSpec((2, 4))
    hol = Hol(spec)
    from braceforge.holomorph import sylow_p_hol_generators

    S = closure(hol, sylow_p_hol_generators(hol, 2))
    full = enumerate_layered(S, spec.order, tmp_path / "full")
    with pytest.raises(EnumerationPaused):
        enumerate_layered(S, spec.order, tmp_path / "part", stop_after_layer=1)
    resumed = enumerate_layered(S, spec.order, tmp_path / "part", resume=True)
    f1, f2 = tmp_path / "full.classes", tmp_path / "part.classes"
    write_class_list(f1, spec, classify_braces(full))
    write_class_list(f2, spec, classify_braces(resumed))
    assert f1.read_bytes() == f2.read_bytes()

    # (b') a genuinely SIGKILLed subprocess run, resumed from its checkpoints
    ck = tmp_path / "ck44"
    out_clean = tmp_path / "clean44.classes"
    out_resumed = tmp_path / "resumed44.classes"
    args = [
        sys.executable, "-m", "braceforge.cli", "enumerate",
        "--group", "4,4", "--prime", "2",
        "--checkpoint-dir", str(ck), "--out", str(out_resumed),
    ]
    proc = subprocess.Popen(args, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    deadline = time.time() + 240
    while time.time() < deadline:
        if (ck / "layer_0001.ckpt").exists() or proc.poll() is not None:
            break
        time.sleep(0.01)
    if proc.poll() is None:
        proc.send_signal(signal.SIGKILL)
        proc.wait()
    res = subprocess.run(args + ["--resume"], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert cli_main(["enumerate", "--group", "4,4", "--prime", "2", "--out", str(out_clean)]) == 0
    assert out_clean.read_bytes() == out_resumed.read_bytes()
    _report(8, "determinism and resume", "jobs bytes equal; paused and killed runs resume identically", t0)


def test_criterion_9_orbit_counting(spec_run):
    t0 = time.time()
    details = []
    for text in ORACLE_SPECS:
        run = spec_run(text)
        total_length = sum(inv.class_length for _rep, inv in run.oracle_rows)
        assert total_length == len(run.oracle_subs), text
        details.append(f"{text}:{len(run.oracle_subs)}")
    _report(9, "orbit counting", " ".join(details), t0)
