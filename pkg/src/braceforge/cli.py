"""Batch front end.

Subcommands:

* ``enumerate`` - run the layered pipeline on a Sylow p-subgroup of
  Hol(G), classify the survivors, write a class-list file.
* ``oracle`` - brute-force all regular subgroups, classify, write a
  class-list (or a raw subgroup list with ``--raw``).
* ``verify`` - run both and compare the classified representative sets.
* ``classify`` - re-classify a subgroup or class list from disk.
* ``report`` - tabulate a class list by multiplicative-group fingerprint.

Exit codes: 0 success, 2 verification mismatch, 3 integrity error,
4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .abelian import GroupSpec
from .classify import classify_braces
from .classlist import read_class_list, read_subgroup_list, write_class_list, write_subgroup_list
from .errors import CapacityError, IntegrityError
from .holomorph import Hol, Subgroup, aut_conjugator_rows, sylow_p_hol_generators
from .layered import brute_force_regular_oracle, enumerate_layered
from .subgroups import closure

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_INTEGRITY = 3
EXIT_CAPACITY = 4


def _add_group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", required=True, help="cyclic factor orders, e.g. 4,4,4")
    p.add_argument("--prime", type=int, required=True, help="the prime p of the p-group")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braceforge")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="layered enumeration + classification")
    _add_group_args(p_enum)
    p_enum.add_argument("--checkpoint-dir", default=None)
    p_enum.add_argument("--resume", action="store_true")
    p_enum.add_argument("--jobs", type=int, default=1)
    p_enum.add_argument("--out", required=True)

    p_oracle = sub.add_parser("oracle", help="brute-force regular subgroups")
    _add_group_args(p_oracle)
    p_oracle.add_argument("--jobs", type=int, default=1)
    p_oracle.add_argument("--out", required=True)
    p_oracle.add_argument("--raw", action="store_true", help="write the saturated subgroup list instead")

    p_verify = sub.add_parser("verify", help="compare pipeline against the oracle")
    _add_group_args(p_verify)
    p_verify.add_argument("--checkpoint-dir", default=None)
    p_verify.add_argument("--jobs", type=int, default=1)

    p_classify = sub.add_parser("classify", help="classify subgroups from a file")
    p_classify.add_argument("--in", dest="infile", required=True)
    p_classify.add_argument("--jobs", type=int, default=1)
    p_classify.add_argument("--out", required=True)

    p_report = sub.add_parser("report", help="counts by multiplicative-group fingerprint")
    p_report.add_argument("--in", dest="infile", required=True)
    p_report.add_argument("--out", default=None, help="output file (default: stdout)")
    p_report.add_argument("--format", choices=["tsv"], default="tsv")
    p_report.add_argument("--id-map", default=None, help="JSON file mapping fingerprint ids to labels")
    return parser


def _sylow_subgroup(spec: GroupSpec, p: int) -> Subgroup:
    hol = Hol(spec)
    return closure(hol, sylow_p_hol_generators(hol, p))


def _pipeline_classes(spec: GroupSpec, p: int, checkpoint_dir, resume: bool, jobs: int):
    S = _sylow_subgroup(spec, p)
    survivors = enumerate_layered(S, spec.order, checkpoint_dir, resume=resume)
    return classify_braces(survivors, jobs=jobs)


def cmd_enumerate(args) -> int:
    spec = GroupSpec.parse(args.group)
    _require_p_group(spec, args.prime)
    rows = _pipeline_classes(spec, args.prime, args.checkpoint_dir, args.resume, args.jobs)
    write_class_list(args.out, spec, rows)
    buckets = len({(r[1].mult_fp, r[1].kernel_fp, r[1].quotient_fp) for r in rows})
    print(f"classes={len(rows)} buckets={buckets} out={args.out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = GroupSpec.parse(args.group)
    _require_p_group(spec, args.prime)
    subs = brute_force_regular_oracle(spec, args.prime)
    if args.raw:
        write_subgroup_list(args.out, spec, subs)
        print(f"subgroups={len(subs)} out={args.out}")
        return EXIT_OK
    rows = classify_braces(subs, jobs=args.jobs)
    write_class_list(args.out, spec, rows)
    print(f"classes={len(rows)} subgroups={len(subs)} out={args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = GroupSpec.parse(args.group)
    _require_p_group(spec, args.prime)
    pipeline = _pipeline_classes(spec, args.prime, args.checkpoint_dir, False, args.jobs)
    oracle_rows = classify_braces(brute_force_regular_oracle(spec, args.prime), jobs=args.jobs)
    pipe_keys = {sub.key for sub, _inv in pipeline}
    oracle_keys = {sub.key for sub, _inv in oracle_rows}
    if pipe_keys == oracle_keys:
        print(f"PASS group={spec} classes={len(pipe_keys)}")
        return EXIT_OK
    only_pipe = len(pipe_keys - oracle_keys)
    only_oracle = len(oracle_keys - pipe_keys)
    print(
        f"FAIL group={spec} pipeline={len(pipe_keys)} oracle={len(oracle_keys)} "
        f"pipeline-only={only_pipe} oracle-only={only_oracle}"
    )
    for sub, _inv in pipeline:
        if sub.key not in oracle_keys:
            print(f"  pipeline-only: {_gens_text(sub)}")
    for sub, _inv in oracle_rows:
        if sub.key not in pipe_keys:
            print(f"  oracle-only: {_gens_text(sub)}")
    return EXIT_MISMATCH


def _gens_text(sub: Subgroup) -> str:
    from .checkpoint import subgroup_line

    return subgroup_line(sub.hol, sub.generating_set())


def cmd_classify(args) -> int:
    spec, subs = read_subgroup_list(args.infile)
    rows = classify_braces(subs, jobs=args.jobs)
    write_class_list(args.out, spec, rows)
    print(f"classes={len(rows)} in={args.infile} out={args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    _spec, rows = read_class_list(args.infile)
    id_map = {}
    if args.id_map:
        id_map = json.loads(Path(args.id_map).read_text(encoding="utf-8"))
    counts: dict[str, int] = {}
    for (mfp, _kfp, _qfp), _length, _sub in rows:
        fid = hashlib.sha256(mfp.encode()).hexdigest()[:12]
        counts[fid] = counts.get(fid, 0) + 1
    lines = []
    for fid in sorted(counts):
        label = id_map.get(fid, fid)
        lines.append(f"{label}\t{counts[fid]}")
    lines.append(f"total\t{sum(counts.values())}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _require_p_group(spec: GroupSpec, p: int) -> None:
    ok, spec_p = spec.is_p_group()
    if not ok or spec_p != p:
        raise IntegrityError(f"group {spec} is not a {p}-group")


_COMMANDS = {
    "enumerate": cmd_enumerate,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    raise SystemExit(main())
