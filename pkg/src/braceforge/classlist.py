"""Text formats for classified class lists and raw subgroup lists.

Class-list file:

    BRACEFORGE-CLASSES 1
    <group spec>
    <mult_fp;kernel_fp;quotient_fp>\t<class_length>\t<generating set>
    ...
    total=<n>

Subgroup-list file (unclassified):

    BRACEFORGE-SUBS 1
    <group spec>
    <generating set>
    ...
    count=<n>

Generating sets reuse the ';'-joined element encoding of the checkpoint
format.  Both writers emit deterministic bytes for identical inputs.
"""

from __future__ import annotations

from pathlib import Path

from .abelian import GroupSpec
from .checkpoint import parse_subgroup_line, subgroup_line
from .classify import BraceInvariants
from .errors import IntegrityError
from .holomorph import Hol, Subgroup
from .subgroups import closure

CLASS_HEADER = "BRACEFORGE-CLASSES 1"
SUBS_HEADER = "BRACEFORGE-SUBS 1"


def write_class_list(
    path: str | Path,
    spec: GroupSpec,
    rows: list[tuple[Subgroup, BraceInvariants]],
) -> None:
    hol = rows[0][0].hol if rows else Hol(spec)
    lines = [CLASS_HEADER, spec.text()]
    for sub, inv in rows:
        invariants = ";".join(
            [inv.mult_fp.text(), inv.kernel_fp.text(), inv.quotient_fp.text()]
        )
        gens = subgroup_line(hol, sub.generating_set())
        lines.append(f"{invariants}\t{inv.class_length}\t{gens}")
    lines.append(f"total={len(rows)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_class_list(path: str | Path) -> tuple[GroupSpec, list[tuple[tuple[str, str, str], int, Subgroup]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 3 or lines[0] != CLASS_HEADER:
        raise IntegrityError(f"{path} is not a class-list file")
    spec = GroupSpec.parse(lines[1])
    if not lines[-1].startswith("total="):
        raise IntegrityError(f"{path} is missing its total footer")
    total = int(lines[-1][len("total=") :])
    body = lines[2:-1]
    if len(body) != total:
        raise IntegrityError(f"{path} footer says {total} rows, found {len(body)}")
    hol = Hol(spec)
    out = []
    for line in body:
        try:
            invariants, length, gens = line.split("\t")
            mfp, kfp, qfp = invariants.split(";")
        except ValueError as exc:
            raise IntegrityError(f"malformed class-list row {line!r}") from exc
        sub = closure(hol, parse_subgroup_line(hol, gens))
        out.append(((mfp, kfp, qfp), int(length), sub))
    return spec, out


def write_subgroup_list(path: str | Path, spec: GroupSpec, subs: list[Subgroup]) -> None:
    hol = subs[0].hol if subs else Hol(spec)
    lines = [SUBS_HEADER, spec.text()]
    for sub in subs:
        lines.append(subgroup_line(hol, sub.generating_set()))
    lines.append(f"count={len(subs)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_subgroup_list(path: str | Path) -> tuple[GroupSpec, list[Subgroup]]:
    """Read a subgroup-list file; class-list files are accepted as well."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise IntegrityError(f"{path} is empty")
    if lines[0] == CLASS_HEADER:
        _spec, rows = read_class_list(path)
        return _spec, [sub for _inv, _len, sub in rows]
    if lines[0] != SUBS_HEADER or len(lines) < 3:
        raise IntegrityError(f"{path} is not a subgroup-list file")
    spec = GroupSpec.parse(lines[1])
    if not lines[-1].startswith("count="):
        raise IntegrityError(f"{path} is missing its count footer")
    count = int(lines[-1][len("count=") :])
    body = lines[2:-1]
    if len(body) != count:
        raise IntegrityError(f"{path} footer says {count} rows, found {len(body)}")
    hol = Hol(spec)
    return spec, [closure(hol, parse_subgroup_line(hol, line)) for line in body]
