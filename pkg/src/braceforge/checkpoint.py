"""Layer checkpoints: plain-text, atomic, resumable.

File layout (UTF-8, one file per finished layer, ``layer_NNNN.ckpt``):

    BRACEFORGE-CKPT 1
    4,4,4
    layer=<k>
    <subgroup per line: ';'-joined element encodings of a generating set>
    count=<n>

Element encodings are ``g | matrix`` with matrix rows themselves separated
by ';'; the parser resolves the ambiguity because the matrix row count is
known from the group spec.  Files are written to a temp name and renamed,
so a killed run leaves either a complete file or none; the count footer
rejects truncation by other causes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .abelian import GroupSpec
from .errors import IntegrityError
from .holomorph import Hol, Subgroup

HEADER = "BRACEFORGE-CKPT 1"
FORMAT_VERSION = 1


@dataclass
class LayerState:
    """One finished layer: its subgroup classes (normalisers optional)."""

    spec: GroupSpec
    layer_index: int
    classes: list[tuple[Subgroup, Subgroup | None]]
    format_version: int = FORMAT_VERSION


def layer_filename(layer_index: int) -> str:
    return f"layer_{layer_index:04d}.ckpt"


def subgroup_line(hol: Hol, generating_rows: np.ndarray) -> str:
    return ";".join(hol.element_text(row) for row in np.atleast_2d(generating_rows))


def parse_subgroup_line(hol: Hol, line: str) -> np.ndarray:
    """Recover generator rows from a ';'-joined line of element encodings."""
    tokens = line.split(";")
    rows = []
    i = 0
    per_element = hol.n  # the '|' token plus n-1 further matrix-row tokens
    while i < len(tokens):
        if "|" not in tokens[i]:
            raise IntegrityError(f"malformed subgroup line near {tokens[i]!r}")
        chunk = tokens[i : i + per_element]
        if len(chunk) != per_element or any("|" in t for t in chunk[1:]):
            raise IntegrityError(f"malformed subgroup line near {tokens[i]!r}")
        rows.append(hol.parse_element(";".join(chunk)))
        i += per_element
    if not rows:
        raise IntegrityError("empty subgroup line")
    return np.array(rows, dtype=np.int64)


def checkpoint_save(
    state: LayerState,
    directory: str | Path,
    generating_rows: list[np.ndarray] | None = None,
) -> Path:
    """Write a layer file atomically; returns its path.

    ``generating_rows`` may supply precomputed generating sets (aligned with
    ``state.classes``); otherwise greedy generating sets are derived.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    hol = state.classes[0][0].hol if state.classes else Hol(state.spec)
    lines = [HEADER, state.spec.text(), f"layer={state.layer_index}"]
    for i, (sub, _norm) in enumerate(state.classes):
        rows = generating_rows[i] if generating_rows is not None else sub.generating_set()
        lines.append(subgroup_line(hol, rows))
    lines.append(f"count={len(state.classes)}")
    path = directory / layer_filename(state.layer_index)
    tmp = directory / (layer_filename(state.layer_index) + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)
    return path


def load_layer_file(path: str | Path, expected_spec: GroupSpec | None = None) -> LayerState:
    """Strict parse of one layer file; IntegrityError on any inconsistency."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IntegrityError(f"cannot read checkpoint {path}: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 4:
        raise IntegrityError(f"checkpoint {path} is truncated")
    if lines[0] != HEADER:
        raise IntegrityError(f"checkpoint {path} has bad header {lines[0]!r}")
    try:
        spec = GroupSpec.parse(lines[1])
    except Exception as exc:
        raise IntegrityError(f"checkpoint {path} has bad spec line {lines[1]!r}") from exc
    if expected_spec is not None and spec != expected_spec:
        raise IntegrityError(
            f"checkpoint {path} is for spec {spec}, expected {expected_spec}"
        )
    if not lines[2].startswith("layer="):
        raise IntegrityError(f"checkpoint {path} has bad layer line {lines[2]!r}")
    try:
        layer_index = int(lines[2][len("layer=") :])
    except ValueError as exc:
        raise IntegrityError(f"checkpoint {path} has bad layer line {lines[2]!r}") from exc
    if not lines[-1].startswith("count="):
        raise IntegrityError(f"checkpoint {path} is missing its count footer")
    try:
        count = int(lines[-1][len("count=") :])
    except ValueError as exc:
        raise IntegrityError(f"checkpoint {path} has bad count footer") from exc
    body = lines[3:-1]
    if len(body) != count:
        raise IntegrityError(
            f"checkpoint {path} count footer says {count}, found {len(body)} records"
        )
    hol = Hol(spec)
    classes: list[tuple[Subgroup, Subgroup | None]] = []
    from .subgroups import closure  # deferred: avoids an import cycle

    for line in body:
        gens = parse_subgroup_line(hol, line)
        classes.append((closure(hol, gens), None))
    return LayerState(spec=spec, layer_index=layer_index, classes=classes)


def latest_checkpoint(directory: str | Path, expected_spec: GroupSpec | None = None) -> LayerState | None:
    """Load the newest layer file in a directory; None when there is none."""
    directory = Path(directory)
    if not directory.exists():
        return None
    files = sorted(directory.glob("layer_*.ckpt"))
    if not files:
        return None
    return load_layer_file(files[-1], expected_spec)


def checkpoint_load(directory: str | Path, expected_spec: GroupSpec | None = None) -> LayerState:
    """Load the newest layer file; IntegrityError when nothing valid exists."""
    state = latest_checkpoint(directory, expected_spec)
    if state is None:
        raise IntegrityError(f"no checkpoint files in {directory}")
    return state
