"""Group-spec documents: JSON text describing Z^d x F with a generating list.

    {
      "rank": 1,
      "torsion": {"invariants": [2]},        # or {"table": [[...], ...]}
      "generators": [{"vec": [1], "tor": 0}, ...],
      "kind": "symmetric"                      # or "monoid"
    }

Serialisation is canonical (sorted keys, two-space indent, trailing newline),
so emitted documents re-ingest byte-identically.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

from .groups import (
    KINDS,
    GeneratingSet,
    GroupElement,
    GroupError,
    GroupSpec,
    TorsionGroup,
)


class IngestionError(ValueError):
    pass


def spec_to_doc(spec: GroupSpec, S: GeneratingSet) -> dict:
    tg = spec.torsion
    if tg.invariants is not None:
        torsion = {"invariants": list(tg.invariants)}
    else:
        torsion = {"table": tg.table.tolist(), "name": tg.name}
    return {
        "rank": spec.rank,
        "torsion": torsion,
        "generators": [{"vec": list(g.vec), "tor": g.tor} for g in S],
        "kind": S.kind,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def doc_hash(doc: dict) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


def _field(doc, key, kind, where=""):
    path = f"{where}.{key}" if where else key
    if key not in doc:
        raise IngestionError(f"missing field '{path}'")
    value = doc[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise IngestionError(f"field '{path}' must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise IngestionError(f"field '{path}' must be of type {kind.__name__}")
    return value


def doc_to_spec(doc: dict, *, validate: bool = False) -> tuple[GroupSpec, GeneratingSet]:
    if not isinstance(doc, dict):
        raise IngestionError("document must be a JSON object")
    rank = _field(doc, "rank", int)
    if rank < 0:
        raise IngestionError("field 'rank' must be >= 0")
    torsion = _field(doc, "torsion", dict)
    try:
        if "invariants" in torsion:
            inv = _field(torsion, "invariants", list, "torsion")
            if not all(isinstance(x, int) for x in inv):
                raise IngestionError("field 'torsion.invariants' must list integers")
            tg = TorsionGroup.abelian(inv)
        elif "table" in torsion:
            table = _field(torsion, "table", list, "torsion")
            tg = TorsionGroup(table, name=torsion.get("name"))
        else:
            raise IngestionError("field 'torsion' needs 'invariants' or 'table'")
    except GroupError as exc:
        raise IngestionError(f"field 'torsion': {exc}") from exc
    spec = GroupSpec(rank, tg)
    kind = _field(doc, "kind", str)
    if kind not in KINDS:
        raise IngestionError(f"field 'kind' must be one of {KINDS}")
    elements = []
    for i, item in enumerate(_field(doc, "generators", list)):
        where = f"generators[{i}]"
        if not isinstance(item, dict):
            raise IngestionError(f"field '{where}' must be an object")
        vec = _field(item, "vec", list, where)
        tor = _field(item, "tor", int, where)
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in vec):
            raise IngestionError(f"field '{where}.vec' must list integers")
        g = GroupElement(tuple(vec), tor)
        try:
            spec.check(g)
        except (GroupError, OverflowError) as exc:
            raise IngestionError(f"field '{where}': {exc}") from exc
        elements.append(g)
    try:
        S = GeneratingSet.build(spec, elements, kind, validate=validate)
    except GroupError as exc:
        if validate:
            raise
        raise IngestionError(f"field 'generators': {exc}") from exc
    return spec, S


def loads(text: str) -> tuple[GroupSpec, GeneratingSet]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return doc_to_spec(doc)


def load(path: str | Path) -> tuple[GroupSpec, GeneratingSet]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    try:
        return loads(text)
    except IngestionError as exc:
        raise IngestionError(f"{path}: {exc}") from exc


def parse_torsion(token: str) -> TorsionGroup:
    """'1' trivial, '6' cyclic, '2x2' invariant factors, 'S3' symmetric group, 'V4' Klein four."""
    token = token.strip()
    if re.fullmatch(r"[Ss]\d+", token):
        n = int(token[1:])
        if n < 1 or n > 6:
            raise IngestionError(f"symmetric group {token} not supported")
        return TorsionGroup.symmetric(n)
    if token.upper() == "V4":
        return TorsionGroup.abelian([2, 2])
    if re.fullmatch(r"\d+(x\d+)*", token):
        factors = [int(x) for x in token.split("x")]
        if factors == [1]:
            return TorsionGroup.trivial()
        try:
            return TorsionGroup.abelian(factors)
        except GroupError as exc:
            raise IngestionError(str(exc)) from exc
    raise IngestionError(f"cannot parse torsion group {token!r}")
