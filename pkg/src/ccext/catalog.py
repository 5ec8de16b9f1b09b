"""JSONL catalog of content-addressed records.

Each line is ``{"kind": ..., "payload": ..., "digest": ...}`` where the
digest is the SHA-256 of the payload's canonical serialization (sorted
keys, no whitespace).  Appending a record whose digest is already present
is a no-op, so reruns of a census job leave the file unchanged.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .cyclic_auto import AutoTriple, epf_from_triple, presentation
from .epf import epf_from_json
from .errors import InternalError
from .extension import extension_from_json
from .groups import FiniteGroup, cyclic_group, dihedral_group, group_from_json
from .skewmorph import skew_from_json

KINDS = ("skew", "epf", "extension", "triple", "class")


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CatalogRecord:
    kind: str
    payload: dict
    digest: str

    @classmethod
    def make(cls, kind: str, payload: dict) -> "CatalogRecord":
        if kind not in KINDS:
            raise ValueError(f"unknown record kind {kind!r}")
        return cls(kind, payload, digest(payload))

    def to_line(self) -> str:
        return canonical_json({"kind": self.kind, "payload": self.payload, "digest": self.digest})

    @classmethod
    def from_line(cls, line: str) -> "CatalogRecord":
        raw = json.loads(line)
        rec = cls(raw["kind"], raw["payload"], raw["digest"])
        if digest(rec.payload) != rec.digest:
            raise ValueError(f"digest mismatch for {rec.kind} record {rec.digest[:12]}")
        return rec


class Catalog:
    def __init__(self, path):
        self.path = Path(path)

    def __iter__(self) -> Iterator[CatalogRecord]:
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield CatalogRecord.from_line(line)

    def digests(self) -> set[str]:
        return {rec.digest for rec in self}

    def append(self, records: Iterable[CatalogRecord]) -> int:
        """Write records not already present; returns how many were written."""
        seen = self.digests()
        written = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            for rec in records:
                if rec.digest in seen:
                    continue
                fh.write(rec.to_line() + "\n")
                seen.add(rec.digest)
                written += 1
        return written


def group_from_label(label: str) -> FiniteGroup:
    kind, _, arg = label.partition(":")
    if kind == "cyclic":
        return cyclic_group(int(arg))
    if kind == "dihedral":
        return dihedral_group(int(arg))
    if kind == "file":
        return group_from_json(Path(arg).read_text(encoding="utf-8"))
    raise ValueError(f"cannot rebuild group from label {label!r}")


def revalidate(rec: CatalogRecord, group: Optional[FiniteGroup] = None):
    """Re-run the owning module's validator on a record's payload."""
    p = rec.payload
    if rec.kind == "skew":
        return skew_from_json(p, group or group_from_label(p["group"]))
    if rec.kind == "epf":
        return epf_from_json(p, group or group_from_label(p["skew"]["group"]))
    if rec.kind == "extension":
        return extension_from_json(p, group or group_from_label(p["skew"]["group"]))
    if rec.kind == "triple":
        tr = AutoTriple(p["k"], p["n"], p["r"], p["m"], p["s"], p["t"])
        if not tr.is_valid():
            raise InternalError(f"stored triple {tr} violates its conditions")
        epf = epf_from_triple(tr)
        if list(epf.values) != p["Pi"] or presentation(tr).relations != p["presentation"]:
            raise InternalError(f"stored triple {tr} does not regenerate its values")
        return tr
    if rec.kind == "class":
        if p["representative"] not in p["members"]:
            raise InternalError("class representative is not a member")
        return p
    raise ValueError(f"unknown record kind {rec.kind!r}")
