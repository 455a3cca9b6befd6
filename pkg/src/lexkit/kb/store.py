"""Versioned statute store.

A lineage is identified by (category, title); every ingest of an existing
lineage bumps the version and keeps prior versions in the store. Only the
highest version per lineage is "active" (eligible for indexing).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from ..errors import EmptyBody, MetadataMissing, UnknownDocument


@dataclass(frozen=True)
class LegalDocument:
    doc_id: str
    category: str
    title: str
    body: str
    version: int
    effective_date: str | None = None


class DocumentStore:
    """In-memory store of all document versions, optionally persisted as
    one JSON record per line (all versions retained)."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._by_lineage: dict[tuple[str, str], list[LegalDocument]] = {}
        self._by_id: dict[str, list[LegalDocument]] = {}
        self._counter = 0

    def ingest_document(self, raw_text: str, metadata: Mapping[str, str]) -> LegalDocument:
        if not raw_text or not raw_text.strip():
            raise EmptyBody("document body is empty")
        category = metadata.get("category")
        title = metadata.get("title")
        if not category or not title:
            raise MetadataMissing("metadata must include category and title")
        with self._lock:
            lineage = self._by_lineage.setdefault((category, title), [])
            if lineage:
                doc_id = lineage[-1].doc_id
                version = lineage[-1].version + 1
            else:
                self._counter += 1
                doc_id = f"doc-{self._counter:05d}"
                version = 1
            doc = LegalDocument(
                doc_id=doc_id,
                category=category,
                title=title,
                body=raw_text,
                version=version,
                effective_date=metadata.get("effective_date"),
            )
            lineage.append(doc)
            self._by_id.setdefault(doc_id, []).append(doc)
            return doc

    def get(self, doc_id: str, version: int | None = None) -> LegalDocument:
        with self._lock:
            versions = self._by_id.get(doc_id)
            if not versions:
                raise UnknownDocument(doc_id)
            if version is None:
                return versions[-1]
            for doc in versions:
                if doc.version == version:
                    return doc
            raise UnknownDocument(f"{doc_id} v{version}")

    def active_documents(self) -> list[LegalDocument]:
        """Latest version of every lineage, in doc_id order."""
        with self._lock:
            latest = [versions[-1] for versions in self._by_id.values()]
        return sorted(latest, key=lambda d: d.doc_id)

    def all_versions(self) -> list[LegalDocument]:
        with self._lock:
            return sorted(
                (d for versions in self._by_id.values() for d in versions),
                key=lambda d: (d.doc_id, d.version),
            )

    def find_by_title(self, title: str) -> LegalDocument | None:
        """Active document whose title equals or ends with `title`
        (citations often drop the jurisdiction prefix)."""
        exact = None
        suffix = None
        for doc in self.active_documents():
            if doc.title == title:
                exact = doc
                break
            if suffix is None and doc.title.endswith(title):
                suffix = doc
        return exact or suffix

    def __len__(self) -> int:
        with self._lock:
            return len(self._by_id)

    # --- persistence: one JSON record per line, all versions ---

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            for doc in self.all_versions():
                fh.write(json.dumps(doc.__dict__, ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "DocumentStore":
        store = cls()
        with Path(path).open("r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                doc = store.ingest_document(
                    obj["body"],
                    {
                        "category": obj["category"],
                        "title": obj["title"],
                        "effective_date": obj.get("effective_date"),
                    },
                )
                # versions were saved in ascending order per lineage, so the
                # re-assigned numbers match; guard against reordered files
                if doc.version != obj["version"] or doc.doc_id != obj["doc_id"]:
                    raise UnknownDocument(
                        f"store file out of order near {obj['doc_id']} v{obj['version']}"
                    )
        return store


def read_ingest_lines(path: str | Path) -> Iterable[dict]:
    """Parse a document ingest file: one record per line with fields
    {category, title, body, effective_date?}."""
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            missing = [k for k in ("category", "title", "body") if k not in obj]
            if missing:
                raise MetadataMissing(f"line {lineno}: missing {missing}")
            yield obj
